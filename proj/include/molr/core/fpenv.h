// Copyright 2026 The molr Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef MOLR_CORE_FPENV_H_
#define MOLR_CORE_FPENV_H_

#if defined(__SSE__) || defined(_M_X64)
#include <xmmintrin.h>
#define MOLR_HAVE_MXCSR 1
#endif

namespace molr {

// Sets flush-to-zero and denormals-are-zero on the calling thread for the
// guard's lifetime. Training produces long tails of tiny gradients which
// are slow on x86 when kept subnormal. No-op on other targets.
class ScopedFlushDenormals {
 public:
#ifdef MOLR_HAVE_MXCSR
  ScopedFlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~ScopedFlushDenormals() { _mm_setcsr(saved_); }
#else
  ScopedFlushDenormals() = default;
#endif
  ScopedFlushDenormals(const ScopedFlushDenormals&) = delete;
  ScopedFlushDenormals& operator=(const ScopedFlushDenormals&) = delete;

 private:
#ifdef MOLR_HAVE_MXCSR
  unsigned saved_;
#endif
};

}  // namespace molr

#endif  // MOLR_CORE_FPENV_H_
