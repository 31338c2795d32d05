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
#ifndef MOLR_CORE_PARALLEL_H_
#define MOLR_CORE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace molr {

// Worker count: hardware concurrency, capped by MOLR_THREADS when set.
size_t WorkerCount();

// Runs fn(i) for i in [0, n) over contiguous static chunks. fn must only
// write state owned by index i, which keeps results independent of the
// worker count.
void ParallelFor(size_t n, const std::function<void(size_t)>& fn);

}  // namespace molr

#endif  // MOLR_CORE_PARALLEL_H_
