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
#ifndef MOLR_MOL_CONFIG_H_
#define MOLR_MOL_CONFIG_H_

#include <cstddef>

namespace molr {

struct MoLConfig {
  size_t k_u = 8;             // user component embeddings
  size_t k_x = 8;             // item component embeddings
  size_t d = 32;              // component embedding dim
  double tau = 20.0;          // logit divisor, >= 1
  size_t gating_hidden = 128; // hidden width shared by the three gating nets
  double dropout_p = 0.2;     // dropout on the gating distribution (training)
  bool l2_normalized = true;  // hypersphere component embeddings

  size_t groups() const noexcept { return k_u * k_x; }

  // Throws Config on violated invariants.
  void Validate() const;
};

}  // namespace molr

#endif  // MOLR_MOL_CONFIG_H_
