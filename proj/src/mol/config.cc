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
#include "molr/mol/config.h"

#include <string>

#include "molr/core/error.h"

namespace molr {

void MoLConfig::Validate() const {
  if (k_u < 1 || k_x < 1 || d < 1) {
    throw Error(ErrorCode::kConfig, "k_u, k_x and d must be >= 1");
  }
  if (!(tau >= 1.0)) {
    throw Error(ErrorCode::kConfig, "tau must be >= 1, got " + std::to_string(tau));
  }
  if (gating_hidden < 1) {
    throw Error(ErrorCode::kConfig, "gating_hidden must be >= 1");
  }
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw Error(ErrorCode::kConfig, "dropout_p must lie in [0, 1)");
  }
}

}  // namespace molr
