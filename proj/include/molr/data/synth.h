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
#ifndef MOLR_DATA_SYNTH_H_
#define MOLR_DATA_SYNTH_H_

#include <cstdint>

#include "molr/core/matrix.h"
#include "molr/data/interactions.h"

namespace molr {

struct SyntheticSpec {
  size_t n_users = 2000;
  size_t n_items = 1000;
  size_t true_rank = 64;
  size_t interactions_per_user = 20;
  uint64_t seed = 0;

  void Validate() const;
};

struct SyntheticData {
  InteractionSet set;
  BasicMatrix<double> scores;  // n_users x n_items ground truth S = A B^T
};

// Each user's items are drawn without replacement from softmax(S_u);
// timestamps are a random order of the drawn items.
SyntheticData Synthesize(const SyntheticSpec& spec);

}  // namespace molr

#endif  // MOLR_DATA_SYNTH_H_
