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
#ifndef MOLR_TRAIN_CONFIG_H_
#define MOLR_TRAIN_CONFIG_H_

#include <cstddef>
#include <cstdint>

namespace molr {

struct TrainConfig {
  size_t batch_size = 128;
  size_t num_negatives = 128;
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  size_t epochs = 10;
  uint64_t seed = 0;
  // Subtract log q(item) from every logit, q being the negative sampling
  // probability (uniform sampling makes this a constant shift).
  bool logq_correction = false;
  // Validation HR@k cutoff recorded per epoch.
  size_t eval_k = 10;
  // Validation runs every eval_every epochs and always after the last one;
  // 0 means only after the last. Skipped epochs record NaN.
  size_t eval_every = 1;

  void Validate() const;
};

}  // namespace molr

#endif  // MOLR_TRAIN_CONFIG_H_
