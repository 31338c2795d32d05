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
#ifndef MOLR_TRAIN_BATCH_H_
#define MOLR_TRAIN_BATCH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "molr/core/rng.h"

namespace molr {

struct TrainPair {
  uint32_t user = 0;
  uint32_t item = 0;
};

// One mini-batch. Every user is scored against its positive (slot 0) and
// the shared negatives (slots 1..N).
template <typename T>
struct TrainBatch {
  std::vector<uint32_t> users;
  std::vector<uint32_t> positives;
  std::vector<uint32_t> negatives;
  // Per (user, slot, group) multiplier on the gating distribution: 0 for
  // dropped entries, 1/(1-p) for kept ones. Empty means no dropout.
  std::vector<T> gate_mask;
  // Optional log q per item id for the logQ correction.
  std::vector<T> log_q;

  size_t size() const noexcept { return users.size(); }
  size_t slots() const noexcept { return negatives.size() + 1; }
};

// Negatives are drawn uniformly with replacement from [0, n_items); the
// dropout mask (groups entries per user and slot) is drawn once from rng.
template <typename T>
TrainBatch<T> MakeBatch(std::span<const TrainPair> pairs, size_t n_items,
                        size_t num_negatives, size_t groups, double dropout_p,
                        Rng& rng);

}  // namespace molr

#endif  // MOLR_TRAIN_BATCH_H_
