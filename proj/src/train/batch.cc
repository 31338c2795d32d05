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
#include "molr/train/batch.h"

#include "molr/core/error.h"

namespace molr {

template <typename T>
TrainBatch<T> MakeBatch(std::span<const TrainPair> pairs, size_t n_items,
                        size_t num_negatives, size_t groups, double dropout_p,
                        Rng& rng) {
  if (n_items == 0) throw Error(ErrorCode::kEmptyCorpus, "no items to sample");
  TrainBatch<T> b;
  for (const auto& p : pairs) {
    b.users.push_back(p.user);
    b.positives.push_back(p.item);
  }
  b.negatives.resize(num_negatives);
  for (auto& n : b.negatives) n = static_cast<uint32_t>(rng.Below(n_items));
  if (dropout_p > 0.0 && groups > 0) {
    const T keep = static_cast<T>(1.0 / (1.0 - dropout_p));
    b.gate_mask.resize(b.size() * b.slots() * groups);
    for (auto& m : b.gate_mask) m = rng.Uniform() < dropout_p ? T{0} : keep;
  }
  return b;
}

template TrainBatch<float> MakeBatch<float>(std::span<const TrainPair>, size_t,
                                            size_t, size_t, double, Rng&);
template TrainBatch<double> MakeBatch<double>(std::span<const TrainPair>,
                                              size_t, size_t, size_t, double,
                                              Rng&);

}  // namespace molr
