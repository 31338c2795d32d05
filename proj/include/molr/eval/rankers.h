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
#ifndef MOLR_EVAL_RANKERS_H_
#define MOLR_EVAL_RANKERS_H_

#include <vector>

#include "molr/eval/metrics.h"
#include "molr/mol/item_cache.h"
#include "molr/model/dot_baseline.h"
#include "molr/model/towers.h"

namespace molr {

// Inference-mode MoL over a cache built from the params at construction.
class MolRanker : public Ranker {
 public:
  explicit MolRanker(const TowerParams<float>& params);
  size_t num_items() const override { return cache_.size(); }
  void Score(uint32_t user, std::span<float> out) const override;

 private:
  const TowerParams<float>& params_;
  ItemCache<float> cache_;
};

class DotRanker : public Ranker {
 public:
  explicit DotRanker(const DotBaselineParams<float>& params) : params_(params) {}
  size_t num_items() const override { return params_.item_table.rows(); }
  void Score(uint32_t user, std::span<float> out) const override;

 private:
  const DotBaselineParams<float>& params_;
};

// Scores every item by its training frequency, for every user.
class PopularityRanker : public Ranker {
 public:
  explicit PopularityRanker(std::vector<double> frequency);
  size_t num_items() const override { return scores_.size(); }
  void Score(uint32_t user, std::span<float> out) const override;

 private:
  std::vector<float> scores_;
};

// Top-k item ids per user, for popularity analysis.
std::vector<uint32_t> RecommendTopK(const Ranker& ranker,
                                    std::span<const uint32_t> users, size_t k);

}  // namespace molr

#endif  // MOLR_EVAL_RANKERS_H_
