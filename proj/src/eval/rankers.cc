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
#include "molr/eval/rankers.h"

#include "molr/core/parallel.h"
#include "molr/core/topk.h"
#include "molr/mol/mol.h"

namespace molr {

MolRanker::MolRanker(const TowerParams<float>& params)
    : params_(params), cache_(BuildItemCache(params)) {}

void MolRanker::Score(uint32_t user, std::span<float> out) const {
  const QueryState<float> q = MakeUserQuery(params_, user);
  const std::vector<float> s = ScoreAll(cache_, params_.gating, q, params_.config.mol.tau);
  std::copy(s.begin(), s.end(), out.begin());
}

void DotRanker::Score(uint32_t user, std::span<float> out) const {
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = DotScore(params_, user, static_cast<uint32_t>(i));
  }
}

PopularityRanker::PopularityRanker(std::vector<double> frequency)
    : scores_(frequency.begin(), frequency.end()) {}

void PopularityRanker::Score(uint32_t, std::span<float> out) const {
  std::copy(scores_.begin(), scores_.end(), out.begin());
}

std::vector<uint32_t> RecommendTopK(const Ranker& ranker,
                                    std::span<const uint32_t> users, size_t k) {
  std::vector<std::vector<uint32_t>> per_user(users.size());
  ParallelFor(users.size(), [&](size_t i) {
    std::vector<float> scores(ranker.num_items());
    ranker.Score(users[i], scores);
    for (const auto& s : TopK(scores, k)) per_user[i].push_back(s.id);
  });
  std::vector<uint32_t> out;
  for (const auto& v : per_user) out.insert(out.end(), v.begin(), v.end());
  return out;
}

}  // namespace molr
