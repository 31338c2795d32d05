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
#include "molr/eval/metrics.h"

#include <string>

#include "molr/core/error.h"
#include "molr/core/parallel.h"

namespace molr {

size_t TargetRank(std::span<const float> scores, uint32_t target) {
  if (target >= scores.size()) {
    throw Error(ErrorCode::kOutOfRange, "target " + std::to_string(target));
  }
  const float t = scores[target];
  size_t rank = 1;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > t || (scores[i] == t && i < target)) ++rank;
  }
  return rank;
}

std::vector<size_t> TargetRanks(const Ranker& ranker,
                                std::span<const EvalPair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyEvalSet, "no evaluation pairs");
  std::vector<size_t> ranks(pairs.size());
  ParallelFor(pairs.size(), [&](size_t i) {
    std::vector<float> scores(ranker.num_items());
    ranker.Score(pairs[i].user, scores);
    ranks[i] = TargetRank(scores, pairs[i].item);
  });
  return ranks;
}

std::map<size_t, double> HitRatesFromRanks(std::span<const size_t> ranks,
                                           std::span<const size_t> ks) {
  if (ranks.empty()) throw Error(ErrorCode::kEmptyEvalSet, "no ranks");
  std::map<size_t, double> out;
  for (const size_t k : ks) {
    size_t hits = 0;
    for (const size_t r : ranks) hits += r <= k ? 1 : 0;
    out[k] = static_cast<double>(hits) / static_cast<double>(ranks.size());
  }
  return out;
}

double MrrFromRanks(std::span<const size_t> ranks) {
  if (ranks.empty()) throw Error(ErrorCode::kEmptyEvalSet, "no ranks");
  double sum = 0.0;
  for (const size_t r : ranks) sum += 1.0 / static_cast<double>(r);
  return sum / static_cast<double>(ranks.size());
}

std::map<size_t, double> HitRateAtK(const Ranker& ranker,
                                    std::span<const EvalPair> pairs,
                                    std::span<const size_t> ks) {
  const auto ranks = TargetRanks(ranker, pairs);
  return HitRatesFromRanks(ranks, ks);
}

double MeanReciprocalRank(const Ranker& ranker, std::span<const EvalPair> pairs) {
  const auto ranks = TargetRanks(ranker, pairs);
  return MrrFromRanks(ranks);
}

}  // namespace molr
