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
#ifndef MOLR_CORE_TOPK_H_
#define MOLR_CORE_TOPK_H_

#include <cstdint>
#include <span>
#include <vector>

namespace molr {

struct ScoredItem {
  uint32_t id = 0;
  float score = 0.0f;

  bool operator==(const ScoredItem&) const = default;
};

// Score-descending order, ascending id on ties.
inline bool RanksBefore(const ScoredItem& a, const ScoredItem& b) {
  return a.score > b.score || (a.score == b.score && a.id < b.id);
}

// The k best (id, score) pairs in RanksBefore order. ids[i] labels
// scores[i]. k is clamped to the number of scores.
std::vector<ScoredItem> TopK(std::span<const float> scores,
                             std::span<const uint32_t> ids, size_t k);

// Same, labelling scores[i] with id i.
std::vector<ScoredItem> TopK(std::span<const float> scores, size_t k);

}  // namespace molr

#endif  // MOLR_CORE_TOPK_H_
