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
#include "molr/core/topk.h"

#include <algorithm>

#include "molr/core/error.h"

namespace molr {

std::vector<ScoredItem> TopK(std::span<const float> scores,
                             std::span<const uint32_t> ids, size_t k) {
  if (scores.size() != ids.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scores/ids length differ");
  }
  std::vector<ScoredItem> items(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) items[i] = {ids[i], scores[i]};
  k = std::min(k, items.size());
  std::partial_sort(items.begin(), items.begin() + static_cast<ptrdiff_t>(k),
                    items.end(), RanksBefore);
  items.resize(k);
  return items;
}

std::vector<ScoredItem> TopK(std::span<const float> scores, size_t k) {
  std::vector<ScoredItem> items(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    items[i] = {static_cast<uint32_t>(i), scores[i]};
  }
  k = std::min(k, items.size());
  std::partial_sort(items.begin(), items.begin() + static_cast<ptrdiff_t>(k),
                    items.end(), RanksBefore);
  items.resize(k);
  return items;
}

}  // namespace molr
