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
#ifndef MOLR_EVAL_POPULARITY_H_
#define MOLR_EVAL_POPULARITY_H_

#include <cstdint>
#include <span>
#include <vector>

namespace molr {

struct PopularityHistogram {
  // num_buckets + 1 edges in log10(1 + frequency) space.
  std::vector<double> edges;
  std::vector<double> shares;
};

// Bucket index of every item: log10(1 + freq), equal-width buckets over the
// observed range, the maximum falling in the last one.
std::vector<size_t> PopularityBuckets(std::span<const double> frequency,
                                      size_t num_buckets, std::vector<double>* edges);

// Share of the recommended multiset per bucket. Throws EmptyInput on an
// empty recommendation list or corpus, OutOfRange on unknown ids.
PopularityHistogram ComputePopularityHistogram(std::span<const uint32_t> recommended,
                                               std::span<const double> frequency,
                                               size_t num_buckets = 10);

}  // namespace molr

#endif  // MOLR_EVAL_POPULARITY_H_
