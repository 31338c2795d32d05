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
#include "molr/eval/popularity.h"

#include <algorithm>
#include <cmath>

#include "molr/core/error.h"

namespace molr {

std::vector<size_t> PopularityBuckets(std::span<const double> frequency,
                                      size_t num_buckets, std::vector<double>* edges) {
  if (frequency.empty()) throw Error(ErrorCode::kEmptyInput, "no item frequencies");
  if (num_buckets == 0) throw Error(ErrorCode::kEmptyInput, "num_buckets must be positive");
  std::vector<double> lf(frequency.size());
  for (size_t i = 0; i < frequency.size(); ++i) {
    if (frequency[i] < 0.0) throw Error(ErrorCode::kOutOfRange, "negative frequency");
    lf[i] = std::log10(1.0 + frequency[i]);
  }
  const auto [lo_it, hi_it] = std::minmax_element(lf.begin(), lf.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(num_buckets);
  if (edges) {
    edges->resize(num_buckets + 1);
    for (size_t b = 0; b <= num_buckets; ++b) (*edges)[b] = lo + width * b;
    edges->back() = hi;
  }
  std::vector<size_t> bucket(lf.size(), 0);
  if (width <= 0.0) return bucket;
  for (size_t i = 0; i < lf.size(); ++i) {
    const auto b = static_cast<size_t>((lf[i] - lo) / width);
    bucket[i] = std::min(b, num_buckets - 1);
  }
  return bucket;
}

PopularityHistogram ComputePopularityHistogram(std::span<const uint32_t> recommended,
                                               std::span<const double> frequency,
                                               size_t num_buckets) {
  if (recommended.empty()) throw Error(ErrorCode::kEmptyInput, "no recommendations");
  PopularityHistogram h;
  const auto bucket = PopularityBuckets(frequency, num_buckets, &h.edges);
  std::vector<size_t> counts(num_buckets, 0);
  for (const uint32_t id : recommended) {
    if (id >= frequency.size()) throw Error(ErrorCode::kOutOfRange, "unknown item id");
    ++counts[bucket[id]];
  }
  h.shares.resize(num_buckets);
  for (size_t b = 0; b < num_buckets; ++b) {
    h.shares[b] = static_cast<double>(counts[b]) / static_cast<double>(recommended.size());
  }
  return h;
}

}  // namespace molr
