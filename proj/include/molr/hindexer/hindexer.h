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
#ifndef MOLR_HINDEXER_HINDEXER_H_
#define MOLR_HINDEXER_HINDEXER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "molr/core/matrix.h"
#include "molr/core/rng.h"
#include "molr/mol/item_cache.h"
#include "molr/quant/quant.h"

namespace molr {

enum class Comparator { kInclusive, kStrict };

// How quantized first-stage scores are compared. kRowScaled multiplies the
// int32 accumulator by the item row scale (the query scale is shared by all
// rows and dropped). kRawInt32 compares accumulators directly.
enum class Int8Scoring { kRowScaled, kRawInt32 };

struct HIndexerConfig {
  size_t k_prime = 100000;
  // Sample count; when unset, round(sample_ratio * X) clamped to [1, X].
  std::optional<size_t> sample_count;
  double sample_ratio = 0.1;
  size_t d_prime = 64;
  Comparator comparator = Comparator::kInclusive;
  bool quantized = false;
  Int8Scoring int8_scoring = Int8Scoring::kRowScaled;

  size_t SampleCount(size_t corpus_size) const;
  // Throws Config when the config cannot apply to a corpus of this size.
  void Validate(size_t corpus_size) const;
};

// Rows of first-stage embeddings, float and/or INT8.
struct Stage1View {
  const Matrix* embs = nullptr;
  const QuantizedRows* quantized = nullptr;

  size_t size() const;
  size_t dim() const;
  static Stage1View Of(const ItemCache<float>& cache);
};

struct CandidateSet {
  std::vector<uint32_t> indices;  // ascending
  double threshold = 0.0;
  size_t scanned = 0;
};

// n-th largest value (1-indexed, duplicates counted). Throws OutOfRange.
float NthLargest(std::span<const float> values, size_t n);

// Rank requested from the sample: max(1, round(k' * lambda / X)), <= lambda.
size_t ThresholdRank(size_t k_prime, size_t lambda, size_t corpus_size);

// First-stage scores of every row; quantized configs score in the INT8
// domain according to config.int8_scoring.
std::vector<double> Stage1Scores(const Stage1View& view,
                                 std::span<const float> query,
                                 const HIndexerConfig& config);

// Samples lambda distinct rows through a seeded permutation prefix and
// returns the ThresholdRank-th largest sampled score.
double EstimateThreshold(const Stage1View& view, std::span<const float> query,
                         const HIndexerConfig& config, Rng& rng);

// Single scan keeping every row whose score passes the threshold (>= in
// inclusive mode, > in strict mode). The result is not truncated to k'.
CandidateSet HIndexer(const Stage1View& view, std::span<const float> query,
                      const HIndexerConfig& config, Rng& rng);

// Exact top-k by float first-stage dot product, ties by ascending id.
std::vector<uint32_t> ExactTopK(const Stage1View& view,
                                std::span<const float> query, size_t k);

// Exact top-k in the INT8 domain.
std::vector<uint32_t> ExactTopKQuantized(const Stage1View& view,
                                         std::span<const float> query, size_t k,
                                         Int8Scoring scoring);

// Gathers cache rows in the given order. Throws OutOfRange.
ItemSlice<float> IndexSelect(const ItemCache<float>& cache,
                             std::span<const uint32_t> indices);

}  // namespace molr

#endif  // MOLR_HINDEXER_HINDEXER_H_
