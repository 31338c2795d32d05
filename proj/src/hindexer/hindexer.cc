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
#include "molr/hindexer/hindexer.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "molr/core/error.h"
#include "molr/core/ops.h"
#include "molr/core/topk.h"

namespace molr {

size_t HIndexerConfig::SampleCount(size_t corpus_size) const {
  if (sample_count) return *sample_count;
  const double n = std::round(sample_ratio * static_cast<double>(corpus_size));
  return std::clamp<size_t>(static_cast<size_t>(std::max(n, 1.0)), 1,
                            std::max<size_t>(corpus_size, 1));
}

void HIndexerConfig::Validate(size_t corpus_size) const {
  const size_t lambda = SampleCount(corpus_size);
  if (lambda < 1 || lambda > corpus_size) {
    throw Error(ErrorCode::kConfig, "sample count " + std::to_string(lambda) +
                                        " outside [1, " +
                                        std::to_string(corpus_size) + "]");
  }
  if (k_prime < 1 || k_prime > corpus_size) {
    throw Error(ErrorCode::kConfig, "k' " + std::to_string(k_prime) +
                                        " outside [1, " +
                                        std::to_string(corpus_size) + "]");
  }
  if (d_prime < 1) throw Error(ErrorCode::kConfig, "d' must be >= 1");
  if (!sample_count && !(sample_ratio > 0.0 && sample_ratio <= 1.0)) {
    throw Error(ErrorCode::kConfig, "sample ratio must lie in (0, 1]");
  }
}

size_t Stage1View::size() const {
  if (embs != nullptr) return embs->rows();
  return quantized != nullptr ? quantized->rows : 0;
}

size_t Stage1View::dim() const {
  if (embs != nullptr) return embs->cols();
  return quantized != nullptr ? quantized->cols : 0;
}

Stage1View Stage1View::Of(const ItemCache<float>& cache) {
  return {&cache.stage1(), cache.stage1_q() ? &*cache.stage1_q() : nullptr};
}

float NthLargest(std::span<const float> values, size_t n) {
  if (n < 1 || n > values.size()) {
    throw Error(ErrorCode::kOutOfRange, "rank " + std::to_string(n) +
                                            " outside [1, " +
                                            std::to_string(values.size()) + "]");
  }
  std::vector<float> copy(values.begin(), values.end());
  auto nth = copy.begin() + static_cast<ptrdiff_t>(n - 1);
  std::nth_element(copy.begin(), nth, copy.end(), std::greater<float>());
  return *nth;
}

size_t ThresholdRank(size_t k_prime, size_t lambda, size_t corpus_size) {
  const double n = std::round(static_cast<double>(k_prime) *
                              static_cast<double>(lambda) /
                              static_cast<double>(corpus_size));
  return std::clamp<size_t>(static_cast<size_t>(std::max(n, 1.0)), 1, lambda);
}

namespace {

void CheckQuery(const Stage1View& view, std::span<const float> query,
                bool quantized) {
  if (quantized ? view.quantized == nullptr : view.embs == nullptr) {
    throw Error(ErrorCode::kConfig, quantized
                                        ? "quantized scoring needs INT8 rows"
                                        : "float scoring needs float rows");
  }
  if (query.size() != view.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query dim " + std::to_string(query.size()) + " != " +
                    std::to_string(view.dim()));
  }
}

// Scores rows one at a time so the sample and the full scan share a kernel.
class RowScorer {
 public:
  RowScorer(const Stage1View& view, std::span<const float> query,
            bool quantized, Int8Scoring scoring)
      : view_(view), query_(query), quantized_(quantized), scoring_(scoring) {
    CheckQuery(view, query, quantized);
    if (quantized_) {
      if (query.size() > kMaxInt8DotLength) {
        throw Error(ErrorCode::kLengthOverflow, "stage-1 dim too large for int8");
      }
      q_ = QuantizeVector(query);
    }
  }

  double operator()(size_t r) const {
    if (!quantized_) {
      return static_cast<double>(Dot<float>(view_.embs->row(r), query_));
    }
    const auto row = view_.quantized->row(r);
    int32_t acc = 0;
    for (size_t i = 0; i < row.size(); ++i) {
      acc += static_cast<int32_t>(row[i]) * static_cast<int32_t>(q_.codes[i]);
    }
    if (scoring_ == Int8Scoring::kRawInt32) return static_cast<double>(acc);
    return static_cast<double>(static_cast<float>(acc) * view_.quantized->scales[r]);
  }

 private:
  const Stage1View& view_;
  std::span<const float> query_;
  bool quantized_;
  Int8Scoring scoring_;
  QuantizedVector q_;
};

// double holds every float product and every int32 accumulator exactly, so
// one comparison type serves all scoring modes.
double NthLargestOf(std::vector<double> values, size_t n) {
  auto nth = values.begin() + static_cast<ptrdiff_t>(n - 1);
  std::nth_element(values.begin(), nth, values.end(), std::greater<double>());
  return *nth;
}

std::vector<uint32_t> TopKOfScores(const std::vector<double>& scores, size_t k) {
  std::vector<uint32_t> idx(scores.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<uint32_t>(i);
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<ptrdiff_t>(k),
                    idx.end(), [&scores](uint32_t a, uint32_t b) {
                      return scores[a] > scores[b] ||
                             (scores[a] == scores[b] && a < b);
                    });
  idx.resize(k);
  return idx;
}

}  // namespace

std::vector<double> Stage1Scores(const Stage1View& view,
                                 std::span<const float> query,
                                 const HIndexerConfig& config) {
  const RowScorer score(view, query, config.quantized, config.int8_scoring);
  std::vector<double> out(view.size());
  for (size_t r = 0; r < out.size(); ++r) out[r] = score(r);
  return out;
}

double EstimateThreshold(const Stage1View& view, std::span<const float> query,
                         const HIndexerConfig& config, Rng& rng) {
  const size_t x = view.size();
  config.Validate(x);
  const size_t lambda = config.SampleCount(x);
  const RowScorer score(view, query, config.quantized, config.int8_scoring);
  const std::vector<uint32_t> sample =
      PermutationPrefix(static_cast<uint32_t>(x), static_cast<uint32_t>(lambda), rng);
  std::vector<double> sampled(lambda);
  for (size_t i = 0; i < lambda; ++i) sampled[i] = score(sample[i]);
  return NthLargestOf(std::move(sampled), ThresholdRank(config.k_prime, lambda, x));
}

CandidateSet HIndexer(const Stage1View& view, std::span<const float> query,
                      const HIndexerConfig& config, Rng& rng) {
  CandidateSet out;
  out.scanned = view.size();
  config.Validate(view.size());
  const RowScorer score(view, query, config.quantized, config.int8_scoring);
  if (config.k_prime >= view.size()) {
    // Asking for the whole corpus: nothing to prune.
    out.threshold = -std::numeric_limits<double>::infinity();
    out.indices.resize(view.size());
    std::iota(out.indices.begin(), out.indices.end(), 0u);
    return out;
  }
  out.threshold = EstimateThreshold(view, query, config, rng);
  const bool inclusive = config.comparator == Comparator::kInclusive;
  for (size_t r = 0; r < view.size(); ++r) {
    const double s = score(r);
    if (inclusive ? s >= out.threshold : s > out.threshold) {
      out.indices.push_back(static_cast<uint32_t>(r));
    }
  }
  return out;
}

std::vector<uint32_t> ExactTopK(const Stage1View& view,
                                std::span<const float> query, size_t k) {
  if (k > view.size()) {
    throw Error(ErrorCode::kOutOfRange, "k exceeds corpus size");
  }
  const RowScorer score(view, query, false, Int8Scoring::kRowScaled);
  std::vector<double> scores(view.size());
  for (size_t r = 0; r < scores.size(); ++r) scores[r] = score(r);
  return TopKOfScores(scores, k);
}

std::vector<uint32_t> ExactTopKQuantized(const Stage1View& view,
                                         std::span<const float> query, size_t k,
                                         Int8Scoring scoring) {
  if (k > view.size()) {
    throw Error(ErrorCode::kOutOfRange, "k exceeds corpus size");
  }
  const RowScorer score(view, query, true, scoring);
  std::vector<double> scores(view.size());
  for (size_t r = 0; r < scores.size(); ++r) scores[r] = score(r);
  return TopKOfScores(scores, k);
}

ItemSlice<float> IndexSelect(const ItemCache<float>& cache,
                             std::span<const uint32_t> indices) {
  ItemSlice<float> out;
  out.ids.assign(indices.begin(), indices.end());
  const size_t e = cache.item_embs().cols(), g = cache.item_gate_pre().cols();
  out.item_embs = Matrix(indices.size(), e);
  out.item_gate_pre = Matrix(indices.size(), g);
  for (size_t i = 0; i < indices.size(); ++i) {
    const uint32_t r = indices[i];
    if (r >= cache.size()) {
      throw Error(ErrorCode::kOutOfRange, "index " + std::to_string(r));
    }
    std::copy_n(cache.item_embs().row(r).data(), e, out.item_embs.row(i).data());
    std::copy_n(cache.item_gate_pre().row(r).data(), g,
                out.item_gate_pre.row(i).data());
  }
  return out;
}

}  // namespace molr
