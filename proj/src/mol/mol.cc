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
#include "molr/mol/mol.h"

#include <algorithm>
#include <string>

#include "molr/core/error.h"
#include "molr/core/ops.h"
#include "molr/mol/item_cache.h"

namespace molr {

template <typename T>
BasicMatrix<T> CompressEmbeddings(const BasicMatrix<T>& src,
                                  const BasicMatrix<T>& weights) {
  if (weights.rows() != src.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "compression map has " + std::to_string(weights.rows()) +
                    " rows, source has " + std::to_string(src.rows()));
  }
  BasicMatrix<T> out(weights.cols(), src.cols());
  for (size_t i = 0; i < weights.cols(); ++i) {
    auto o = out.row(i);
    for (size_t j = 0; j < src.rows(); ++j) {
      const T w = weights(j, i);
      const auto s = src.row(j);
      for (size_t c = 0; c < src.cols(); ++c) o[c] += w * s[c];
    }
  }
  return out;
}

template <typename T>
void ComponentLogitsRow(const BasicMatrix<T>& user_embs,
                        std::span<const T> item_row, size_t k_x, T tau,
                        std::span<T> out) {
  const size_t k_u = user_embs.rows(), d = user_embs.cols();
  if (item_row.size() != k_x * d || out.size() != k_u * k_x) {
    throw Error(ErrorCode::kDimensionMismatch, "component logits shapes");
  }
  for (size_t a = 0; a < k_u; ++a) {
    const T* f = user_embs.data() + a * d;
    for (size_t b = 0; b < k_x; ++b) {
      const T* g = item_row.data() + b * d;
      T acc{0};
      for (size_t c = 0; c < d; ++c) acc += f[c] * g[c];
      out[a * k_x + b] = acc / tau;
    }
  }
}

template <typename T>
BasicMatrix<T> ComponentLogits(const BasicMatrix<T>& user_embs,
                               const BasicMatrix<T>& item_embs, size_t k_x,
                               double tau) {
  if (k_x == 0 || item_embs.cols() != k_x * user_embs.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "item rows must hold k_x components of the user dim");
  }
  BasicMatrix<T> out(item_embs.rows(), user_embs.rows() * k_x);
  for (size_t i = 0; i < item_embs.rows(); ++i) {
    ComponentLogitsRow<T>(user_embs, item_embs.row(i), k_x,
                          static_cast<T>(tau), out.row(i));
  }
  return out;
}

template <typename T>
void GatingRow(const FeedForward<T>& cross_net,
               std::span<const T> user_weights,
               std::span<const T> item_gate_pre, std::span<const T> logits,
               std::span<T> out, std::span<T> scratch) {
  const size_t g = out.size();
  if (user_weights.size() != g || item_gate_pre.size() != g ||
      logits.size() != g || cross_net.out_dim() != g ||
      scratch.size() < cross_net.hidden_dim() + g) {
    throw Error(ErrorCode::kDimensionMismatch, "gating row shapes");
  }
  auto hidden = scratch.first(cross_net.hidden_dim());
  auto cross = scratch.subspan(cross_net.hidden_dim(), g);
  cross_net.Forward(logits, hidden, cross);
  for (size_t i = 0; i < g; ++i) {
    out[i] = Silu(user_weights[i] * item_gate_pre[i] + cross[i]);
  }
  SoftmaxInPlace<T>(out);
}

template <typename T>
BasicMatrix<T> DecomposedGating(const GatingNetwork<T>& nets,
                                std::span<const T> user_gate_feat,
                                const BasicMatrix<T>& item_gate_pre,
                                const BasicMatrix<T>& cross_logits,
                                const GatingDropout& dropout) {
  if (item_gate_pre.rows() != cross_logits.rows() ||
      item_gate_pre.cols() != cross_logits.cols() ||
      nets.user_net.in_dim() != user_gate_feat.size() ||
      nets.user_net.out_dim() != item_gate_pre.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "decomposed gating shapes");
  }
  const std::vector<T> user_weights = nets.user_net.Forward(user_gate_feat);
  const size_t g = item_gate_pre.cols();
  BasicMatrix<T> out(item_gate_pre.rows(), g);
  std::vector<T> scratch(nets.cross_net.hidden_dim() + g);
  for (size_t i = 0; i < out.rows(); ++i) {
    GatingRow<T>(nets.cross_net, user_weights, item_gate_pre.row(i),
                 cross_logits.row(i), out.row(i), scratch);
  }
  if (dropout.training && dropout.p > 0.0) {
    if (dropout.rng == nullptr) {
      throw Error(ErrorCode::kConfig, "training dropout needs an rng");
    }
    const T keep_scale = static_cast<T>(1.0 / (1.0 - dropout.p));
    for (auto& v : out.values()) {
      v = dropout.rng->Uniform() < dropout.p ? T{0} : v * keep_scale;
    }
  }
  return out;
}

template <typename T>
std::vector<T> MolScore(const BasicMatrix<T>& gating,
                        const BasicMatrix<T>& logits) {
  if (gating.rows() != logits.rows() || gating.cols() != logits.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "gating/logit shapes differ");
  }
  std::vector<T> out(gating.rows());
  for (size_t i = 0; i < gating.rows(); ++i) {
    const auto p = gating.row(i);
    const auto l = logits.row(i);
    T acc{0};
    for (size_t j = 0; j < p.size(); ++j) acc += p[j] * l[j];
    out[i] = acc;
  }
  return out;
}

template <typename T>
QueryState<T> MakeQueryState(const GatingNetwork<T>& nets,
                             BasicMatrix<T> user_embs,
                             std::span<const T> user_gate_feat,
                             std::vector<T> stage1) {
  QueryState<T> q;
  q.user_weights = nets.user_net.Forward(user_gate_feat);
  q.user_embs = std::move(user_embs);
  q.stage1 = std::move(stage1);
  return q;
}

namespace {

template <typename T>
void ScoreRowsInto(const ItemCache<T>& cache, const GatingNetwork<T>& nets,
                   std::span<const uint32_t> rows, const QueryState<T>& query,
                   double tau, std::span<T> out) {
  const size_t g = cache.groups();
  if (query.user_embs.rows() != cache.k_u() ||
      query.user_embs.cols() != cache.d() || query.user_weights.size() != g) {
    throw Error(ErrorCode::kDimensionMismatch, "query does not match cache");
  }
  std::vector<T> logits(g), gate(g), scratch(nets.cross_net.hidden_dim() + g);
  const T t = static_cast<T>(tau);
  for (size_t i = 0; i < rows.size(); ++i) {
    const uint32_t r = rows[i];
    if (r >= cache.size()) {
      throw Error(ErrorCode::kOutOfRange, "cache row " + std::to_string(r));
    }
    ComponentLogitsRow<T>(query.user_embs, cache.item_embs().row(r),
                          cache.k_x(), t, logits);
    GatingRow<T>(nets.cross_net, query.user_weights,
                 cache.item_gate_pre().row(r), logits, gate, scratch);
    T acc{0};
    for (size_t j = 0; j < g; ++j) acc += gate[j] * logits[j];
    out[i] = acc;
  }
}

}  // namespace

template <typename T>
std::vector<T> ScoreRows(const ItemCache<T>& cache, const GatingNetwork<T>& nets,
                         std::span<const uint32_t> rows,
                         const QueryState<T>& query, double tau) {
  std::vector<T> out(rows.size());
  ScoreRowsInto(cache, nets, rows, query, tau, std::span<T>(out));
  return out;
}

template <typename T>
std::vector<T> ScoreAll(const ItemCache<T>& cache, const GatingNetwork<T>& nets,
                        const QueryState<T>& query, double tau) {
  std::vector<uint32_t> rows(cache.size());
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<uint32_t>(i);
  return ScoreRows(cache, nets, rows, query, tau);
}

std::vector<ScoredItem> MolTopK(const ItemCache<float>& cache,
                                const GatingNetwork<float>& nets,
                                std::span<const uint32_t> candidates,
                                const QueryState<float>& query, size_t k,
                                double tau) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kEmptyCandidates, "no candidates to rank");
  }
  if (k > candidates.size()) {
    throw Error(ErrorCode::kOutOfRange,
                "k = " + std::to_string(k) + " exceeds " +
                    std::to_string(candidates.size()) + " candidates");
  }
  const std::vector<float> scores =
      ScoreRows(cache, nets, candidates, query, tau);
  return TopK(scores, candidates, k);
}

#define MOLR_INSTANTIATE(T)                                                   \
  template BasicMatrix<T> CompressEmbeddings<T>(const BasicMatrix<T>&,        \
                                                const BasicMatrix<T>&);       \
  template void ComponentLogitsRow<T>(const BasicMatrix<T>&,                  \
                                      std::span<const T>, size_t, T,          \
                                      std::span<T>);                          \
  template BasicMatrix<T> ComponentLogits<T>(const BasicMatrix<T>&,           \
                                             const BasicMatrix<T>&, size_t,   \
                                             double);                         \
  template void GatingRow<T>(const FeedForward<T>&, std::span<const T>,       \
                             std::span<const T>, std::span<const T>,          \
                             std::span<T>, std::span<T>);                     \
  template BasicMatrix<T> DecomposedGating<T>(                                \
      const GatingNetwork<T>&, std::span<const T>, const BasicMatrix<T>&,     \
      const BasicMatrix<T>&, const GatingDropout&);                           \
  template std::vector<T> MolScore<T>(const BasicMatrix<T>&,                  \
                                      const BasicMatrix<T>&);                 \
  template QueryState<T> MakeQueryState<T>(                                   \
      const GatingNetwork<T>&, BasicMatrix<T>, std::span<const T>,            \
      std::vector<T>);                                                        \
  template std::vector<T> ScoreRows<T>(const ItemCache<T>&,                   \
                                       const GatingNetwork<T>&,               \
                                       std::span<const uint32_t>,             \
                                       const QueryState<T>&, double);         \
  template std::vector<T> ScoreAll<T>(const ItemCache<T>&,                    \
                                      const GatingNetwork<T>&,                \
                                      const QueryState<T>&, double);

MOLR_INSTANTIATE(float)
MOLR_INSTANTIATE(double)
#undef MOLR_INSTANTIATE

}  // namespace molr
