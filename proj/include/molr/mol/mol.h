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
#ifndef MOLR_MOL_MOL_H_
#define MOLR_MOL_MOL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "molr/core/matrix.h"
#include "molr/core/rng.h"
#include "molr/core/topk.h"
#include "molr/mol/config.h"
#include "molr/mol/feed_forward.h"

namespace molr {

template <typename T>
class ItemCache;

// Adaptive embedding compression: row i of the result is
// sum_j weights(j, i) * src.row(j). src is k' x d, weights is k' x k.
template <typename T>
BasicMatrix<T> CompressEmbeddings(const BasicMatrix<T>& src,
                                  const BasicMatrix<T>& weights);

// Logits of one item against the user components:
//   out[a * k_x + b] = <user_embs.row(a), item_row[b*d : (b+1)*d]> / tau.
// item_row is the item's k_x components flattened.
template <typename T>
void ComponentLogitsRow(const BasicMatrix<T>& user_embs,
                        std::span<const T> item_row, size_t k_x, T tau,
                        std::span<T> out);

// item_embs is n x (k_x * d), one flattened item per row. Returns
// n x (k_u * k_x) in the per-item, user-component-major layout above.
template <typename T>
BasicMatrix<T> ComponentLogits(const BasicMatrix<T>& user_embs,
                               const BasicMatrix<T>& item_embs, size_t k_x,
                               double tau);

struct GatingDropout {
  double p = 0.0;
  Rng* rng = nullptr;
  bool training = false;
};

// One gating row: softmax(SiLU(user_weights * item_gate_pre + cross_net(cl))).
// scratch must hold hidden_dim() + groups values.
template <typename T>
void GatingRow(const FeedForward<T>& cross_net,
               std::span<const T> user_weights,
               std::span<const T> item_gate_pre, std::span<const T> logits,
               std::span<T> out, std::span<T> scratch);

// Full decomposed gating for k' items. user_gate_feat feeds nets.user_net;
// item_gate_pre holds cached item_net outputs. Training-mode dropout zeroes
// entries with probability p and scales survivors by 1/(1-p) without
// renormalizing.
template <typename T>
BasicMatrix<T> DecomposedGating(const GatingNetwork<T>& nets,
                                std::span<const T> user_gate_feat,
                                const BasicMatrix<T>& item_gate_pre,
                                const BasicMatrix<T>& cross_logits,
                                const GatingDropout& dropout = {});

// score_i = sum_g gating(i, g) * logits(i, g).
template <typename T>
std::vector<T> MolScore(const BasicMatrix<T>& gating,
                        const BasicMatrix<T>& logits);

// Query-side state computed once per request.
template <typename T>
struct QueryState {
  BasicMatrix<T> user_embs;     // k_u x d
  std::vector<T> user_weights;  // user_net output, k_u * k_x
  std::vector<T> stage1;        // first-stage query vector
};

template <typename T>
QueryState<T> MakeQueryState(const GatingNetwork<T>& nets,
                             BasicMatrix<T> user_embs,
                             std::span<const T> user_gate_feat,
                             std::vector<T> stage1 = {});

// Inference-mode MoL scores of the given cache rows.
template <typename T>
std::vector<T> ScoreRows(const ItemCache<T>& cache, const GatingNetwork<T>& nets,
                         std::span<const uint32_t> rows,
                         const QueryState<T>& query, double tau);

// Inference-mode scores of every cache row.
template <typename T>
std::vector<T> ScoreAll(const ItemCache<T>& cache, const GatingNetwork<T>& nets,
                        const QueryState<T>& query, double tau);

// The k highest-scoring candidates (cache row ids), score-descending with
// ascending id on ties. Throws EmptyCandidates; k must not exceed the
// candidate count.
std::vector<ScoredItem> MolTopK(const ItemCache<float>& cache,
                                const GatingNetwork<float>& nets,
                                std::span<const uint32_t> candidates,
                                const QueryState<float>& query, size_t k,
                                double tau);

}  // namespace molr

#endif  // MOLR_MOL_MOL_H_
