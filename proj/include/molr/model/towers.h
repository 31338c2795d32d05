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
#ifndef MOLR_MODEL_TOWERS_H_
#define MOLR_MODEL_TOWERS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "molr/core/matrix.h"
#include "molr/core/rng.h"
#include "molr/mol/config.h"
#include "molr/mol/feed_forward.h"
#include "molr/mol/mol.h"

namespace molr {

struct TowerConfig {
  size_t n_users = 0;
  size_t n_items = 0;
  size_t user_dim = 64;     // d_u, width of the user id embedding
  size_t item_dim = 64;     // d_x
  size_t proj_hidden = 128; // hidden width of the embedding projections
  // User-side embeddings produced before adaptive compression; 0 disables
  // compression (the projection then emits k_u components directly).
  size_t compressed_from = 0;
  MoLConfig mol;

  size_t user_proj_components() const noexcept {
    return compressed_from == 0 ? mol.k_u : compressed_from;
  }

  // Throws EmptyCorpus for zero users/items and Config otherwise.
  void Validate() const;
};

// Id-embedding two-tower parameterization feeding the MoL head.
template <typename T>
struct TowerParams {
  TowerConfig config;
  BasicMatrix<T> user_table;  // n_users x d_u
  BasicMatrix<T> item_table;  // n_items x d_x
  FeedForward<T> user_proj;   // d_u -> h -> k'_u * d
  FeedForward<T> item_proj;   // d_x -> h -> k_x * d
  BasicMatrix<T> compression; // k'_u x k_u, empty when disabled
  GatingNetwork<T> gating;

  // Same shapes, all zero; used for gradients and optimizer moments.
  static TowerParams ZerosLike(const TowerParams& p);

  template <typename U>
  TowerParams<U> Cast() const {
    return {config,
            user_table.template cast<U>(),
            item_table.template cast<U>(),
            user_proj.template Cast<U>(),
            item_proj.template Cast<U>(),
            compression.template cast<U>(),
            gating.template Cast<U>()};
  }

  bool operator==(const TowerParams& o) const {
    return user_table == o.user_table && item_table == o.item_table &&
           user_proj == o.user_proj && item_proj == o.item_proj &&
           compression == o.compression && gating == o.gating;
  }
};

// Visits every parameter tensor as f(name, span, rows, cols) in a fixed order.
template <typename T, typename F>
void ForEachTensor(TowerParams<T>& p, F&& f) {
  f(std::string("user_table"), p.user_table.values(), p.user_table.rows(),
    p.user_table.cols());
  f(std::string("item_table"), p.item_table.values(), p.item_table.rows(),
    p.item_table.cols());
  ForEachTensor(p.user_proj, "user_proj", f);
  ForEachTensor(p.item_proj, "item_proj", f);
  if (!p.compression.empty()) {
    f(std::string("compression"), p.compression.values(), p.compression.rows(),
      p.compression.cols());
  }
  ForEachTensor(p.gating, "gating", f);
}

// Tables ~ U(-1/sqrt(dim), 1/sqrt(dim)); networks scaled by fan-in;
// the compression map is drawn like a fan-in scaled layer.
template <typename T>
TowerParams<T> InitParams(const TowerConfig& config, Rng& rng);

// User tower output plus the intermediates needed for backprop.
template <typename T>
struct UserOutput {
  BasicMatrix<T> embs;        // k_u x d, unit rows when l2_normalized
  std::vector<T> gate_feat;   // raw user-table row
  std::vector<T> proj_hidden; // user_proj hidden pre-activation
  BasicMatrix<T> proj_out;    // k'_u x d projection output
  BasicMatrix<T> pre_norm;    // k_u x d before normalization
  std::vector<T> norms;       // row norms of pre_norm
};

template <typename T>
struct ItemOutput {
  BasicMatrix<T> embs;        // k_x x d
  std::vector<T> gate_pre;    // item_net output, k_u * k_x
  std::vector<T> proj_hidden;
  std::vector<T> gate_hidden;
  BasicMatrix<T> pre_norm;
  std::vector<T> norms;
};

// Throws OutOfRange for unknown ids and ZeroNorm on collapsed components.
template <typename T>
UserOutput<T> UserForward(const TowerParams<T>& params, uint32_t user);

template <typename T>
ItemOutput<T> ItemForward(const TowerParams<T>& params, uint32_t item);

// First-stage embeddings: the mean component embedding on each side, so the
// stage-1 dot product equals the uniform-gating MoL logit sum up to scale.
template <typename T>
std::vector<T> Stage1Embedding(const BasicMatrix<T>& components);

template <typename T>
QueryState<T> MakeUserQuery(const TowerParams<T>& params, uint32_t user);

}  // namespace molr

#endif  // MOLR_MODEL_TOWERS_H_
