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
#include "molr/model/towers.h"

#include <cmath>
#include <string>

#include "molr/core/error.h"
#include "molr/core/ops.h"

namespace molr {

void TowerConfig::Validate() const {
  if (n_users == 0 || n_items == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "tower needs at least one user and item");
  }
  if (user_dim == 0 || item_dim == 0 || proj_hidden == 0) {
    throw Error(ErrorCode::kConfig, "tower widths must be >= 1");
  }
  mol.Validate();
}

template <typename T>
TowerParams<T> TowerParams<T>::ZerosLike(const TowerParams& p) {
  auto zero = [](const FeedForward<T>& ff) {
    return FeedForward<T>::Zeros(ff.in_dim(), ff.hidden_dim(), ff.out_dim());
  };
  return {p.config,
          BasicMatrix<T>(p.user_table.rows(), p.user_table.cols()),
          BasicMatrix<T>(p.item_table.rows(), p.item_table.cols()),
          zero(p.user_proj),
          zero(p.item_proj),
          BasicMatrix<T>(p.compression.rows(), p.compression.cols()),
          {zero(p.gating.user_net), zero(p.gating.item_net),
           zero(p.gating.cross_net)}};
}

template <typename T>
TowerParams<T> InitParams(const TowerConfig& config, Rng& rng) {
  config.Validate();
  const auto& m = config.mol;
  auto table = [&rng](size_t rows, size_t cols) {
    BasicMatrix<T> t(rows, cols);
    const double a = 1.0 / std::sqrt(static_cast<double>(cols));
    for (auto& v : t.values()) v = static_cast<T>(rng.Uniform(-a, a));
    return t;
  };
  TowerParams<T> p;
  p.config = config;
  // Id tables start at N(0, 1). With the uniform fan-in scale used for the
  // other weights, the logit is a product of several small factors and
  // training sits on a plateau for many epochs.
  auto id_table = [&rng](size_t rows, size_t cols) {
    BasicMatrix<T> t(rows, cols);
    for (auto& v : t.values()) v = static_cast<T>(rng.Normal());
    return t;
  };
  p.user_table = id_table(config.n_users, config.user_dim);
  p.item_table = id_table(config.n_items, config.item_dim);
  p.user_proj = FeedForward<T>::Random(
      config.user_dim, config.proj_hidden,
      config.user_proj_components() * m.d, rng);
  p.item_proj =
      FeedForward<T>::Random(config.item_dim, config.proj_hidden, m.k_x * m.d, rng);
  if (config.compressed_from != 0) {
    p.compression = table(config.compressed_from, m.k_u);
  }
  p.gating.user_net =
      FeedForward<T>::Random(config.user_dim, m.gating_hidden, m.groups(), rng);
  p.gating.item_net =
      FeedForward<T>::Random(config.item_dim, m.gating_hidden, m.groups(), rng);
  p.gating.cross_net =
      FeedForward<T>::Random(m.groups(), m.gating_hidden, m.groups(), rng);
  return p;
}

namespace {

template <typename T>
void NormalizeRows(const BasicMatrix<T>& pre, bool l2, BasicMatrix<T>& embs,
                   std::vector<T>& norms) {
  embs = pre;
  norms.assign(pre.rows(), T{1});
  if (!l2) return;
  for (size_t r = 0; r < pre.rows(); ++r) {
    norms[r] = L2NormalizeInPlace<T>(embs.row(r));
  }
}

}  // namespace

template <typename T>
UserOutput<T> UserForward(const TowerParams<T>& params, uint32_t user) {
  const auto& cfg = params.config;
  if (user >= params.user_table.rows()) {
    throw Error(ErrorCode::kOutOfRange, "user id " + std::to_string(user));
  }
  UserOutput<T> out;
  const auto x = params.user_table.row(user);
  out.gate_feat.assign(x.begin(), x.end());
  out.proj_hidden.resize(params.user_proj.hidden_dim());
  out.proj_out = BasicMatrix<T>(cfg.user_proj_components(), cfg.mol.d);
  params.user_proj.Forward(x, out.proj_hidden, out.proj_out.values());
  out.pre_norm = params.compression.empty()
                     ? out.proj_out
                     : CompressEmbeddings(out.proj_out, params.compression);
  NormalizeRows(out.pre_norm, cfg.mol.l2_normalized, out.embs, out.norms);
  return out;
}

template <typename T>
ItemOutput<T> ItemForward(const TowerParams<T>& params, uint32_t item) {
  const auto& cfg = params.config;
  if (item >= params.item_table.rows()) {
    throw Error(ErrorCode::kOutOfRange, "item id " + std::to_string(item));
  }
  ItemOutput<T> out;
  const auto x = params.item_table.row(item);
  out.proj_hidden.resize(params.item_proj.hidden_dim());
  out.pre_norm = BasicMatrix<T>(cfg.mol.k_x, cfg.mol.d);
  params.item_proj.Forward(x, out.proj_hidden, out.pre_norm.values());
  NormalizeRows(out.pre_norm, cfg.mol.l2_normalized, out.embs, out.norms);
  out.gate_hidden.resize(params.gating.item_net.hidden_dim());
  out.gate_pre.resize(cfg.mol.groups());
  params.gating.item_net.Forward(x, out.gate_hidden, out.gate_pre);
  return out;
}

template <typename T>
std::vector<T> Stage1Embedding(const BasicMatrix<T>& components) {
  std::vector<T> out(components.cols(), T{0});
  for (size_t r = 0; r < components.rows(); ++r) {
    const auto row = components.row(r);
    for (size_t c = 0; c < out.size(); ++c) out[c] += row[c];
  }
  const T inv = T{1} / static_cast<T>(components.rows());
  for (auto& v : out) v *= inv;
  return out;
}

template <typename T>
QueryState<T> MakeUserQuery(const TowerParams<T>& params, uint32_t user) {
  UserOutput<T> u = UserForward(params, user);
  std::vector<T> stage1 = Stage1Embedding(u.embs);
  return MakeQueryState<T>(params.gating, std::move(u.embs), u.gate_feat,
                           std::move(stage1));
}

#define MOLR_INSTANTIATE(T)                                                 \
  template struct TowerParams<T>;                                           \
  template TowerParams<T> InitParams<T>(const TowerConfig&, Rng&);          \
  template UserOutput<T> UserForward<T>(const TowerParams<T>&, uint32_t);   \
  template ItemOutput<T> ItemForward<T>(const TowerParams<T>&, uint32_t);   \
  template std::vector<T> Stage1Embedding<T>(const BasicMatrix<T>&);        \
  template QueryState<T> MakeUserQuery<T>(const TowerParams<T>&, uint32_t);

MOLR_INSTANTIATE(float)
MOLR_INSTANTIATE(double)
#undef MOLR_INSTANTIATE

}  // namespace molr
