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
#include "molr/train/backward.h"

#include <string>
#include <vector>

#include <Eigen/Core>

#include "molr/core/error.h"
#include "molr/core/fpenv.h"
#include "molr/core/ops.h"
#include "molr/core/parallel.h"
#include "molr/mol/mol.h"
#include "molr/train/loss.h"

namespace molr {
namespace {

template <typename T>
using MatR = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using RowMap = Eigen::Map<MatR<T>>;
template <typename T>
using ConstRowMap = Eigen::Map<const MatR<T>>;
template <typename T>
using ConstVecMap = Eigen::Map<const Eigen::Matrix<T, 1, Eigen::Dynamic>>;

template <typename T>
MatR<T> SigmoidOf(const MatR<T>& x) {
  return (T{1} / (T{1} + (-x.array()).exp())).matrix();
}

template <typename T>
void CheckBatch(const TrainBatch<T>& batch, size_t n_users, size_t n_items,
                size_t groups) {
  if (batch.size() == 0) throw Error(ErrorCode::kEmptyInput, "empty batch");
  if (batch.positives.size() != batch.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "users/positives length differ");
  }
  for (const uint32_t u : batch.users) {
    if (u >= n_users) throw Error(ErrorCode::kOutOfRange, "user id " + std::to_string(u));
  }
  for (const auto* ids : {&batch.positives, &batch.negatives}) {
    for (const uint32_t x : *ids) {
      if (x >= n_items) throw Error(ErrorCode::kOutOfRange, "item id " + std::to_string(x));
    }
  }
  if (!batch.gate_mask.empty() &&
      batch.gate_mask.size() != batch.size() * batch.slots() * groups) {
    throw Error(ErrorCode::kDimensionMismatch, "gate mask size");
  }
  if (!batch.log_q.empty() && batch.log_q.size() != n_items) {
    throw Error(ErrorCode::kDimensionMismatch, "log q must cover every item");
  }
}

// Loss over each user's row of slot scores; leaves dL/dscore in dscore.
template <typename T>
T SlotLoss(const TrainBatch<T>& batch, const std::vector<T>& scores,
           std::vector<T>& dscore, bool mean) {
  const size_t b_count = batch.size(), slots = batch.slots();
  dscore.assign(scores.size(), T{0});
  std::vector<T> log_q;
  T total{0};
  for (size_t b = 0; b < b_count; ++b) {
    if (!batch.log_q.empty()) {
      log_q.resize(slots);
      log_q[0] = batch.log_q[batch.positives[b]];
      for (size_t s = 1; s < slots; ++s) log_q[s] = batch.log_q[batch.negatives[s - 1]];
    }
    total += SampledSoftmaxLossWithGrad<T>(
        std::span<const T>(scores.data() + b * slots, slots), log_q,
        std::span<T>(dscore.data() + b * slots, slots));
  }
  const T scale = mean ? T{1} / static_cast<T>(b_count) : T{1};
  for (auto& g : dscore) g *= scale;
  return total * scale;
}

// dL/d(pre_norm) from dL/d(unit rows); identity when normalization is off.
template <typename T>
void NormBackward(const BasicMatrix<T>& embs, const std::vector<T>& norms,
                  bool l2, std::span<T> d_embs) {
  if (!l2) return;
  const size_t d = embs.cols();
  for (size_t r = 0; r < embs.rows(); ++r) {
    const auto f = embs.row(r);
    T* g = d_embs.data() + r * d;
    T proj{0};
    for (size_t c = 0; c < d; ++c) proj += f[c] * g[c];
    for (size_t c = 0; c < d; ++c) g[c] = (g[c] - f[c] * proj) / norms[r];
  }
}

template <typename T>
void AddInto(std::span<T> dst, std::span<const T> src) {
  for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

template <typename T>
void AddInto(FeedForward<T>& dst, const FeedForward<T>& src) {
  AddInto<T>(dst.w1.values(), src.w1.values());
  AddInto<T>(std::span<T>(dst.b1), std::span<const T>(src.b1));
  AddInto<T>(dst.w2.values(), src.w2.values());
}

}  // namespace

template <typename T>
T BatchForwardBackward(const TowerParams<T>& params, const TrainBatch<T>& batch,
                       TowerParams<T>* grads, ForwardCounters* counters,
                       bool mean) {
  const auto& mc = params.config.mol;
  const size_t b_count = batch.size(), slots = batch.slots();
  const size_t groups = mc.groups(), k_u = mc.k_u, k_x = mc.k_x, d = mc.d;
  const FeedForward<T>& cross_net = params.gating.cross_net;
  const size_t hidden = cross_net.hidden_dim();
  const T tau = static_cast<T>(mc.tau);
  const ScopedFlushDenormals flush;
  CheckBatch(batch, params.user_table.rows(), params.item_table.rows(), groups);

  // Positives are run once per example, negatives once per batch.
  std::vector<ItemOutput<T>> pos_out(b_count), neg_out(batch.negatives.size());
  for (size_t b = 0; b < b_count; ++b) pos_out[b] = ItemForward(params, batch.positives[b]);
  for (size_t j = 0; j < neg_out.size(); ++j) neg_out[j] = ItemForward(params, batch.negatives[j]);
  std::vector<UserOutput<T>> users(b_count);
  std::vector<std::vector<T>> user_w(b_count), user_w_hidden(b_count);
  for (size_t b = 0; b < b_count; ++b) {
    users[b] = UserForward(params, batch.users[b]);
    user_w[b].resize(groups);
    user_w_hidden[b].resize(params.gating.user_net.hidden_dim());
    params.gating.user_net.Forward(users[b].gate_feat, user_w_hidden[b], user_w[b]);
  }
  if (counters != nullptr) {
    counters->item_forward_calls += b_count + neg_out.size();
    counters->user_forward_calls += b_count;
  }
  // Negatives are shared, so their embeddings and item-side gate terms are
  // stacked once; each user then prepends its own positive.
  const size_t e = k_x * d, n_neg = neg_out.size();
  MatR<T> neg_embs(n_neg, e), neg_gate(n_neg, groups);
  for (size_t j = 0; j < n_neg; ++j) {
    neg_embs.row(j) = ConstRowMap<T>(neg_out[j].embs.data(), 1, e);
    neg_gate.row(j) = ConstRowMap<T>(neg_out[j].gate_pre.data(), 1, groups);
  }
  const auto w1 = ConstRowMap<T>(cross_net.w1.data(), groups, hidden);
  const auto b1 = ConstVecMap<T>(cross_net.b1.data(), hidden);
  const auto w2 = ConstRowMap<T>(cross_net.w2.data(), hidden, groups);

  const size_t pairs = b_count * slots;
  std::vector<T> user_loss(b_count);
  std::vector<T> d_user_embs, d_user_w, d_item_embs, d_item_w;
  std::vector<FeedForward<T>> d_cross;
  if (grads != nullptr) {
    d_user_embs.assign(b_count * k_u * d, T{0});
    d_user_w.assign(b_count * groups, T{0});
    d_item_embs.assign(pairs * e, T{0});
    d_item_w.assign(pairs * groups, T{0});
    d_cross.assign(b_count, FeedForward<T>::Zeros(cross_net.in_dim(), hidden, groups));
  }
  const T loss_scale = mean ? T{1} / static_cast<T>(b_count) : T{1};

  // Each user's row of slot scores is independent, so the forward and the
  // backward pass run together per user on dense slot x group blocks.
  ParallelFor(b_count, [&](size_t b) {
    const ScopedFlushDenormals worker_flush;
    MatR<T> g_embs(slots, e), g_gate(slots, groups);
    g_embs.row(0) = ConstRowMap<T>(pos_out[b].embs.data(), 1, e);
    g_gate.row(0) = ConstRowMap<T>(pos_out[b].gate_pre.data(), 1, groups);
    g_embs.bottomRows(n_neg) = neg_embs;
    g_gate.bottomRows(n_neg) = neg_gate;
    const auto f = ConstRowMap<T>(users[b].embs.data(), k_u, d);
    const auto items = ConstRowMap<T>(g_embs.data(), slots * k_x, d);
    // dots(s * k_x + j, a) = <g_j(x_s), f_a(u)>
    const MatR<T> dots = items * f.transpose();
    MatR<T> cl(slots, groups);
    for (size_t s = 0; s < slots; ++s) {
      for (size_t a = 0; a < k_u; ++a) {
        for (size_t j = 0; j < k_x; ++j) cl(s, a * k_x + j) = dots(s * k_x + j, a) / tau;
      }
    }
    MatR<T> pre = cl * w1;
    pre.rowwise() += b1;
    const MatR<T> sig_h = SigmoidOf<T>(pre);
    const MatR<T> hid = pre.cwiseProduct(sig_h);
    const auto uw = ConstVecMap<T>(user_w[b].data(), groups);
    MatR<T> z = hid * w2;
    z.array() += g_gate.array().rowwise() * uw.array();
    const MatR<T> sig_z = SigmoidOf<T>(z);
    MatR<T> prob = z.cwiseProduct(sig_z);
    for (size_t s = 0; s < slots; ++s) {
      auto row = prob.row(s);
      row.array() = (row.array() - row.maxCoeff()).exp();
      row /= row.sum();
    }
    MatR<T> mask;
    if (batch.gate_mask.empty()) {
      mask = MatR<T>::Ones(slots, groups);
    } else {
      mask = ConstRowMap<T>(batch.gate_mask.data() + b * slots * groups, slots, groups);
    }
    const MatR<T> mp = mask.cwiseProduct(prob);
    const auto scores = (mp.cwiseProduct(cl)).rowwise().sum().eval();

    std::vector<T> row_scores(scores.data(), scores.data() + slots), log_q, ds(slots);
    if (!batch.log_q.empty()) {
      log_q.resize(slots);
      log_q[0] = batch.log_q[batch.positives[b]];
      for (size_t s = 1; s < slots; ++s) log_q[s] = batch.log_q[batch.negatives[s - 1]];
    }
    user_loss[b] = SampledSoftmaxLossWithGrad<T>(row_scores, log_q, ds);
    if (grads == nullptr) return;

    const auto dsc = (ConstRowMap<T>(ds.data(), slots, 1) * loss_scale).eval();
    // score = sum_g m_g p_g cl_g
    MatR<T> dcl = mp.array().colwise() * dsc.col(0).array();
    const MatR<T> dp = mask.cwiseProduct(cl).array().colwise() * dsc.col(0).array();
    const auto dot = prob.cwiseProduct(dp).rowwise().sum().eval();
    const auto silu_grad_z =
        (sig_z.array() * (T{1} + z.array() * (T{1} - sig_z.array()))).eval();
    const MatR<T> dz =
        prob.array() * (dp.array().colwise() - dot.col(0).array()) * silu_grad_z;

    auto duw = RowMap<T>(d_user_w.data() + b * groups, 1, groups);
    duw += dz.cwiseProduct(g_gate).colwise().sum();
    RowMap<T>(d_item_w.data() + b * slots * groups, slots, groups) =
        dz.array().rowwise() * uw.array();

    FeedForward<T>& dc = d_cross[b];
    RowMap<T>(dc.w2.data(), hidden, groups) += hid.transpose() * dz;
    const MatR<T> dpre =
        (dz * w2.transpose()).array() *
        (sig_h.array() * (T{1} + pre.array() * (T{1} - sig_h.array())));
    RowMap<T>(dc.b1.data(), 1, hidden) += dpre.colwise().sum();
    RowMap<T>(dc.w1.data(), groups, hidden) += cl.transpose() * dpre;
    dcl += dpre * w1.transpose();

    MatR<T> ddots(slots * k_x, k_u);
    for (size_t s = 0; s < slots; ++s) {
      for (size_t a = 0; a < k_u; ++a) {
        for (size_t j = 0; j < k_x; ++j) ddots(s * k_x + j, a) = dcl(s, a * k_x + j) / tau;
      }
    }
    RowMap<T>(d_user_embs.data() + b * k_u * d, k_u, d) += ddots.transpose() * items;
    RowMap<T>(d_item_embs.data() + b * slots * e, slots * k_x, d) = ddots * f;
  });
  T loss{0};
  for (size_t b = 0; b < b_count; ++b) loss += user_loss[b];
  loss *= loss_scale;
  if (grads == nullptr) return loss;
  for (size_t b = 0; b < b_count; ++b) AddInto(grads->gating.cross_net, d_cross[b]);

  std::vector<T> scratch(std::max({params.user_proj.hidden_dim(),
                                   params.item_proj.hidden_dim(),
                                   params.gating.user_net.hidden_dim(),
                                   params.gating.item_net.hidden_dim()}));
  const bool l2 = mc.l2_normalized;

  // User towers.
  for (size_t b = 0; b < b_count; ++b) {
    const UserOutput<T>& u = users[b];
    std::span<T> dpre(d_user_embs.data() + b * k_u * d, k_u * d);
    NormBackward(u.embs, u.norms, l2, dpre);
    std::vector<T> dproj;
    if (params.compression.empty()) {
      dproj.assign(dpre.begin(), dpre.end());
    } else {
      const size_t kp = params.compression.rows();
      dproj.assign(kp * d, T{0});
      for (size_t j = 0; j < kp; ++j) {
        const auto pj = u.proj_out.row(j);
        for (size_t i = 0; i < k_u; ++i) {
          const T w = params.compression(j, i);
          const T* dv = dpre.data() + i * d;
          T dw{0};
          for (size_t c = 0; c < d; ++c) {
            dproj[j * d + c] += w * dv[c];
            dw += dv[c] * pj[c];
          }
          grads->compression(j, i) += dw;
        }
      }
    }
    auto dx = grads->user_table.row(batch.users[b]);
    params.user_proj.Backward(u.gate_feat, u.proj_hidden, dproj, grads->user_proj,
                              dx, scratch);
    params.gating.user_net.Backward(
        u.gate_feat, user_w_hidden[b],
        std::span<const T>(d_user_w.data() + b * groups, groups),
        grads->gating.user_net, dx, scratch);
  }

  // Item towers.
  auto item_backward = [&](const ItemOutput<T>& item, uint32_t id,
                           std::vector<T>& dembs, std::span<const T> dxw) {
    NormBackward(item.embs, item.norms, l2, std::span<T>(dembs));
    const auto x = params.item_table.row(id);
    auto dx = grads->item_table.row(id);
    params.item_proj.Backward(x, item.proj_hidden, dembs, grads->item_proj, dx, scratch);
    params.gating.item_net.Backward(x, item.gate_hidden, dxw, grads->gating.item_net,
                                    dx, scratch);
  };
  std::vector<T> dembs(e), dxw(groups);
  for (size_t b = 0; b < b_count; ++b) {
    const size_t pair = b * slots;
    dembs.assign(d_item_embs.begin() + pair * e, d_item_embs.begin() + (pair + 1) * e);
    item_backward(pos_out[b], batch.positives[b], dembs,
                  std::span<const T>(d_item_w.data() + pair * groups, groups));
  }
  for (size_t j = 0; j < neg_out.size(); ++j) {
    std::fill(dembs.begin(), dembs.end(), T{0});
    std::fill(dxw.begin(), dxw.end(), T{0});
    for (size_t b = 0; b < b_count; ++b) {
      const size_t pair = b * slots + j + 1;
      AddInto<T>(std::span<T>(dembs), std::span<const T>(d_item_embs.data() + pair * e, e));
      AddInto<T>(std::span<T>(dxw), std::span<const T>(d_item_w.data() + pair * groups, groups));
    }
    item_backward(neg_out[j], batch.negatives[j], dembs, dxw);
  }
  return loss;
}

template <typename T>
T BatchForwardBackward(const DotBaselineParams<T>& params,
                       const TrainBatch<T>& batch, DotBaselineParams<T>* grads,
                       bool mean) {
  CheckBatch(batch, params.user_table.rows(), params.item_table.rows(), 0);
  const ScopedFlushDenormals flush;
  const size_t b_count = batch.size(), slots = batch.slots();
  auto item_of = [&](size_t b, size_t s) {
    return s == 0 ? batch.positives[b] : batch.negatives[s - 1];
  };
  std::vector<T> scores(b_count * slots);
  for (size_t b = 0; b < b_count; ++b) {
    for (size_t s = 0; s < slots; ++s) {
      scores[b * slots + s] = DotScore(params, batch.users[b], item_of(b, s));
    }
  }
  std::vector<T> dscore;
  const T loss = SlotLoss(batch, scores, dscore, mean);
  if (grads == nullptr) return loss;
  const T inv_t = T{1} / static_cast<T>(params.temperature);
  for (size_t b = 0; b < b_count; ++b) {
    const auto u = params.user_table.row(batch.users[b]);
    auto du = grads->user_table.row(batch.users[b]);
    for (size_t s = 0; s < slots; ++s) {
      const uint32_t id = item_of(b, s);
      const T c = dscore[b * slots + s] * inv_t;
      const auto x = params.item_table.row(id);
      auto dx = grads->item_table.row(id);
      for (size_t i = 0; i < u.size(); ++i) {
        du[i] += c * x[i];
        dx[i] += c * u[i];
      }
    }
  }
  return loss;
}

template float BatchForwardBackward<float>(const TowerParams<float>&,
                                           const TrainBatch<float>&,
                                           TowerParams<float>*, ForwardCounters*, bool);
template double BatchForwardBackward<double>(const TowerParams<double>&,
                                             const TrainBatch<double>&,
                                             TowerParams<double>*, ForwardCounters*,
                                             bool);
template float BatchForwardBackward<float>(const DotBaselineParams<float>&,
                                           const TrainBatch<float>&,
                                           DotBaselineParams<float>*, bool);
template double BatchForwardBackward<double>(const DotBaselineParams<double>&,
                                             const TrainBatch<double>&,
                                             DotBaselineParams<double>*, bool);

}  // namespace molr
