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
#include "molr/train/fit.h"

#include <chrono>
#include <cmath>
#include <numeric>

#include "molr/core/error.h"
#include "molr/eval/rankers.h"
#include "molr/train/adam.h"
#include "molr/train/backward.h"

namespace molr {
namespace {

template <typename P>
void ZeroAll(P& p) {
  ForEachTensor(p, [](const std::string&, std::span<float> v, size_t, size_t) {
    std::fill(v.begin(), v.end(), 0.0f);
  });
}

void WriteHeader(std::ostream* log) {
  if (log) *log << "epoch\ttrain_loss\tval_hr10\twall_seconds\n";
}

void WriteRecord(std::ostream* log, const EpochRecord& r) {
  if (log) {
    *log << r.epoch << '\t' << r.train_loss << '\t' << r.val_hr << '\t'
         << r.wall_seconds << '\n';
    log->flush();
  }
}

double ValHr(const Ranker& ranker, const FitData& data, size_t k) {
  if (data.valid.empty()) return 0.0;
  const size_t ks[] = {k};
  return HitRateAtK(ranker, data.valid, ks).at(k);
}

void CheckData(const FitData& data) {
  if (data.train.empty()) throw Error(ErrorCode::kEmptyInput, "no training pairs");
  for (const auto& p : data.train) {
    if (p.user >= data.n_users || p.item >= data.n_items) {
      throw Error(ErrorCode::kOutOfRange, "training pair out of range");
    }
  }
}

// Runs the shared epoch loop; step(batch_pairs) returns the batch loss.
template <typename StepFn, typename EvalFn>
std::vector<EpochRecord> Loop(const FitData& data, const TrainConfig& config,
                              Rng& rng, std::ostream* log, StepFn&& step,
                              EvalFn&& eval) {
  config.Validate();
  CheckData(data);
  WriteHeader(log);
  std::vector<EpochRecord> history;
  std::vector<TrainPair> order = data.train;
  const auto start = std::chrono::steady_clock::now();
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(std::span<TrainPair>(order), rng);
    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t b = 0; b < order.size(); b += config.batch_size) {
      const size_t n = std::min(config.batch_size, order.size() - b);
      loss_sum += step(std::span<const TrainPair>(order.data() + b, n));
      ++batches;
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(batches);
    const bool last = epoch + 1 == config.epochs;
    rec.val_hr = (config.eval_every != 0 && (epoch + 1) % config.eval_every == 0) || last
                     ? eval()
                     : std::nan("");
    rec.wall_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    WriteRecord(log, rec);
    history.push_back(rec);
  }
  return history;
}

std::vector<float> UniformLogQ(const TrainConfig& config, size_t n_items) {
  if (!config.logq_correction) return {};
  return std::vector<float>(n_items, -std::log(static_cast<float>(n_items)));
}

}  // namespace

std::vector<EpochRecord> FitMol(TowerParams<float>& params, const FitData& data,
                                const TrainConfig& config, Rng& rng,
                                std::ostream* log) {
  TowerParams<float> grads = TowerParams<float>::ZerosLike(params);
  AdamState<float> adam;
  const auto log_q = UniformLogQ(config, data.n_items);
  const auto& mol = params.config.mol;
  auto step = [&](std::span<const TrainPair> pairs) {
    TrainBatch<float> batch = MakeBatch<float>(pairs, data.n_items,
                                               config.num_negatives, mol.groups(),
                                               mol.dropout_p, rng);
    batch.log_q = log_q;
    ZeroAll(grads);
    const float loss = BatchForwardBackward(params, batch, &grads);
    AdamStep(params, grads, adam, config);
    return static_cast<double>(loss);
  };
  auto eval = [&]() {
    const MolRanker ranker(params);
    return ValHr(ranker, data, config.eval_k);
  };
  return Loop(data, config, rng, log, step, eval);
}

std::vector<EpochRecord> FitDot(DotBaselineParams<float>& params,
                                const FitData& data, const TrainConfig& config,
                                Rng& rng, std::ostream* log) {
  DotBaselineParams<float> grads = DotBaselineParams<float>::ZerosLike(params);
  AdamState<float> adam;
  const auto log_q = UniformLogQ(config, data.n_items);
  auto step = [&](std::span<const TrainPair> pairs) {
    TrainBatch<float> batch = MakeBatch<float>(pairs, data.n_items,
                                               config.num_negatives, 0, 0.0, rng);
    batch.log_q = log_q;
    ZeroAll(grads);
    const float loss = BatchForwardBackward(params, batch, &grads);
    AdamStep(params, grads, adam, config);
    return static_cast<double>(loss);
  };
  auto eval = [&]() {
    const DotRanker ranker(params);
    return ValHr(ranker, data, config.eval_k);
  };
  return Loop(data, config, rng, log, step, eval);
}

FitResult Fit(const FitData& data, const ModelSpec& spec,
              const TrainConfig& config, Rng& rng, std::ostream* log) {
  FitResult out;
  if (spec.kind == ModelKind::kMol) {
    TowerConfig tc = spec.tower;
    tc.n_users = data.n_users;
    tc.n_items = data.n_items;
    TowerParams<float> params = InitParams<float>(tc, rng);
    out.history = FitMol(params, data, config, rng, log);
    out.params = std::move(params);
  } else {
    DotBaselineParams<float> params = InitDotBaseline<float>(
        data.n_users, data.n_items, spec.dot_dim, spec.dot_temperature, rng);
    out.history = FitDot(params, data, config, rng, log);
    out.params = std::move(params);
  }
  return out;
}

}  // namespace molr
