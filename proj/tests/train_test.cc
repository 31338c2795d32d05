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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "molr/core/error.h"
#include "molr/data/interactions.h"
#include "molr/data/synth.h"
#include "molr/mol/item_cache.h"
#include "molr/model/checkpoint.h"
#include "molr/train/adam.h"
#include "molr/train/backward.h"
#include "molr/train/batch.h"
#include "molr/train/fit.h"
#include "molr/train/grad_check.h"
#include "molr/train/loss.h"

namespace molr {
namespace {

template <typename P>
P* NoGrad(const P&) {
  return nullptr;
}

TowerConfig TinyTower(size_t users, size_t items) {
  TowerConfig c;
  c.n_users = users;
  c.n_items = items;
  c.user_dim = 6;
  c.item_dim = 5;
  c.proj_hidden = 7;
  c.mol.k_u = 2;
  c.mol.k_x = 2;
  c.mol.d = 4;
  c.mol.tau = 1.5;
  c.mol.gating_hidden = 8;
  return c;
}

TrainBatch<double> RandomBatch(size_t users, size_t items, size_t b, size_t n,
                               size_t groups, double dropout, Rng& rng) {
  std::vector<TrainPair> pairs;
  for (size_t i = 0; i < b; ++i) {
    pairs.push_back({static_cast<uint32_t>(rng.Below(users)),
                     static_cast<uint32_t>(rng.Below(items))});
  }
  return MakeBatch<double>(pairs, items, n, groups, dropout, rng);
}

double FullCrossEntropy(const std::vector<double>& logits, size_t target) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double z = 0;
  for (const double l : logits) z += std::exp(l - mx);
  return -(logits[target] - mx - std::log(z));
}

TEST(Loss, Trivial) {
  const std::vector<double> none;
  EXPECT_NEAR(SampledSoftmaxLoss<double>(3.0, none), 0.0, 1e-15);
  const std::vector<double> one = {0.0};
  EXPECT_NEAR(SampledSoftmaxLoss<double>(0.0, one), std::log(2.0), 1e-15);
  const std::vector<double> big = {-1000.0};
  EXPECT_NEAR(SampledSoftmaxLoss<double>(1000.0, big), 0.0, 1e-12);
  EXPECT_TRUE(std::isfinite(SampledSoftmaxLoss<double>(-1000.0, std::vector<double>{1000.0})));
}

TEST(Loss, AllOtherItemsEqualsFullSoftmax) {
  Rng rng(1);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> logits(50);
    for (auto& l : logits) l = rng.Normal() * 3;
    const size_t pos = rng.Below(50);
    std::vector<double> negs;
    for (size_t i = 0; i < 50; ++i) {
      if (i != pos) negs.push_back(logits[i]);
    }
    EXPECT_NEAR(SampledSoftmaxLoss<double>(logits[pos], negs),
                FullCrossEntropy(logits, pos), 1e-6);
  }
}

TEST(Loss, GradientIsSoftmaxMinusOneHot) {
  const std::vector<double> logits = {1.0, 2.0, -0.5};
  std::vector<double> grad(3);
  SampledSoftmaxLossWithGrad<double>(logits, {}, grad);
  double z = 0;
  for (const double l : logits) z += std::exp(l);
  EXPECT_NEAR(grad[0], std::exp(1.0) / z - 1.0, 1e-12);
  EXPECT_NEAR(grad[1], std::exp(2.0) / z, 1e-12);
}

TEST(Loss, UniformLogQIsAShift) {
  const std::vector<double> logits = {0.3, -1.2, 2.0, 0.1};
  const std::vector<double> lq(4, std::log(1.0 / 1000));
  std::vector<double> g1(4), g2(4);
  const double a = SampledSoftmaxLossWithGrad<double>(logits, {}, g1);
  const double b = SampledSoftmaxLossWithGrad<double>(logits, lq, g2);
  EXPECT_NEAR(a, b, 1e-12);
  for (size_t i = 0; i < 4; ++i) EXPECT_NEAR(g1[i], g2[i], 1e-12);
}

TEST(Loss, MolBatchOverWholeCorpusEqualsFullSoftmax) {
  Rng rng(2);
  const auto p = InitParams<double>(TinyTower(5, 50), rng);
  const auto cache = BuildItemCache(p);
  TrainBatch<double> batch;
  batch.users = {2};
  batch.positives = {17};
  for (uint32_t i = 0; i < 50; ++i) {
    if (i != 17) batch.negatives.push_back(i);
  }
  const auto all = ScoreAll(cache, p.gating, MakeUserQuery(p, 2), p.config.mol.tau);
  EXPECT_NEAR(BatchForwardBackward(p, batch, NoGrad(p)),
              FullCrossEntropy(std::vector<double>(all.begin(), all.end()), 17), 1e-6);
}

TEST(GradCheck, TinyMolModelIsExact) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    TowerConfig c = TinyTower(8, 12);
    c.mol.l2_normalized = seed % 2 == 0;
    c.compressed_from = seed == 3 ? 3 : 0;
    const auto p = InitParams<double>(c, rng);
    const auto batch = RandomBatch(8, 12, 4, 5, 4, 0.25, rng);
    GradCheckOptions opt;
    opt.seed = seed;
    const auto r = GradCheckMol(p, batch, opt);
    EXPECT_LT(r.max_rel_error, 1e-4) << "seed " << seed << " " << r.worst_tensor;
    EXPECT_GT(r.coords_checked, 100u);
  }
}

TEST(GradCheck, DetectsScaledGradient) {
  Rng rng(9);
  const auto p = InitParams<double>(TinyTower(8, 12), rng);
  const auto batch = RandomBatch(8, 12, 4, 5, 4, 0.0, rng);
  const auto r = GradCheckMol(p, batch, {}, "gating.cross_net.w1", 2.0);
  EXPECT_NEAR(r.max_rel_error, 0.5, 1e-3);
  EXPECT_EQ(r.worst_tensor, "gating.cross_net.w1");
}

TEST(GradCheck, DotBaselineGradient) {
  Rng rng(10);
  auto p = InitDotBaseline<double>(6, 9, 3, 0.7, rng);
  const auto batch = RandomBatch(6, 9, 5, 4, 0, 0.0, rng);
  auto g = DotBaselineParams<double>::ZerosLike(p);
  BatchForwardBackward(p, batch, &g);
  const std::vector<CheckedTensor> ts = {
      {"user_table", p.user_table.values(), g.user_table.values()},
      {"item_table", p.item_table.values(), g.item_table.values()}};
  const auto r = GradCheck(ts, [&] { return BatchForwardBackward(p, batch, NoGrad(p)); });
  EXPECT_LT(r.max_rel_error, 1e-6);
}

TEST(Training, ItemTowerRunsOncePerPositiveAndNegative) {
  Rng rng(11);
  const auto p = InitParams<double>(TinyTower(10, 30), rng);
  const auto batch = RandomBatch(10, 30, 7, 9, 4, 0.0, rng);
  auto g = TowerParams<double>::ZerosLike(p);
  ForwardCounters counters;
  BatchForwardBackward(p, batch, &g, &counters);
  EXPECT_EQ(counters.item_forward_calls, 7u + 9u);
  EXPECT_EQ(counters.user_forward_calls, 7u);
}

TEST(Training, BatchValidation) {
  Rng rng(12);
  const auto p = InitParams<double>(TinyTower(10, 30), rng);
  TrainBatch<double> empty;
  EXPECT_THROW(BatchForwardBackward(p, empty, NoGrad(p)), Error);
  auto bad = RandomBatch(10, 30, 2, 3, 4, 0.0, rng);
  bad.negatives[0] = 30;
  EXPECT_THROW(BatchForwardBackward(p, bad, NoGrad(p)), Error);
}

TEST(Batch, DropoutMask) {
  Rng rng(13);
  std::vector<TrainPair> pairs(64, TrainPair{0, 0});
  const auto none = MakeBatch<double>(pairs, 100, 20, 16, 0.0, rng);
  EXPECT_TRUE(none.gate_mask.empty());
  EXPECT_EQ(none.negatives.size(), 20u);
  const auto b = MakeBatch<double>(pairs, 100, 20, 16, 0.25, rng);
  ASSERT_EQ(b.gate_mask.size(), 64u * 21u * 16u);
  size_t dropped = 0;
  for (const double m : b.gate_mask) {
    EXPECT_TRUE(m == 0.0 || std::fabs(m - 1.0 / 0.75) < 1e-12);
    dropped += m == 0.0;
  }
  EXPECT_NEAR(static_cast<double>(dropped) / b.gate_mask.size(), 0.25, 0.02);
  for (const uint32_t n : b.negatives) EXPECT_LT(n, 100u);
}

TEST(Batch, DropoutChangesTrainingLossOnly) {
  Rng rng(14);
  const auto p = InitParams<double>(TinyTower(10, 30), rng);
  auto batch = RandomBatch(10, 30, 6, 8, 4, 0.5, rng);
  const double with = BatchForwardBackward(p, batch, NoGrad(p));
  batch.gate_mask.clear();
  const double without = BatchForwardBackward(p, batch, NoGrad(p));
  EXPECT_NE(with, without);
}

TEST(Adam, TwoStepOracle) {
  TrainConfig c;
  c.lr = 0.1;
  std::vector<double> p = {1.0, -2.0};
  const std::vector<double> g = {0.5, 0.0};
  AdamState<double> s;
  const std::vector<std::span<double>> ps = {std::span<double>(p)};
  const std::vector<std::span<const double>> gs = {std::span<const double>(g)};
  AdamStep<double>(ps, gs, s, c);
  // m_hat = g, v_hat = g^2, so the first step is lr * g / (|g| + eps).
  EXPECT_NEAR(p[0], 1.0 - 0.1 * 0.5 / (0.5 + 1e-8), 1e-12);
  EXPECT_EQ(p[1], -2.0);
  AdamStep<double>(ps, gs, s, c);
  EXPECT_NEAR(p[0], 1.0 - 2 * 0.1 * 0.5 / (0.5 + 1e-8), 1e-12);
  EXPECT_EQ(s.step, 2);
  const std::vector<double> wrong(3);
  const std::vector<std::span<const double>> gw = {std::span<const double>(wrong)};
  EXPECT_THROW(AdamStep<double>(ps, gw, s, c), Error);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = TrainConfig{};
  c.lr = 0;
  EXPECT_THROW(c.Validate(), Error);
  c = TrainConfig{};
  c.beta2 = 1.0;
  EXPECT_THROW(c.Validate(), Error);
  c = TrainConfig{};
  c.num_negatives = 0;
  EXPECT_THROW(c.Validate(), Error);
}

FitData SmallData(uint64_t seed) {
  SyntheticSpec s;
  s.n_users = 150;
  s.n_items = 80;
  s.true_rank = 4;
  s.interactions_per_user = 10;
  s.seed = seed;
  const auto syn = Synthesize(s);
  const auto split = SplitLeaveOneOut(syn.set);
  return {syn.set.n_users, syn.set.n_items, ToTrainPairs(split.train),
          ToEvalPairs(split.valid)};
}

ModelSpec SmallMol() {
  ModelSpec m;
  m.kind = ModelKind::kMol;
  m.tower.user_dim = 8;
  m.tower.item_dim = 8;
  m.tower.proj_hidden = 16;
  m.tower.mol.k_u = 2;
  m.tower.mol.k_x = 2;
  m.tower.mol.d = 4;
  m.tower.mol.tau = 1.0;
  m.tower.mol.gating_hidden = 8;
  return m;
}

TEST(Fit, DeterministicPerSeed) {
  const FitData data = SmallData(1);
  TrainConfig tc;
  tc.epochs = 2;
  tc.batch_size = 32;
  tc.num_negatives = 16;
  tc.lr = 0.01;
  for (const ModelKind kind : {ModelKind::kMol, ModelKind::kDot}) {
    ModelSpec spec = SmallMol();
    spec.kind = kind;
    spec.dot_dim = 4;
    Rng a(5), b(5), c(6);
    const auto r1 = Fit(data, spec, tc, a);
    const auto r2 = Fit(data, spec, tc, b);
    const auto r3 = Fit(data, spec, tc, c);
    EXPECT_EQ(CheckpointHash(r1.params), CheckpointHash(r2.params));
    EXPECT_NE(CheckpointHash(r1.params), CheckpointHash(r3.params));
    ASSERT_EQ(r1.history.size(), 2u);
    EXPECT_EQ(r1.history[1].train_loss, r2.history[1].train_loss);
  }
}

TEST(Fit, LossFallsAndHitRateBeatsChance) {
  const FitData data = SmallData(2);
  TrainConfig tc;
  tc.epochs = 15;
  tc.batch_size = 64;
  tc.num_negatives = 32;
  tc.lr = 0.01;
  for (const ModelKind kind : {ModelKind::kMol, ModelKind::kDot}) {
    ModelSpec spec = SmallMol();
    spec.kind = kind;
    spec.dot_dim = 4;
    Rng rng(3);
    std::ostringstream log;
    const auto r = Fit(data, spec, tc, rng, &log);
    EXPECT_LT(r.history.back().train_loss, r.history.front().train_loss);
    // Chance HR@10 over 80 items is 0.125.
    EXPECT_GT(r.history.back().val_hr, 0.2);
    EXPECT_EQ(log.str().substr(0, 5), "epoch");
  }
}

}  // namespace
}  // namespace molr
