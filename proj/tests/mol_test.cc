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
#include <filesystem>

#include "molr/core/error.h"
#include "molr/core/ops.h"
#include "molr/mol/item_cache.h"
#include "molr/mol/mol.h"
#include "molr/model/towers.h"

namespace molr {
namespace {

template <typename T>
BasicMatrix<T> RandomMatrix(size_t r, size_t c, Rng& rng) {
  BasicMatrix<T> m(r, c);
  for (auto& v : m.values()) v = static_cast<T>(rng.Normal());
  return m;
}

TowerConfig SmallConfig(size_t users, size_t items) {
  TowerConfig c;
  c.n_users = users;
  c.n_items = items;
  c.user_dim = 12;
  c.item_dim = 12;
  c.proj_hidden = 16;
  c.mol.k_u = 3;
  c.mol.k_x = 2;
  c.mol.d = 8;
  c.mol.gating_hidden = 10;
  return c;
}

TEST(Config, Validate) {
  MoLConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.tau = 0.5;
  EXPECT_THROW(c.Validate(), Error);
  c = MoLConfig{};
  c.dropout_p = 1.0;
  EXPECT_THROW(c.Validate(), Error);
  c = MoLConfig{};
  c.k_u = 0;
  EXPECT_THROW(c.Validate(), Error);
}

TEST(Compress, IdentityAndMean) {
  Rng rng(1);
  const auto src = RandomMatrix<double>(4, 5, rng);
  BasicMatrix<double> eye(4, 4);
  for (size_t i = 0; i < 4; ++i) eye(i, i) = 1.0;
  EXPECT_EQ(CompressEmbeddings(src, eye), src);
  BasicMatrix<double> mean_map(4, 1, 0.25);
  const auto m = CompressEmbeddings(src, mean_map);
  for (size_t c = 0; c < 5; ++c) {
    double want = 0;
    for (size_t j = 0; j < 4; ++j) want += src(j, c) / 4;
    EXPECT_NEAR(m(0, c), want, 1e-12);
  }
}

TEST(Compress, MatchesDoubleLoop) {
  Rng rng(2);
  const auto src = RandomMatrix<double>(6, 8, rng);
  const auto w = RandomMatrix<double>(6, 3, rng);
  const auto out = CompressEmbeddings(src, w);
  ASSERT_EQ(out.rows(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    for (size_t c = 0; c < 8; ++c) {
      double acc = 0;
      for (size_t j = 0; j < 6; ++j) acc += w(j, i) * src(j, c);
      EXPECT_NEAR(out(i, c), acc, 1e-12);
    }
  }
  EXPECT_THROW(CompressEmbeddings(src, RandomMatrix<double>(5, 3, rng)), Error);
}

TEST(ComponentLogits, SimpleCases) {
  BasicMatrix<double> u(2, 3, 0.0);
  u(0, 0) = 1;
  u(1, 0) = 1;
  BasicMatrix<double> items(1, 2 * 3, 0.0);
  items(0, 0) = 1;
  items(0, 3) = 1;
  const auto one = ComponentLogits(u, items, 2, 1.0);
  for (const double v : one.values()) EXPECT_DOUBLE_EQ(v, 1.0);
  const auto t20 = ComponentLogits(u, items, 2, 20.0);
  EXPECT_DOUBLE_EQ(t20(0, 0), 0.05);
  BasicMatrix<double> orth(1, 6, 0.0);
  orth(0, 1) = 1;
  orth(0, 5) = 1;
  const auto zero = ComponentLogits(u, orth, 2, 1.0);
  for (const double v : zero.values()) EXPECT_EQ(v, 0.0);
}

TEST(ComponentLogits, LayoutIsUserComponentMajor) {
  Rng rng(3);
  const size_t k_u = 3, k_x = 4, d = 5;
  const auto u = RandomMatrix<double>(k_u, d, rng);
  const auto items = RandomMatrix<double>(7, k_x * d, rng);
  const auto cl = ComponentLogits(u, items, k_x, 2.0);
  ASSERT_EQ(cl.cols(), k_u * k_x);
  for (size_t i = 0; i < 7; ++i) {
    for (size_t a = 0; a < k_u; ++a) {
      for (size_t b = 0; b < k_x; ++b) {
        double dot = 0;
        for (size_t c = 0; c < d; ++c) dot += u(a, c) * items(i, b * d + c);
        EXPECT_NEAR(cl(i, a * k_x + b), dot / 2.0, 1e-12);
      }
    }
  }
  EXPECT_THROW(ComponentLogits(u, RandomMatrix<double>(2, 7, rng), k_x, 1.0), Error);
}

GatingNetwork<double> RandomNets(size_t du, size_t dx, size_t g, size_t h, Rng& rng) {
  return {FeedForward<double>::Random(du, h, g, rng), FeedForward<double>::Random(dx, h, g, rng),
          FeedForward<double>::Random(g, h, g, rng)};
}

TEST(Gating, RowsSumToOne) {
  Rng rng(4);
  const size_t g = 12;
  const auto nets = RandomNets(6, 6, g, 9, rng);
  std::vector<double> uf(6);
  for (auto& v : uf) v = rng.Normal();
  BasicMatrix<double> item_pre(50, g), cl(50, g);
  for (auto& v : item_pre.values()) v = rng.Normal();
  for (auto& v : cl.values()) v = rng.Normal();
  const auto gate = DecomposedGating(nets, std::span<const double>(uf), item_pre, cl);
  for (size_t i = 0; i < gate.rows(); ++i) {
    double s = 0;
    for (const double v : gate.row(i)) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-6);
  }
}

TEST(Gating, ConstantNetsGiveUniformRows) {
  Rng rng(5);
  const size_t g = 6;
  auto nets = RandomNets(4, 4, g, 5, rng);
  for (auto* net : {&nets.user_net, &nets.item_net, &nets.cross_net}) {
    std::fill(net->w1.values().begin(), net->w1.values().end(), 0.0);
    std::fill(net->w2.values().begin(), net->w2.values().end(), 0.0);
  }
  std::vector<double> uf(4, 1.0);
  BasicMatrix<double> cl(3, g);
  for (auto& v : cl.values()) v = rng.Normal();
  const BasicMatrix<double> item_pre(3, g, 0.0);
  const auto gate = DecomposedGating(nets, std::span<const double>(uf), item_pre, cl);
  for (const double v : gate.values()) EXPECT_NEAR(v, 1.0 / g, 1e-15);
}

TEST(Gating, DropoutTrainingOnly) {
  Rng rng(6);
  const size_t g = 8;
  const auto nets = RandomNets(4, 4, g, 5, rng);
  std::vector<double> uf(4, 0.3);
  BasicMatrix<double> item_pre(200, g), cl(200, g);
  for (auto& v : item_pre.values()) v = rng.Normal();
  for (auto& v : cl.values()) v = rng.Normal();
  const auto plain = DecomposedGating(nets, std::span<const double>(uf), item_pre, cl);
  Rng drop_rng(1);
  const auto p0 = DecomposedGating(nets, std::span<const double>(uf), item_pre, cl,
                                   GatingDropout{0.0, &drop_rng, true});
  EXPECT_EQ(p0, plain);
  const auto inference = DecomposedGating(nets, std::span<const double>(uf), item_pre, cl,
                                          GatingDropout{0.5, &drop_rng, false});
  EXPECT_EQ(inference, plain);
  const auto dropped = DecomposedGating(nets, std::span<const double>(uf), item_pre, cl,
                                        GatingDropout{0.25, &drop_rng, true});
  size_t zeros = 0;
  for (size_t i = 0; i < plain.values().size(); ++i) {
    const double v = dropped.values()[i];
    if (v == 0.0) {
      ++zeros;
    } else {
      EXPECT_NEAR(v, plain.values()[i] / 0.75, 1e-15);
    }
  }
  EXPECT_NEAR(static_cast<double>(zeros) / plain.values().size(), 0.25, 0.05);
}

TEST(MolScore, ConvexCombination) {
  const size_t g = 4;
  BasicMatrix<double> uniform(2, g, 0.25), logits(2, g, 0.7);
  for (const double s : MolScore(uniform, logits)) EXPECT_NEAR(s, 0.7, 1e-15);
  BasicMatrix<double> onehot(1, g, 0.0);
  onehot(0, 2) = 1.0;
  BasicMatrix<double> l(1, g, std::vector<double>{1, 2, 3, 4});
  EXPECT_EQ(MolScore(onehot, l)[0], 3.0);
  EXPECT_THROW(MolScore(onehot, BasicMatrix<double>(1, 3)), Error);
}

TEST(MolScore, MatchesDoubleLoop) {
  Rng rng(7);
  const auto pi = RandomMatrix<double>(5, 12, rng);
  const auto cl = RandomMatrix<double>(5, 12, rng);
  const auto s = MolScore(pi, cl);
  for (size_t i = 0; i < 5; ++i) {
    double acc = 0;
    for (size_t g = 0; g < 12; ++g) acc += pi(i, g) * cl(i, g);
    EXPECT_NEAR(s[i], acc, 1e-12);
  }
}

TEST(ItemCache, UnitRowsAndDeterministicRebuild) {
  Rng rng(8);
  const auto params = InitParams<float>(SmallConfig(5, 40), rng);
  const auto cache = BuildItemCache(params);
  ASSERT_EQ(cache.size(), 40u);
  for (size_t i = 0; i < cache.size(); ++i) {
    const auto row = cache.item_embs().row(i);
    for (size_t b = 0; b < cache.k_x(); ++b) {
      double n = 0;
      for (size_t c = 0; c < cache.d(); ++c) n += row[b * cache.d() + c] * row[b * cache.d() + c];
      EXPECT_NEAR(std::sqrt(n), 1.0, 1e-5);
    }
    const auto item = ItemForward(params, static_cast<uint32_t>(i));
    for (size_t g = 0; g < cache.groups(); ++g) {
      EXPECT_EQ(cache.item_gate_pre()(i, g), item.gate_pre[g]);
    }
  }
  EXPECT_EQ(BuildItemCache(params), cache);
}

TEST(ItemCache, SingleItemCorpus) {
  Rng rng(9);
  const auto params = InitParams<float>(SmallConfig(2, 1), rng);
  const auto cache = BuildItemCache(params);
  EXPECT_EQ(cache.size(), 1u);
  EXPECT_EQ(cache.item_embs().cols(), 2u * 8u);
}

TEST(ItemCache, SaveLoadRoundTrip) {
  Rng rng(10);
  const auto params = InitParams<float>(SmallConfig(3, 20), rng);
  CacheOptions opts;
  opts.quantize_stage1 = true;
  const auto cache = BuildItemCache(params, opts);
  const auto path = std::filesystem::temp_directory_path() / "molr_mol_cache.bin";
  SaveItemCache(path, cache);
  EXPECT_EQ(LoadItemCache(path), cache);
  std::filesystem::remove(path);
}

TEST(MolTopK, EdgeCases) {
  Rng rng(11);
  const auto params = InitParams<float>(SmallConfig(3, 30), rng);
  const auto cache = BuildItemCache(params);
  const auto q = MakeUserQuery(params, 1);
  const std::vector<uint32_t> one = {17};
  const auto top = MolTopK(cache, params.gating, one, q, 1, params.config.mol.tau);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].id, 17u);
  EXPECT_THROW(MolTopK(cache, params.gating, {}, q, 1, 20.0), Error);
  try {
    MolTopK(cache, params.gating, {}, q, 1, 20.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyCandidates);
  }
}

// Scores every item by recomputing the item side from parameters.
std::vector<ScoredItem> OracleRanking(const TowerParams<float>& params, uint32_t user) {
  const auto& mc = params.config.mol;
  const auto u = UserForward(params, user);
  const auto uw = params.gating.user_net.Forward(u.gate_feat);
  std::vector<ScoredItem> out;
  for (uint32_t i = 0; i < params.config.n_items; ++i) {
    const auto item = ItemForward(params, i);
    const auto g = mc.groups();
    std::vector<float> cl(g);
    for (size_t a = 0; a < mc.k_u; ++a) {
      for (size_t b = 0; b < mc.k_x; ++b) {
        float dot = 0;
        for (size_t c = 0; c < mc.d; ++c) dot += u.embs(a, c) * item.embs(b, c);
        cl[a * mc.k_x + b] = dot / static_cast<float>(mc.tau);
      }
    }
    const auto cross = params.gating.cross_net.Forward(cl);
    std::vector<float> z(g);
    for (size_t j = 0; j < g; ++j) z[j] = Silu(uw[j] * item.gate_pre[j] + cross[j]);
    SoftmaxInPlace<float>(z);
    float s = 0;
    for (size_t j = 0; j < g; ++j) s += z[j] * cl[j];
    out.push_back({i, s});
  }
  std::sort(out.begin(), out.end(), RanksBefore);
  return out;
}

TEST(MolTopK, MatchesExhaustiveOracle) {
  Rng rng(12);
  const auto params = InitParams<float>(SmallConfig(4, 500), rng);
  const auto cache = BuildItemCache(params);
  std::vector<uint32_t> all(500);
  for (uint32_t i = 0; i < 500; ++i) all[i] = i;
  for (uint32_t user = 0; user < 4; ++user) {
    const auto q = MakeUserQuery(params, user);
    const auto oracle = OracleRanking(params, user);
    const auto top = MolTopK(cache, params.gating, all, q, 10, params.config.mol.tau);
    for (size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(top[i].id, oracle[i].id);
      EXPECT_EQ(top[i].score, oracle[i].score);
    }
    const auto full = MolTopK(cache, params.gating, all, q, 500, params.config.mol.tau);
    for (size_t i = 0; i < 500; ++i) EXPECT_EQ(full[i], oracle[i]);
  }
}

TEST(MolTopK, CachedEqualsRecomputedOnLargeCorpus) {
  Rng rng(13);
  auto cfg = SmallConfig(2, 10000);
  const auto params = InitParams<float>(cfg, rng);
  const auto cache = BuildItemCache(params);
  std::vector<uint32_t> all(10000);
  for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto q = MakeUserQuery(params, 0);
  const auto oracle = OracleRanking(params, 0);
  const auto top = MolTopK(cache, params.gating, all, q, 100, cfg.mol.tau);
  for (size_t i = 0; i < 100; ++i) EXPECT_EQ(top[i], oracle[i]);
}

TEST(MolScore, BoundedByInverseTau) {
  Rng rng(14);
  auto cfg = SmallConfig(20, 200);
  cfg.mol.tau = 4.0;
  const auto params = InitParams<float>(cfg, rng);
  const auto cache = BuildItemCache(params);
  for (uint32_t u = 0; u < 20; ++u) {
    const auto s = ScoreAll(cache, params.gating, MakeUserQuery(params, u), cfg.mol.tau);
    for (const float v : s) EXPECT_LE(std::fabs(v), 1.0 / 4.0 + 1e-6);
  }
}

TEST(Hypersphere, MeanAbsCosineShrinksWithDim) {
  Rng rng(15);
  double prev = 1e9;
  for (size_t d : {8u, 16u, 32u, 64u, 128u, 256u}) {
    double acc = 0;
    std::vector<double> a(d), b(d);
    for (int p = 0; p < 10000; ++p) {
      for (auto& v : a) v = rng.Normal();
      for (auto& v : b) v = rng.Normal();
      L2NormalizeInPlace<double>(a);
      L2NormalizeInPlace<double>(b);
      acc += std::fabs(Dot<double>(a, b));
    }
    const double mean = acc / 10000;
    EXPECT_LT(mean, prev) << "d=" << d;
    prev = mean;
  }
}

}  // namespace
}  // namespace molr
