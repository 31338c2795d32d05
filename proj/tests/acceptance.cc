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

// Acceptance checks, one line per criterion:
//   criterion <n> PASS|FAIL <name>: <detail> [<seconds>s / <budget>s]
// Going over the runtime budget is a failure. Arguments select criterion
// numbers; none runs everything. Exits 1 if any criterion failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "molr/cli/commands.h"
#include "molr/core/matrix.h"
#include "molr/core/rng.h"
#include "molr/data/interactions.h"
#include "molr/data/synth.h"
#include "molr/eval/cost.h"
#include "molr/eval/metrics.h"
#include "molr/eval/popularity.h"
#include "molr/eval/rank.h"
#include "molr/eval/rankers.h"
#include "molr/hindexer/hindexer.h"
#include "molr/mol/item_cache.h"
#include "molr/mol/mol.h"
#include "molr/model/dot_baseline.h"
#include "molr/model/towers.h"
#include "molr/quant/quant.h"
#include "molr/train/batch.h"
#include "molr/train/fit.h"
#include "molr/train/grad_check.h"
#include "molr/train/loss.h"

namespace molr {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string List(const std::vector<double>& v, const char* f) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + Fmt(f, v[i]);
  return s + "]";
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

Matrix RandomUnitRows(size_t n, size_t d, Rng& rng) {
  Matrix m(n, d);
  for (size_t r = 0; r < n; ++r) {
    auto row = m.row(r);
    double ss = 0.0;
    for (auto& v : row) {
      v = static_cast<float>(rng.Normal());
      ss += static_cast<double>(v) * v;
    }
    const double inv = 1.0 / std::sqrt(ss);
    for (auto& v : row) v = static_cast<float>(v * inv);
  }
  return m;
}

double Overlap(const std::vector<uint32_t>& got, const std::vector<uint32_t>& want) {
  const std::unordered_set<uint32_t> w(want.begin(), want.end());
  size_t hit = 0;
  for (const uint32_t i : got) hit += w.count(i);
  return static_cast<double>(hit) / static_cast<double>(want.size());
}

std::vector<uint32_t> Ids(const std::vector<ScoredItem>& v) {
  std::vector<uint32_t> out;
  for (const auto& s : v) out.push_back(s.id);
  return out;
}

// Full users x items MoL score matrix, double precision.
MatrixD MolScoreMatrix(const TowerParams<double>& p) {
  const ItemCache<double> cache = BuildItemCache(p);
  std::vector<uint32_t> rows(p.config.n_items);
  std::iota(rows.begin(), rows.end(), 0u);
  MatrixD s(p.config.n_users, p.config.n_items);
  for (size_t u = 0; u < p.config.n_users; ++u) {
    const auto q = MakeUserQuery(p, static_cast<uint32_t>(u));
    const auto r = ScoreRows(cache, p.gating, rows, q, p.config.mol.tau);
    std::copy(r.begin(), r.end(), s.row(u).begin());
  }
  return s;
}

TowerConfig RankTower(uint64_t) {
  TowerConfig c;
  c.n_users = 200;
  c.n_items = 300;
  c.user_dim = 32;
  c.item_dim = 32;
  c.proj_hidden = 64;
  c.mol.k_u = 4;
  c.mol.k_x = 4;
  c.mol.d = 8;
  c.mol.tau = 1.0;
  c.mol.gating_hidden = 64;
  c.mol.dropout_p = 0.0;
  c.mol.l2_normalized = true;
  return c;
}

// ---------------------------------------------------------------------------

Outcome CostFormulas() {
  CostQuery q;
  q.B = 2048;
  q.X = 4096;
  q.D = 1024;
  q.DU = 768;
  q.DX = 128;
  q.DXU = 128;
  q.K = 256;
  q.L = 128;
  const double nd = GatingFlops(q, false) / 1e9;
  const double dec = GatingFlops(q, true) / 1e9;
  const double mem_nd = GatingMemory(q, false) / 1e9;
  const double mem_dec = GatingMemory(q, true) / 1e9;
  const bool ok = std::abs(nd - 2473.9) <= 2473.9 * 1e-3 &&
                  std::abs(mem_nd - 44.0) <= 44.0 * 0.05 &&
                  std::abs(mem_dec - 16.0) <= 16.0 * 0.25 && dec <= 0.5 * nd;
  return {ok, "flops " + Fmt("%.2f", nd) + " GF (decomposed " + Fmt("%.2f", dec) +
                  "), memory " + Fmt("%.2f", mem_nd) + " GB / " + Fmt("%.2f", mem_dec) +
                  " GB"};
}

Outcome IntensityAsymptote() {
  const double ai = ArithmeticIntensity(128, 1e6, 1e6, 1);
  return {std::abs(ai - 256.0) <= 256.0 * 0.01, "intensity " + Fmt("%.4f", ai)};
}

Outcome RankCeiling() {
  std::vector<double> ranks;
  bool ok = true;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(1000 + seed);
    auto p = InitParams<double>(RankTower(seed), rng);
    // Item and cross nets become constants: their output no longer depends
    // on the input, so only the user side moves the gate.
    p.gating.item_net.w1.fill(0.0);
    p.gating.cross_net.w1.fill(0.0);
    const size_t r = NumericRank(MolScoreMatrix(p));
    ranks.push_back(static_cast<double>(r));
    ok = ok && r <= 4 * 8;
  }
  return {ok, "ranks " + List(ranks, "%.0f") + " (bound 32)"};
}

Outcome HighRank() {
  std::vector<double> ranks;
  size_t above = 0;
  bool dot_ok = true;
  std::vector<double> dot_ranks;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(2000 + seed);
    const auto p = InitParams<double>(RankTower(seed), rng);
    const size_t r = NumericRank(MolScoreMatrix(p));
    ranks.push_back(static_cast<double>(r));
    above += r > 128 ? 1 : 0;
    const auto dot = InitDotBaseline<double>(200, 300, 8, 1.0, rng);
    const size_t dr = NumericRank(DotScoreMatrix(dot));
    dot_ranks.push_back(static_cast<double>(dr));
    dot_ok = dot_ok && dr == 8;
  }
  return {above >= 4 && dot_ok, "mol ranks " + List(ranks, "%.0f") + ", dot ranks " +
                                    List(dot_ranks, "%.0f")};
}

Outcome GradientExactness() {
  double worst = 0.0;
  std::vector<double> errs;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    TowerConfig c;
    c.n_users = 8;
    c.n_items = 12;
    c.user_dim = 6;
    c.item_dim = 5;
    c.proj_hidden = 7;
    c.mol.k_u = 2;
    c.mol.k_x = 2;
    c.mol.d = 4;
    c.mol.tau = 1.5;
    c.mol.gating_hidden = 8;
    c.mol.dropout_p = 0.25;
    c.mol.l2_normalized = seed % 2 == 0;
    const auto p = InitParams<double>(c, rng);
    std::vector<TrainPair> pairs;
    for (size_t i = 0; i < 4; ++i) {
      pairs.push_back({static_cast<uint32_t>(rng.Below(c.n_users)),
                       static_cast<uint32_t>(rng.Below(c.n_items))});
    }
    const auto batch = MakeBatch<double>(pairs, c.n_items, 5, c.mol.groups(),
                                         c.mol.dropout_p, rng);
    GradCheckOptions opt;
    opt.seed = seed;
    const auto r = GradCheckMol(p, batch, opt);
    errs.push_back(r.max_rel_error);
    worst = std::max(worst, r.max_rel_error);
  }
  return {worst < 1e-4, "max rel error " + List(errs, "%.2e")};
}

Outcome SampledVsFull() {
  Rng rng(6);
  std::vector<double> logits(50);
  for (auto& l : logits) l = 3.0 * rng.Normal();
  double worst = 0.0;
  for (size_t pos = 0; pos < 50; ++pos) {
    std::vector<double> neg;
    for (size_t i = 0; i < 50; ++i) {
      if (i != pos) neg.push_back(logits[i]);
    }
    const double sampled = SampledSoftmaxLoss<double>(logits[pos], neg);
    // Plain log-sum-exp over the whole corpus, in long double.
    long double mx = *std::max_element(logits.begin(), logits.end());
    long double z = 0.0L;
    for (const double l : logits) z += std::exp(static_cast<long double>(l) - mx);
    const long double full = -(logits[pos] - mx - std::log(z));
    worst = std::max(worst, static_cast<double>(std::abs(sampled - full)));
  }
  return {worst <= 1e-6, "max |sampled - full| " + Fmt("%.3e", worst)};
}

Outcome HIndexerRecall() {
  Rng rng(7);
  const Matrix items = RandomUnitRows(100000, 64, rng);
  const Stage1View view{&items, nullptr};
  HIndexerConfig c;
  c.k_prime = 1000;
  c.sample_ratio = 0.1;
  c.d_prime = 64;
  c.comparator = Comparator::kInclusive;
  HIndexerConfig full = c;
  full.sample_count = items.rows();
  double sum = 0.0;
  double full_min = 1.0;
  for (size_t q = 0; q < 100; ++q) {
    const Matrix query = RandomUnitRows(1, 64, rng);
    const auto exact = ExactTopK(view, query.row(0), 1000);
    Rng qr(q);
    sum += Overlap(HIndexer(view, query.row(0), c, qr).indices, exact);
    full_min = std::min(full_min, Overlap(HIndexer(view, query.row(0), full, qr).indices, exact));
  }
  const double mean = sum / 100.0;
  return {mean >= 0.95 && full_min == 1.0,
          "mean recall " + Fmt("%.4f", mean) + ", full-sample min recall " +
              Fmt("%.4f", full_min)};
}

Outcome TwoStageFidelity() {
  TowerConfig c;
  c.n_users = 100;
  c.n_items = 100000;
  c.user_dim = 32;
  c.item_dim = 32;
  c.proj_hidden = 64;
  c.mol.k_u = 4;
  c.mol.k_x = 4;
  c.mol.d = 16;
  c.mol.tau = 20.0;
  c.mol.gating_hidden = 32;
  c.mol.dropout_p = 0.0;
  c.mol.l2_normalized = true;
  Rng rng(8);
  auto params = InitParams<float>(c, rng);
  auto cache = BuildItemCache(params);
  HIndexerConfig h;
  h.k_prime = 10000;
  h.sample_ratio = 0.1;
  h.d_prime = c.mol.d;
  const Retriever r(std::move(params), std::move(cache), h, 8);
  std::vector<double> ov;
  for (uint32_t u = 0; u < 100; ++u) {
    ov.push_back(Overlap(Ids(r.Query(u, 100)), Ids(r.QueryExhaustive(u, 100))));
  }
  const double mean = Mean(ov);
  return {mean >= 0.95, "mean top-100 overlap " + Fmt("%.4f", mean) + ", min " +
                            Fmt("%.2f", *std::min_element(ov.begin(), ov.end()))};
}

Outcome Int8Fidelity() {
  Rng rng(9);
  const Matrix items = RandomUnitRows(100000, 64, rng);
  const QuantizedRows q = QuantizeRowwise(items);
  double worst = -1.0;  // max over elements of |err| - scale/2
  for (size_t r = 0; r < items.rows(); ++r) {
    for (size_t c = 0; c < items.cols(); ++c) {
      const double rec = static_cast<double>(q.codes[r * q.cols + c]) * q.scales[r];
      const double err = std::abs(static_cast<double>(items(r, c)) - rec);
      worst = std::max(worst, err - 0.5 * q.scales[r]);
    }
  }
  const Stage1View fview{&items, nullptr};
  const Stage1View qview{nullptr, &q};
  double sum = 0.0;
  for (size_t i = 0; i < 100; ++i) {
    const Matrix query = RandomUnitRows(1, 64, rng);
    const auto exact = ExactTopK(fview, query.row(0), 1000);
    sum += Overlap(ExactTopKQuantized(qview, query.row(0), 1000, Int8Scoring::kRowScaled), exact);
  }
  const double mean = sum / 100.0;
  return {worst <= 0.0 && mean >= 0.90,
          "max(err - scale/2) " + Fmt("%.2e", worst) + ", top-1000 overlap " +
              Fmt("%.4f", mean)};
}

// Shared by the learning and popularity criteria.
struct LearningRun {
  std::vector<double> mol_hr;
  std::vector<double> dot_hr;
  std::vector<TowerParams<float>> mol_params;
  std::vector<std::vector<double>> train_frequency;
  std::vector<size_t> n_users;
};

std::optional<LearningRun> g_learning;

ModelSpec LearningSpec(ModelKind kind) {
  ModelSpec spec;
  spec.kind = kind;
  spec.tower.user_dim = 64;
  spec.tower.item_dim = 64;
  spec.tower.proj_hidden = 128;
  spec.tower.mol.k_u = 4;
  spec.tower.mol.k_x = 4;
  spec.tower.mol.d = 16;
  spec.tower.mol.tau = 1.0;
  spec.tower.mol.gating_hidden = 32;
  spec.tower.mol.dropout_p = 0.2;
  spec.tower.mol.l2_normalized = false;
  spec.dot_dim = 16;
  spec.dot_temperature = 1.0;
  return spec;
}

TrainConfig LearningTrain(ModelKind kind, uint64_t seed) {
  TrainConfig tc;
  tc.batch_size = 128;
  tc.num_negatives = 128;
  tc.epochs = 10;
  // Per-model rates, each the best of a small sweep on seed 1.
  tc.lr = kind == ModelKind::kMol ? 0.003 : 0.03;
  tc.seed = seed;
  tc.eval_k = 10;
  tc.eval_every = 0;
  return tc;
}

Outcome LearningSeparation() {
  LearningRun run;
  for (uint64_t seed = 1; seed <= 3; ++seed) {
    SyntheticSpec s;
    s.n_users = 2000;
    s.n_items = 1000;
    s.true_rank = 64;
    s.interactions_per_user = 20;
    s.seed = seed;
    const auto syn = Synthesize(s);
    const Split split = SplitLeaveOneOut(syn.set);
    const FitData data{syn.set.n_users, syn.set.n_items, ToTrainPairs(split.train),
                       ToEvalPairs(split.valid)};
    for (const ModelKind kind : {ModelKind::kMol, ModelKind::kDot}) {
      Rng rng(seed);
      FitResult fr = Fit(data, LearningSpec(kind), LearningTrain(kind, seed), rng);
      const double hr = fr.history.back().val_hr;
      if (kind == ModelKind::kMol) {
        run.mol_hr.push_back(hr);
        run.mol_params.push_back(std::get<TowerParams<float>>(std::move(fr.params)));
      } else {
        run.dot_hr.push_back(hr);
      }
    }
    std::vector<double> freq(syn.set.n_items, 0.0);
    for (const auto& it : split.train) freq[it.item] += 1.0;
    run.train_frequency.push_back(std::move(freq));
    run.n_users.push_back(syn.set.n_users);
  }
  const double mol = Mean(run.mol_hr);
  const double dot = Mean(run.dot_hr);
  g_learning = std::move(run);
  return {mol >= 1.05 * dot, "mean HR@10 mol " + Fmt("%.4f", mol) + " " +
                                 List(g_learning->mol_hr, "%.4f") + " vs dot " +
                                 Fmt("%.4f", dot) + " " + List(g_learning->dot_hr, "%.4f") +
                                 ", ratio " + Fmt("%.3f", dot > 0 ? mol / dot : 0.0)};
}

Outcome PopularityBias() {
  if (!g_learning) return {false, "needs criterion 10 in the same run"};
  bool ok = true;
  std::vector<double> mol_top, pop_top;
  for (size_t i = 0; i < g_learning->mol_params.size(); ++i) {
    const auto& freq = g_learning->train_frequency[i];
    std::vector<uint32_t> users(g_learning->n_users[i]);
    std::iota(users.begin(), users.end(), 0u);
    const MolRanker mol(g_learning->mol_params[i]);
    const PopularityRanker pop(freq);
    const auto hm = ComputePopularityHistogram(RecommendTopK(mol, users, 10), freq);
    const auto hp = ComputePopularityHistogram(RecommendTopK(pop, users, 10), freq);
    mol_top.push_back(hm.shares.back());
    pop_top.push_back(hp.shares.back());
    ok = ok && hm.shares.back() < hp.shares.back();
  }
  return {ok, "top-bucket share mol " + List(mol_top, "%.4f") + " vs popularity " +
                  List(pop_top, "%.4f")};
}

Outcome MetricOracle() {
  TowerConfig c;
  c.n_users = 20;
  c.n_items = 50;
  c.user_dim = 8;
  c.item_dim = 8;
  c.proj_hidden = 16;
  c.mol.k_u = 2;
  c.mol.k_x = 2;
  c.mol.d = 4;
  c.mol.tau = 1.0;
  c.mol.gating_hidden = 8;
  c.mol.dropout_p = 0.0;
  Rng rng(12);
  const auto p = InitParams<float>(c, rng);
  const MolRanker ranker(p);
  std::vector<EvalPair> pairs;
  for (uint32_t u = 0; u < 20; ++u) {
    pairs.push_back({u, static_cast<uint32_t>(rng.Below(50))});
  }
  const std::vector<size_t> ks = {1, 5, 10, 20, 50};
  const auto hr = HitRateAtK(ranker, pairs, ks);
  const double mrr = MeanReciprocalRank(ranker, pairs);
  // Oracle: stable full sort by descending score, position of the target.
  std::vector<size_t> pos;
  for (const auto& e : pairs) {
    std::vector<float> s(50);
    ranker.Score(e.user, s);
    std::vector<uint32_t> order(50);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return s[a] > s[b]; });
    pos.push_back(std::find(order.begin(), order.end(), e.item) - order.begin() + 1);
  }
  bool ok = true;
  for (const size_t k : ks) {
    size_t hits = 0;
    for (const size_t r : pos) hits += r <= k ? 1 : 0;
    ok = ok && hr.at(k) == static_cast<double>(hits) / 20.0;
  }
  double rr = 0.0;
  for (const size_t r : pos) rr += 1.0 / static_cast<double>(r);
  ok = ok && mrr == rr / 20.0;
  return {ok, "hr@{1,5,10,20,50} " +
                  List({hr.at(1), hr.at(5), hr.at(10), hr.at(20), hr.at(50)}, "%.2f") +
                  ", mrr " + Fmt("%.6f", mrr)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace molr

int main(int argc, char** argv) {
  using namespace molr;
  const std::vector<Criterion> all = {
      {1, "cost formulas", 1, CostFormulas},
      {2, "arithmetic intensity", 1, IntensityAsymptote},
      {3, "rank ceiling, user-only gating", 10, RankCeiling},
      {4, "high rank, two-sided gating", 30, HighRank},
      {5, "gradient exactness", 60, GradientExactness},
      {6, "sampled vs full softmax", 1, SampledVsFull},
      {7, "h-indexer recall", 120, HIndexerRecall},
      {8, "two-stage fidelity", 300, TwoStageFidelity},
      {9, "int8 fidelity", 120, Int8Fidelity},
      {10, "learning-capacity separation", 1800, LearningSeparation},
      {11, "popularity bias", 60, PopularityBias},
      {12, "metric oracle", 1, MetricOracle},
  };
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!pick.empty() && !pick.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs < c.budget_seconds;
    if (o.pass && !pass) o.detail += ", over budget";
    failed += pass ? 0 : 1;
    std::printf("criterion %d %s %s: %s [%.2fs / %.0fs]\n", c.id, pass ? "PASS" : "FAIL",
                c.name, o.detail.c_str(), secs, c.budget_seconds);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
