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
#include "molr/cli/commands.h"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <set>

#include "molr/data/interactions.h"
#include "molr/data/synth.h"
#include "molr/eval/popularity.h"
#include "molr/eval/rank.h"
#include "molr/eval/rankers.h"
#include "molr/eval/report.h"
#include "molr/hindexer/hindexer.h"
#include "molr/mol/mol.h"
#include "molr/model/checkpoint.h"

namespace molr {
namespace {

void RequirePath(const std::filesystem::path& p, const char* key) {
  if (p.empty()) {
    throw Error(ErrorCode::kConfig, std::string("config key '") + key + "' is required");
  }
}

void RequireFile(const std::filesystem::path& p, const char* key) {
  RequirePath(p, key);
  if (!std::filesystem::exists(p)) {
    throw Error(ErrorCode::kMissingArtifact, "missing " + std::string(key) + " " + p.string());
  }
}

InteractionSet LoadDataset(const RunConfig& config) {
  RequireFile(config.dataset, "dataset");
  IngestOptions opts;
  opts.min_count = 1;
  return Ingest(config.dataset, opts);
}

TowerParams<float> RequireMol(Checkpoint ckpt) {
  if (!std::holds_alternative<TowerParams<float>>(ckpt)) {
    throw Error(ErrorCode::kConfig, "this command needs a MoL checkpoint");
  }
  return std::get<TowerParams<float>>(std::move(ckpt));
}

Checkpoint LoadCheckpointFrom(const RunConfig& config) {
  RequireFile(config.checkpoint, "checkpoint");
  return LoadCheckpoint(config.checkpoint);
}

uint64_t QuerySeed(uint64_t seed, uint32_t user) {
  return seed * 0x9E3779B97F4A7C15ULL + user + 1;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingArtifact:
    case ErrorCode::kFormat:
      return kExitMissingArtifact;
    case ErrorCode::kConfig:
    case ErrorCode::kParseError:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kEmptyAfterFilter:
    case ErrorCode::kTooFewInteractions:
      return kExitUsage;
    default:
      return kExitInternal;
  }
}

Retriever::Retriever(TowerParams<float> params, ItemCache<float> cache,
                     HIndexerConfig hindexer, uint64_t seed)
    : params_(std::move(params)),
      cache_(std::move(cache)),
      hindexer_(hindexer),
      seed_(seed) {
  const auto& mol = params_.config.mol;
  if (cache_.size() != params_.config.n_items || cache_.k_u() != mol.k_u ||
      cache_.k_x() != mol.k_x || cache_.d() != mol.d) {
    throw Error(ErrorCode::kFormat, "item cache does not match the checkpoint");
  }
  if (hindexer_.quantized && !cache_.stage1_q()) {
    throw Error(ErrorCode::kConfig, "quantized first stage needs a cache built with quantized = true");
  }
}

std::vector<ScoredItem> Retriever::Query(uint32_t user, size_t k) const {
  return Query(user, k, hindexer_.k_prime);
}

std::vector<ScoredItem> Retriever::Query(uint32_t user, size_t k, size_t k_prime) const {
  if (user >= num_users()) {
    throw Error(ErrorCode::kOutOfRange, "user " + std::to_string(user) + " out of range");
  }
  if (k == 0 || k > num_items()) {
    throw Error(ErrorCode::kOutOfRange, "k must lie in [1, " + std::to_string(num_items()) + "]");
  }
  if (k_prime >= num_items()) return QueryExhaustive(user, k);
  const QueryState<float> q = MakeUserQuery(params_, user);
  HIndexerConfig h = hindexer_;
  h.k_prime = k_prime;
  h.Validate(num_items());
  Rng rng(QuerySeed(seed_, user));
  const CandidateSet cands = HIndexer(Stage1View::Of(cache_), q.stage1, h, rng);
  if (cands.indices.size() < k) return QueryExhaustive(user, k);
  return MolTopK(cache_, params_.gating, cands.indices, q, k, params_.config.mol.tau);
}

std::vector<ScoredItem> Retriever::QueryExhaustive(uint32_t user, size_t k) const {
  if (user >= num_users()) {
    throw Error(ErrorCode::kOutOfRange, "user " + std::to_string(user) + " out of range");
  }
  const QueryState<float> q = MakeUserQuery(params_, user);
  std::vector<uint32_t> all(num_items());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<uint32_t>(i);
  return MolTopK(cache_, params_.gating, all, q, k, params_.config.mol.tau);
}

Retriever LoadRetriever(const RunConfig& config) {
  TowerParams<float> params = RequireMol(LoadCheckpointFrom(config));
  RequireFile(config.cache, "cache");
  return Retriever(std::move(params), LoadItemCache(config.cache), config.hindexer,
                   config.seed);
}

void CmdIngest(const RunConfig& config, std::ostream& out) {
  RequirePath(config.dataset, "dataset");
  InteractionSet set;
  if (config.synthetic) {
    SyntheticSpec spec = config.synth;
    spec.seed = config.seed;
    set = Synthesize(spec).set;
  } else {
    RequireFile(config.input, "input");
    IngestOptions opts;
    opts.delimiter = config.delimiter;
    opts.min_count = config.min_count;
    set = Ingest(config.input, opts);
  }
  std::ofstream os(config.dataset);
  if (!os) throw Error(ErrorCode::kIo, "cannot write " + config.dataset.string());
  ExportCsv(set, os);
  out << "users\t" << set.n_users << "\nitems\t" << set.n_items << "\ninteractions\t"
      << set.interactions.size() << '\n';
}

void CmdTrain(const RunConfig& config, std::ostream& out) {
  RequirePath(config.checkpoint, "checkpoint");
  const InteractionSet set = LoadDataset(config);
  const Split split = SplitLeaveOneOut(set);
  FitData data;
  data.n_users = set.n_users;
  data.n_items = set.n_items;
  data.train = ToTrainPairs(split.train);
  data.valid = ToEvalPairs(split.valid);
  TrainConfig tc = config.train;
  tc.seed = config.seed;
  Rng rng(config.seed);
  FitResult result = Fit(data, config.model, tc, rng, &out);
  SaveCheckpoint(config.checkpoint, result.params);
}

void CmdBuildIndex(const RunConfig& config, std::ostream& out) {
  RequirePath(config.cache, "cache");
  const TowerParams<float> params = RequireMol(LoadCheckpointFrom(config));
  CacheOptions opts;
  opts.quantize_stage1 = config.hindexer.quantized;
  const ItemCache<float> cache = BuildItemCache(params, opts);
  SaveItemCache(config.cache, cache);
  out << "items\t" << cache.size() << "\nstage1_dim\t" << cache.stage1().cols()
      << "\nquantized\t" << (cache.stage1_q() ? "true" : "false") << '\n';
}

void CmdQuery(const RunConfig& config, std::ostream& out) {
  const Retriever r = LoadRetriever(config);
  const auto top = r.Query(config.user, std::min(config.k, r.num_items()));
  out << std::setprecision(9);
  for (size_t i = 0; i < top.size(); ++i) {
    out << (i + 1) << '\t' << top[i].id << '\t' << top[i].score << '\n';
  }
}

void CmdEval(const RunConfig& config, std::ostream& out) {
  const InteractionSet set = LoadDataset(config);
  const Split split = SplitLeaveOneOut(set);
  const Checkpoint ckpt = LoadCheckpointFrom(config);
  std::unique_ptr<Ranker> ranker;
  if (const auto* mol = std::get_if<TowerParams<float>>(&ckpt)) {
    ranker = std::make_unique<MolRanker>(*mol);
  } else {
    ranker = std::make_unique<DotRanker>(std::get<DotBaselineParams<float>>(ckpt));
  }
  if (ranker->num_items() != set.n_items) {
    throw Error(ErrorCode::kFormat, "checkpoint does not match the dataset");
  }
  const auto pairs = ToEvalPairs(split.test);
  const auto ranks = TargetRanks(*ranker, pairs);
  EvalReport report;
  report.hr = HitRatesFromRanks(ranks, config.eval_ks);
  report.mrr = MrrFromRanks(ranks);

  std::vector<uint32_t> users(set.n_users);
  for (size_t u = 0; u < users.size(); ++u) users[u] = static_cast<uint32_t>(u);
  const auto recs = RecommendTopK(*ranker, users, std::min<size_t>(10, set.n_items));
  const auto freq = ItemFrequency(split.train, set.n_items);
  report.popularity_hist =
      ComputePopularityHistogram(recs, freq, config.popularity_buckets).shares;
  out << report.ToText();
  if (!config.report.empty()) {
    std::ofstream os(config.report);
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + config.report.string());
    os << report.ToCsv();
  }
}

void CmdBench(const RunConfig& config, std::ostream& out) {
  const Retriever r = LoadRetriever(config);
  const size_t k = std::min(config.k, r.num_items());
  const size_t nq = config.bench_queries;
  std::vector<std::vector<ScoredItem>> full(nq);
  for (size_t q = 0; q < nq; ++q) {
    full[q] = r.QueryExhaustive(static_cast<uint32_t>(q % r.num_users()), k);
  }
  std::ostringstream csv;
  csv << "k_prime,recall,qps\n";
  for (const size_t kp_raw : config.bench_k_primes) {
    const size_t kp = std::min(kp_raw, r.num_items());
    double overlap = 0.0;
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::vector<ScoredItem>> got(nq);
    for (size_t q = 0; q < nq; ++q) {
      got[q] = r.Query(static_cast<uint32_t>(q % r.num_users()), k, kp);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (size_t q = 0; q < nq; ++q) {
      std::set<uint32_t> ref;
      for (const auto& s : full[q]) ref.insert(s.id);
      size_t hit = 0;
      for (const auto& s : got[q]) hit += ref.count(s.id);
      overlap += static_cast<double>(hit) / static_cast<double>(k);
    }
    csv << kp << ',' << overlap / static_cast<double>(nq) << ','
        << (secs > 0.0 ? static_cast<double>(nq) / secs : 0.0) << '\n';
  }
  if (config.bench_csv.empty()) {
    out << csv.str();
  } else {
    std::ofstream os(config.bench_csv);
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + config.bench_csv.string());
    os << csv.str();
    out << "wrote\t" << config.bench_csv.string() << '\n';
  }
}

void CmdRankAnalysis(const RunConfig& config, std::ostream& out) {
  const Checkpoint ckpt = LoadCheckpointFrom(config);
  BasicMatrix<double> scores;
  if (const auto* mol = std::get_if<TowerParams<float>>(&ckpt)) {
    const TowerParams<double> p = mol->Cast<double>();
    const size_t nu = std::min(config.rank_users, p.config.n_users);
    const size_t ni = std::min(config.rank_items, p.config.n_items);
    const ItemCache<double> cache = BuildItemCache(p);
    std::vector<uint32_t> rows(ni);
    for (size_t i = 0; i < ni; ++i) rows[i] = static_cast<uint32_t>(i);
    scores = BasicMatrix<double>(nu, ni);
    for (size_t u = 0; u < nu; ++u) {
      const auto q = MakeUserQuery(p, static_cast<uint32_t>(u));
      const auto s = ScoreRows(cache, p.gating, rows, q, p.config.mol.tau);
      std::copy(s.begin(), s.end(), scores.row(u).begin());
    }
  } else {
    const auto full = DotScoreMatrix(std::get<DotBaselineParams<float>>(ckpt).Cast<double>());
    const size_t nu = std::min(config.rank_users, full.rows());
    const size_t ni = std::min(config.rank_items, full.cols());
    scores = BasicMatrix<double>(nu, ni);
    for (size_t u = 0; u < nu; ++u) {
      for (size_t i = 0; i < ni; ++i) scores(u, i) = full(u, i);
    }
  }
  const auto sv = SingularValues(scores);
  EvalReport report;
  RankAnalysis ra;
  ra.numeric_rank = NumericRankFromSingularValues(sv, config.rank_tol);
  ra.explained_variance = ExplainedVarianceCurve(scores);
  out << "rows = " << scores.rows() << "\ncols = " << scores.cols()
      << "\nnumeric_rank = " << ra.numeric_rank << '\n';
  out << std::setprecision(10);
  for (size_t dd = 1; dd <= ra.explained_variance.size(); dd *= 2) {
    out << "explained_variance@" << dd << " = " << ra.explained_variance[dd - 1] << '\n';
  }
  if (!config.report.empty()) {
    report.rank_analysis = ra;
    std::ofstream os(config.report);
    if (!os) throw Error(ErrorCode::kIo, "cannot write " + config.report.string());
    os << report.ToCsv();
  }
}

void CmdCostEstimate(const RunConfig& config, std::ostream& out) {
  CostQuery mac = config.cost;
  mac.convention = FlopConvention::kMac;
  CostQuery fma = config.cost;
  fma.convention = FlopConvention::kFma2;
  const double full = GatingFlops(config.cost, false);
  const double dec = GatingFlops(config.cost, true);
  out << std::setprecision(10);
  out << "gating_flops_mac = " << GatingFlops(mac, false) << '\n'
      << "gating_flops_mac_decomposed = " << GatingFlops(mac, true) << '\n'
      << "gating_flops_fma2 = " << GatingFlops(fma, false) << '\n'
      << "gating_flops_fma2_decomposed = " << GatingFlops(fma, true) << '\n'
      << "gating_flops_reduction = " << 1.0 - dec / full << '\n'
      << "gating_memory_bytes = " << GatingMemory(config.cost, false) << '\n'
      << "gating_memory_bytes_decomposed = " << GatingMemory(config.cost, true) << '\n'
      << "arithmetic_intensity = "
      << ArithmeticIntensity(config.cost.B, config.cost.X, config.cost.D, 4.0) << '\n';
  InferenceCostConfig ic = config.inference_cost;
  const auto& mol = config.model.tower.mol;
  ic.k_u = mol.k_u;
  ic.k_x = mol.k_x;
  ic.d = mol.d;
  ic.gating_hidden = mol.gating_hidden;
  const InferenceCost c = MolInferenceFlops(ic, static_cast<double>(config.cost_k_prime));
  for (const auto& t : c.terms) {
    out << "inference_flops." << t.name << (t.cached ? ".cached" : "") << " = " << t.flops
        << '\n';
  }
  out << "inference_flops_total = " << c.total << '\n';
}

}  // namespace molr
