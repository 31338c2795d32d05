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
#include "molr/cli/run_config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "molr/core/error.h"

namespace molr {
namespace {

std::string Trim(const std::string& s) {
  const auto ws = " \t\r\n";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <typename T>
T ParseInt(const std::string& v) {
  T out{};
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw Error(ErrorCode::kConfig, "expected an integer, got '" + v + "'");
  }
  return out;
}

double ParseDouble(const std::string& v) {
  size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) {
    throw Error(ErrorCode::kConfig, "expected a number, got '" + v + "'");
  }
  return out;
}

bool ParseBool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(ErrorCode::kConfig, "expected true/false, got '" + v + "'");
}

std::vector<size_t> ParseList(const std::string& v) {
  std::vector<size_t> out;
  size_t pos = 0;
  while (pos <= v.size()) {
    const size_t comma = v.find(',', pos);
    const std::string part = Trim(v.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos));
    out.push_back(ParseInt<size_t>(part));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = {
      {"input", [](RunConfig& c, const std::string& v) { c.input = v; }},
      {"dataset", [](RunConfig& c, const std::string& v) { c.dataset = v; }},
      {"checkpoint", [](RunConfig& c, const std::string& v) { c.checkpoint = v; }},
      {"cache", [](RunConfig& c, const std::string& v) { c.cache = v; }},
      {"report", [](RunConfig& c, const std::string& v) { c.report = v; }},
      {"bench_csv", [](RunConfig& c, const std::string& v) { c.bench_csv = v; }},
      {"delimiter", [](RunConfig& c, const std::string& v) { c.delimiter = v; }},
      {"min_count", [](RunConfig& c, const std::string& v) { c.min_count = ParseInt<size_t>(v); }},
      {"synthetic", [](RunConfig& c, const std::string& v) { c.synthetic = ParseBool(v); }},
      {"synth_users", [](RunConfig& c, const std::string& v) { c.synth.n_users = ParseInt<size_t>(v); }},
      {"synth_items", [](RunConfig& c, const std::string& v) { c.synth.n_items = ParseInt<size_t>(v); }},
      {"synth_rank", [](RunConfig& c, const std::string& v) { c.synth.true_rank = ParseInt<size_t>(v); }},
      {"synth_per_user", [](RunConfig& c, const std::string& v) {
         c.synth.interactions_per_user = ParseInt<size_t>(v);
       }},
      {"model", [](RunConfig& c, const std::string& v) {
         if (v == "mol") {
           c.model.kind = ModelKind::kMol;
         } else if (v == "dot") {
           c.model.kind = ModelKind::kDot;
         } else {
           throw Error(ErrorCode::kConfig, "model must be mol or dot");
         }
       }},
      {"k_u", [](RunConfig& c, const std::string& v) { c.model.tower.mol.k_u = ParseInt<size_t>(v); }},
      {"k_x", [](RunConfig& c, const std::string& v) { c.model.tower.mol.k_x = ParseInt<size_t>(v); }},
      {"d", [](RunConfig& c, const std::string& v) { c.model.tower.mol.d = ParseInt<size_t>(v); }},
      {"tau", [](RunConfig& c, const std::string& v) { c.model.tower.mol.tau = ParseDouble(v); }},
      {"gating_hidden", [](RunConfig& c, const std::string& v) {
         c.model.tower.mol.gating_hidden = ParseInt<size_t>(v);
       }},
      {"dropout", [](RunConfig& c, const std::string& v) { c.model.tower.mol.dropout_p = ParseDouble(v); }},
      {"l2_normalized", [](RunConfig& c, const std::string& v) {
         c.model.tower.mol.l2_normalized = ParseBool(v);
       }},
      {"user_dim", [](RunConfig& c, const std::string& v) { c.model.tower.user_dim = ParseInt<size_t>(v); }},
      {"item_dim", [](RunConfig& c, const std::string& v) { c.model.tower.item_dim = ParseInt<size_t>(v); }},
      {"proj_hidden", [](RunConfig& c, const std::string& v) { c.model.tower.proj_hidden = ParseInt<size_t>(v); }},
      {"compressed_from", [](RunConfig& c, const std::string& v) {
         c.model.tower.compressed_from = ParseInt<size_t>(v);
       }},
      {"dot_dim", [](RunConfig& c, const std::string& v) { c.model.dot_dim = ParseInt<size_t>(v); }},
      {"dot_temperature", [](RunConfig& c, const std::string& v) { c.model.dot_temperature = ParseDouble(v); }},
      {"batch_size", [](RunConfig& c, const std::string& v) { c.train.batch_size = ParseInt<size_t>(v); }},
      {"num_negatives", [](RunConfig& c, const std::string& v) { c.train.num_negatives = ParseInt<size_t>(v); }},
      {"lr", [](RunConfig& c, const std::string& v) { c.train.lr = ParseDouble(v); }},
      {"beta1", [](RunConfig& c, const std::string& v) { c.train.beta1 = ParseDouble(v); }},
      {"beta2", [](RunConfig& c, const std::string& v) { c.train.beta2 = ParseDouble(v); }},
      {"adam_eps", [](RunConfig& c, const std::string& v) { c.train.eps = ParseDouble(v); }},
      {"epochs", [](RunConfig& c, const std::string& v) { c.train.epochs = ParseInt<size_t>(v); }},
      {"logq_correction", [](RunConfig& c, const std::string& v) { c.train.logq_correction = ParseBool(v); }},
      {"eval_k", [](RunConfig& c, const std::string& v) { c.train.eval_k = ParseInt<size_t>(v); }},
      {"eval_every", [](RunConfig& c, const std::string& v) { c.train.eval_every = ParseInt<size_t>(v); }},
      {"k_prime", [](RunConfig& c, const std::string& v) { c.hindexer.k_prime = ParseInt<size_t>(v); }},
      {"sample_ratio", [](RunConfig& c, const std::string& v) { c.hindexer.sample_ratio = ParseDouble(v); }},
      {"sample_count", [](RunConfig& c, const std::string& v) { c.hindexer.sample_count = ParseInt<size_t>(v); }},
      {"comparator", [](RunConfig& c, const std::string& v) {
         if (v == "inclusive") {
           c.hindexer.comparator = Comparator::kInclusive;
         } else if (v == "strict") {
           c.hindexer.comparator = Comparator::kStrict;
         } else {
           throw Error(ErrorCode::kConfig, "comparator must be inclusive or strict");
         }
       }},
      {"quantized", [](RunConfig& c, const std::string& v) { c.hindexer.quantized = ParseBool(v); }},
      {"int8_scoring", [](RunConfig& c, const std::string& v) {
         if (v == "row_scaled") {
           c.hindexer.int8_scoring = Int8Scoring::kRowScaled;
         } else if (v == "raw_int32") {
           c.hindexer.int8_scoring = Int8Scoring::kRawInt32;
         } else {
           throw Error(ErrorCode::kConfig, "int8_scoring must be row_scaled or raw_int32");
         }
       }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = ParseInt<uint64_t>(v); }},
      {"user", [](RunConfig& c, const std::string& v) { c.user = ParseInt<uint32_t>(v); }},
      {"k", [](RunConfig& c, const std::string& v) { c.k = ParseInt<size_t>(v); }},
      {"port", [](RunConfig& c, const std::string& v) { c.port = ParseInt<int>(v); }},
      {"eval_ks", [](RunConfig& c, const std::string& v) { c.eval_ks = ParseList(v); }},
      {"popularity_buckets", [](RunConfig& c, const std::string& v) {
         c.popularity_buckets = ParseInt<size_t>(v);
       }},
      {"bench_k_primes", [](RunConfig& c, const std::string& v) { c.bench_k_primes = ParseList(v); }},
      {"bench_queries", [](RunConfig& c, const std::string& v) { c.bench_queries = ParseInt<size_t>(v); }},
      {"rank_users", [](RunConfig& c, const std::string& v) { c.rank_users = ParseInt<size_t>(v); }},
      {"rank_items", [](RunConfig& c, const std::string& v) { c.rank_items = ParseInt<size_t>(v); }},
      {"rank_tol", [](RunConfig& c, const std::string& v) { c.rank_tol = ParseDouble(v); }},
      {"cost_b", [](RunConfig& c, const std::string& v) { c.cost.B = ParseDouble(v); }},
      {"cost_x", [](RunConfig& c, const std::string& v) { c.cost.X = ParseDouble(v); }},
      {"cost_d", [](RunConfig& c, const std::string& v) { c.cost.D = ParseDouble(v); }},
      {"cost_du", [](RunConfig& c, const std::string& v) { c.cost.DU = ParseDouble(v); }},
      {"cost_dx", [](RunConfig& c, const std::string& v) { c.cost.DX = ParseDouble(v); }},
      {"cost_dxu", [](RunConfig& c, const std::string& v) { c.cost.DXU = ParseDouble(v); }},
      {"cost_k", [](RunConfig& c, const std::string& v) { c.cost.K = ParseDouble(v); }},
      {"cost_l", [](RunConfig& c, const std::string& v) { c.cost.L = ParseDouble(v); }},
      {"cost_convention", [](RunConfig& c, const std::string& v) {
         if (v == "mac") {
           c.cost.convention = FlopConvention::kMac;
         } else if (v == "fma2") {
           c.cost.convention = FlopConvention::kFma2;
         } else {
           throw Error(ErrorCode::kConfig, "cost_convention must be mac or fma2");
         }
       }},
      {"cost_user_feature_dim", [](RunConfig& c, const std::string& v) {
         c.inference_cost.user_feature_dim = ParseInt<size_t>(v);
       }},
      {"cost_proj_hidden", [](RunConfig& c, const std::string& v) {
         c.inference_cost.proj_hidden = ParseInt<size_t>(v);
       }},
      {"cost_k_prime", [](RunConfig& c, const std::string& v) { c.cost_k_prime = ParseInt<size_t>(v); }},
  };
  return setters;
}

}  // namespace

void RunConfig::Validate() const {
  if (delimiter != "," && delimiter != "::") {
    throw Error(ErrorCode::kConfig, "delimiter must be ',' or '::'");
  }
  if (synthetic) synth.Validate();
  if (model.kind == ModelKind::kMol) {
    model.tower.mol.Validate();
  } else if (model.dot_dim == 0 || !(model.dot_temperature > 0.0)) {
    throw Error(ErrorCode::kConfig, "dot model needs dot_dim > 0 and dot_temperature > 0");
  }
  train.Validate();
  if (k == 0) throw Error(ErrorCode::kConfig, "k must be >= 1");
  if (hindexer.k_prime == 0) throw Error(ErrorCode::kConfig, "k_prime must be >= 1");
  if (!hindexer.sample_count &&
      !(hindexer.sample_ratio > 0.0 && hindexer.sample_ratio <= 1.0)) {
    throw Error(ErrorCode::kConfig, "sample_ratio must lie in (0, 1]");
  }
  if (port < 0 || port > 65535) throw Error(ErrorCode::kConfig, "port out of range");
  if (eval_ks.empty()) throw Error(ErrorCode::kConfig, "eval_ks is empty");
  for (const size_t kk : eval_ks) {
    if (kk == 0) throw Error(ErrorCode::kConfig, "eval_ks entries must be >= 1");
  }
  if (popularity_buckets == 0) throw Error(ErrorCode::kConfig, "popularity_buckets must be >= 1");
  if (bench_k_primes.empty()) throw Error(ErrorCode::kConfig, "bench_k_primes is empty");
  if (bench_queries == 0) throw Error(ErrorCode::kConfig, "bench_queries must be >= 1");
  if (rank_users == 0 || rank_items == 0) throw Error(ErrorCode::kConfig, "rank sizes must be >= 1");
  cost.Validate();
}

RunConfig ParseRunConfig(std::istream& in) {
  RunConfig c;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw Error(ErrorCode::kConfig, where + "expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    const auto it = Setters().find(key);
    if (it == Setters().end()) throw Error(ErrorCode::kConfig, where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw Error(ErrorCode::kConfig, where + "duplicate key '" + key + "'");
    try {
      it->second(c, value);
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfig, where + key + ": " + e.what());
    }
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingArtifact, "cannot open config " + path.string());
  return ParseRunConfig(in);
}

}  // namespace molr
