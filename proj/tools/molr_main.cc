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
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "molr/cli/commands.h"
#include "molr/cli/run_config.h"
#include "molr/cli/server.h"

namespace {

struct Overrides {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<size_t> k;
  std::optional<size_t> k_prime;
  std::optional<double> sample_ratio;
  std::optional<int> port;
  std::optional<uint32_t> user;
};

void AddCommonFlags(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "key = value run config")->required();
  sub->add_option("--seed", o.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"molr: mixture-of-logits retrieval"};
  app.require_subcommand(1);
  Overrides o;

  struct Entry {
    const char* name;
    const char* help;
    void (*fn)(const molr::RunConfig&, std::ostream&);
  };
  const Entry entries[] = {
      {"ingest", "filter and densify an interaction file", molr::CmdIngest},
      {"train", "train a model on the dataset", molr::CmdTrain},
      {"build-index", "precompute the item cache", molr::CmdBuildIndex},
      {"query", "two-stage top-k for one user", molr::CmdQuery},
      {"serve", "line-protocol query server", molr::CmdServe},
      {"eval", "full-corpus metrics on the test split", molr::CmdEval},
      {"bench", "recall and throughput over a k' grid", molr::CmdBench},
      {"rank-analysis", "numeric rank of the score matrix", molr::CmdRankAnalysis},
      {"cost-estimate", "analytic gating and inference costs", molr::CmdCostEstimate},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const auto& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    AddCommonFlags(sub, o);
    const std::string name = e.name;
    if (name == "query" || name == "bench" || name == "serve") {
      sub->add_option("--k", o.k, "final top-k");
      sub->add_option("--k-prime", o.k_prime, "first-stage candidate count");
      sub->add_option("--sample-ratio", o.sample_ratio, "h-indexer sample ratio");
    }
    if (name == "query") sub->add_option("--user", o.user, "user id");
    if (name == "serve") sub->add_option("--port", o.port, "TCP port");
    subs.emplace_back(sub, &e);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? molr::kExitOk : molr::kExitUsage;
  }

  try {
    molr::RunConfig config = molr::LoadRunConfig(o.config);
    if (o.seed) config.seed = *o.seed;
    if (o.k) config.k = *o.k;
    if (o.k_prime) config.hindexer.k_prime = *o.k_prime;
    if (o.sample_ratio) config.hindexer.sample_ratio = *o.sample_ratio;
    if (o.port) config.port = *o.port;
    if (o.user) config.user = *o.user;
    config.Validate();
    for (const auto& [sub, entry] : subs) {
      if (sub->parsed()) {
        entry->fn(config, std::cout);
        break;
      }
    }
  } catch (const molr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return molr::ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return molr::kExitInternal;
  }
  return molr::kExitOk;
}
