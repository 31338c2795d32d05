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
#ifndef MOLR_CLI_COMMANDS_H_
#define MOLR_CLI_COMMANDS_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "molr/cli/run_config.h"
#include "molr/core/error.h"
#include "molr/core/topk.h"
#include "molr/mol/item_cache.h"
#include "molr/model/towers.h"

namespace molr {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitMissingArtifact = 3, kExitInternal = 4 };

int ExitCodeFor(ErrorCode code);

// Two-stage retrieval over immutable artifacts; safe to share across
// threads. Each query seeds its own h-indexer sample from (seed, user).
class Retriever {
 public:
  Retriever(TowerParams<float> params, ItemCache<float> cache,
            HIndexerConfig hindexer, uint64_t seed);

  size_t num_users() const noexcept { return params_.config.n_users; }
  size_t num_items() const noexcept { return cache_.size(); }

  // h-indexer then MoL top-k. When k' covers the corpus, or the first stage
  // returns fewer than k rows, every item is scored.
  std::vector<ScoredItem> Query(uint32_t user, size_t k) const;
  std::vector<ScoredItem> Query(uint32_t user, size_t k, size_t k_prime) const;
  std::vector<ScoredItem> QueryExhaustive(uint32_t user, size_t k) const;

 private:
  TowerParams<float> params_;
  ItemCache<float> cache_;
  HIndexerConfig hindexer_;
  uint64_t seed_;
};

// Loads checkpoint and cache and checks they belong together.
Retriever LoadRetriever(const RunConfig& config);

void CmdIngest(const RunConfig& config, std::ostream& out);
void CmdTrain(const RunConfig& config, std::ostream& out);
void CmdBuildIndex(const RunConfig& config, std::ostream& out);
void CmdQuery(const RunConfig& config, std::ostream& out);
void CmdEval(const RunConfig& config, std::ostream& out);
void CmdBench(const RunConfig& config, std::ostream& out);
void CmdRankAnalysis(const RunConfig& config, std::ostream& out);
void CmdCostEstimate(const RunConfig& config, std::ostream& out);

}  // namespace molr

#endif  // MOLR_CLI_COMMANDS_H_
