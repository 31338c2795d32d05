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
#ifndef MOLR_CLI_RUN_CONFIG_H_
#define MOLR_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "molr/data/synth.h"
#include "molr/eval/cost.h"
#include "molr/hindexer/hindexer.h"
#include "molr/train/config.h"
#include "molr/train/fit.h"

namespace molr {

struct RunConfig {
  // Paths.
  std::filesystem::path input;       // raw interactions for ingest
  std::filesystem::path dataset;     // canonical dense-id CSV
  std::filesystem::path checkpoint;
  std::filesystem::path cache;
  std::filesystem::path report;      // optional CSV report for eval
  std::filesystem::path bench_csv;   // optional; stdout when empty

  // Ingest.
  std::string delimiter = ",";
  size_t min_count = 5;
  bool synthetic = false;
  SyntheticSpec synth;

  ModelSpec model;
  TrainConfig train;
  HIndexerConfig hindexer;

  uint64_t seed = 0;
  uint32_t user = 0;
  size_t k = 10;
  int port = 7070;

  std::vector<size_t> eval_ks = {1, 10, 50, 100};
  size_t popularity_buckets = 10;
  std::vector<size_t> bench_k_primes = {100, 1000, 10000};
  size_t bench_queries = 100;
  size_t rank_users = 200;
  size_t rank_items = 300;
  double rank_tol = 1e-6;

  CostQuery cost{2048, 4096, 1024, 768, 128, 128, 256, 128, FlopConvention::kMac};
  InferenceCostConfig inference_cost;
  size_t cost_k_prime = 1;

  // Checks every section; paths are checked by the commands that use them.
  void Validate() const;
};

// Parses "key = value" lines; '#' starts a comment. Unknown keys, bad
// values and duplicates throw Config naming the line.
RunConfig ParseRunConfig(std::istream& in);
RunConfig LoadRunConfig(const std::filesystem::path& path);

}  // namespace molr

#endif  // MOLR_CLI_RUN_CONFIG_H_
