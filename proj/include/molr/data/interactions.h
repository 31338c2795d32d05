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
#ifndef MOLR_DATA_INTERACTIONS_H_
#define MOLR_DATA_INTERACTIONS_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "molr/eval/metrics.h"
#include "molr/train/batch.h"

namespace molr {

struct Interaction {
  uint32_t user = 0;
  uint32_t item = 0;
  int64_t timestamp = 0;
};

struct InteractionSet {
  // In source file order.
  std::vector<Interaction> interactions;
  size_t n_users = 0;
  size_t n_items = 0;
  // Raw id of every dense id.
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;

  std::vector<double> ItemFrequency() const;
  std::vector<size_t> UserCounts() const;
};

struct IngestOptions {
  std::string delimiter = ",";  // "," or "::"
  size_t min_count = 5;
};

// Lines are user<d>item<d>rating<d>timestamp (rating ignored; blank lines
// skipped). Users and items below min_count are dropped until nothing
// changes, then ids are densified by first appearance.
// Throws ParseError (with the line number), EmptyAfterFilter, Io.
InteractionSet Ingest(const std::filesystem::path& path, const IngestOptions& options = {});
InteractionSet IngestStream(std::istream& in, const IngestOptions& options = {});

// Canonical CSV with dense ids: user,item,rating,timestamp (rating 1).
void ExportCsv(const InteractionSet& set, std::ostream& out);

struct Split {
  std::vector<Interaction> train;
  std::vector<Interaction> valid;
  std::vector<Interaction> test;
};

// Per user, by timestamp with file order breaking ties: the last goes to
// test, the second to last to valid, the rest to train. Throws
// TooFewInteractions naming every user with fewer than 3.
Split SplitLeaveOneOut(const InteractionSet& set);

std::vector<TrainPair> ToTrainPairs(const std::vector<Interaction>& v);
std::vector<EvalPair> ToEvalPairs(const std::vector<Interaction>& v);
std::vector<double> ItemFrequency(const std::vector<Interaction>& v, size_t n_items);

}  // namespace molr

#endif  // MOLR_DATA_INTERACTIONS_H_
