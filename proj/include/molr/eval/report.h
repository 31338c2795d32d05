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
#ifndef MOLR_EVAL_REPORT_H_
#define MOLR_EVAL_REPORT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace molr {

struct RankAnalysis {
  size_t numeric_rank = 0;
  std::vector<double> explained_variance;  // index i -> top (i + 1) directions
};

struct EvalReport {
  std::map<size_t, double> hr;
  double mrr = 0.0;
  std::optional<RankAnalysis> rank_analysis;
  std::vector<double> popularity_hist;
  // Named cost estimates, e.g. gating_flops_mac.
  std::map<std::string, double> cost;

  // Flat "key = value" lines.
  std::string ToText() const;
  // "metric,value" header then one row per metric.
  std::string ToCsv() const;
};

}  // namespace molr

#endif  // MOLR_EVAL_REPORT_H_
