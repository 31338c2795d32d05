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
#include "molr/eval/report.h"

#include <iomanip>
#include <sstream>
#include <utility>

namespace molr {
namespace {

std::vector<std::pair<std::string, double>> Flatten(const EvalReport& r) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [k, v] : r.hr) out.emplace_back("hr@" + std::to_string(k), v);
  out.emplace_back("mrr", r.mrr);
  if (r.rank_analysis) {
    out.emplace_back("numeric_rank", static_cast<double>(r.rank_analysis->numeric_rank));
    const auto& ev = r.rank_analysis->explained_variance;
    for (size_t i = 0; i < ev.size(); ++i) {
      out.emplace_back("explained_variance@" + std::to_string(i + 1), ev[i]);
    }
  }
  for (size_t b = 0; b < r.popularity_hist.size(); ++b) {
    out.emplace_back("popularity_bucket_" + std::to_string(b), r.popularity_hist[b]);
  }
  for (const auto& [k, v] : r.cost) out.emplace_back(k, v);
  return out;
}

}  // namespace

std::string EvalReport::ToText() const {
  std::ostringstream os;
  os << std::setprecision(10);
  for (const auto& [k, v] : Flatten(*this)) os << k << " = " << v << '\n';
  return os.str();
}

std::string EvalReport::ToCsv() const {
  std::ostringstream os;
  os << std::setprecision(10) << "metric,value\n";
  for (const auto& [k, v] : Flatten(*this)) os << k << ',' << v << '\n';
  return os.str();
}

}  // namespace molr
