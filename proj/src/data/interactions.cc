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
#include "molr/data/interactions.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "molr/core/error.h"

namespace molr {
namespace {

struct RawRecord {
  std::string user;
  std::string item;
  int64_t timestamp;
};

std::string_view Trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> SplitFields(std::string_view line, std::string_view delim) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    const size_t next = line.find(delim, pos);
    if (next == std::string_view::npos) {
      out.push_back(Trim(line.substr(pos)));
      break;
    }
    out.push_back(Trim(line.substr(pos, next - pos)));
    pos = next + delim.size();
  }
  return out;
}

[[noreturn]] void ParseFail(size_t line_no, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<double> InteractionSet::ItemFrequency() const {
  return molr::ItemFrequency(interactions, n_items);
}

std::vector<size_t> InteractionSet::UserCounts() const {
  std::vector<size_t> c(n_users, 0);
  for (const auto& it : interactions) ++c[it.user];
  return c;
}

InteractionSet IngestStream(std::istream& in, const IngestOptions& options) {
  if (options.delimiter != "," && options.delimiter != "::") {
    throw Error(ErrorCode::kConfig, "unsupported delimiter '" + options.delimiter + "'");
  }
  std::vector<RawRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = SplitFields(line, options.delimiter);
    if (f.size() != 4) {
      ParseFail(line_no, "expected 4 fields, got " + std::to_string(f.size()));
    }
    if (f[0].empty() || f[1].empty()) ParseFail(line_no, "empty id");
    int64_t ts = 0;
    const auto r = std::from_chars(f[3].data(), f[3].data() + f[3].size(), ts);
    if (r.ec != std::errc() || r.ptr != f[3].data() + f[3].size()) {
      ParseFail(line_no, "bad timestamp '" + std::string(f[3]) + "'");
    }
    records.push_back({std::string(f[0]), std::string(f[1]), ts});
  }

  std::vector<bool> alive(records.size(), true);
  for (bool changed = true; changed;) {
    changed = false;
    std::unordered_map<std::string, size_t> uc, ic;
    for (size_t i = 0; i < records.size(); ++i) {
      if (!alive[i]) continue;
      ++uc[records[i].user];
      ++ic[records[i].item];
    }
    for (size_t i = 0; i < records.size(); ++i) {
      if (alive[i] && (uc[records[i].user] < options.min_count ||
                       ic[records[i].item] < options.min_count)) {
        alive[i] = false;
        changed = true;
      }
    }
  }

  InteractionSet set;
  std::unordered_map<std::string, uint32_t> umap, imap;
  for (size_t i = 0; i < records.size(); ++i) {
    if (!alive[i]) continue;
    const auto& r = records[i];
    auto [uit, unew] = umap.try_emplace(r.user, static_cast<uint32_t>(set.user_ids.size()));
    if (unew) set.user_ids.push_back(r.user);
    auto [iit, inew] = imap.try_emplace(r.item, static_cast<uint32_t>(set.item_ids.size()));
    if (inew) set.item_ids.push_back(r.item);
    set.interactions.push_back({uit->second, iit->second, r.timestamp});
  }
  if (set.interactions.empty()) {
    throw Error(ErrorCode::kEmptyAfterFilter,
                "no interactions left with min_count=" + std::to_string(options.min_count));
  }
  set.n_users = set.user_ids.size();
  set.n_items = set.item_ids.size();
  return set;
}

InteractionSet Ingest(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return IngestStream(in, options);
}

void ExportCsv(const InteractionSet& set, std::ostream& out) {
  for (const auto& it : set.interactions) {
    out << it.user << ',' << it.item << ",1," << it.timestamp << '\n';
  }
}

Split SplitLeaveOneOut(const InteractionSet& set) {
  std::vector<std::vector<size_t>> per_user(set.n_users);
  for (size_t i = 0; i < set.interactions.size(); ++i) {
    per_user[set.interactions[i].user].push_back(i);
  }
  std::string short_users;
  size_t n_short = 0;
  for (size_t u = 0; u < per_user.size(); ++u) {
    if (per_user[u].size() < 3) {
      if (n_short++ > 0) short_users += ",";
      short_users += set.user_ids.empty() ? std::to_string(u) : set.user_ids[u];
    }
  }
  if (n_short > 0) {
    throw Error(ErrorCode::kTooFewInteractions,
                "users with fewer than 3 interactions: " + short_users);
  }
  Split s;
  for (auto& idx : per_user) {
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return set.interactions[a].timestamp < set.interactions[b].timestamp;
    });
    const size_t n = idx.size();
    for (size_t j = 0; j + 2 < n; ++j) s.train.push_back(set.interactions[idx[j]]);
    s.valid.push_back(set.interactions[idx[n - 2]]);
    s.test.push_back(set.interactions[idx[n - 1]]);
  }
  return s;
}

std::vector<TrainPair> ToTrainPairs(const std::vector<Interaction>& v) {
  std::vector<TrainPair> out;
  out.reserve(v.size());
  for (const auto& it : v) out.push_back({it.user, it.item});
  return out;
}

std::vector<EvalPair> ToEvalPairs(const std::vector<Interaction>& v) {
  std::vector<EvalPair> out;
  out.reserve(v.size());
  for (const auto& it : v) out.push_back({it.user, it.item});
  return out;
}

std::vector<double> ItemFrequency(const std::vector<Interaction>& v, size_t n_items) {
  std::vector<double> f(n_items, 0.0);
  for (const auto& it : v) {
    if (it.item < n_items) f[it.item] += 1.0;
  }
  return f;
}

}  // namespace molr
