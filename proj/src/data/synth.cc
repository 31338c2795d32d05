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
#include "molr/data/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "molr/core/error.h"
#include "molr/core/rng.h"

namespace molr {

void SyntheticSpec::Validate() const {
  if (n_users == 0 || n_items == 0) throw Error(ErrorCode::kConfig, "empty synthetic corpus");
  if (true_rank == 0 || true_rank > std::min(n_users, n_items)) {
    throw Error(ErrorCode::kConfig, "true_rank must be in [1, min(n_users, n_items)]");
  }
  if (interactions_per_user > n_items) {
    throw Error(ErrorCode::kConfig, "interactions_per_user exceeds n_items");
  }
}

SyntheticData Synthesize(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  BasicMatrix<double> a(spec.n_users, spec.true_rank);
  BasicMatrix<double> b(spec.n_items, spec.true_rank);
  for (double& v : a.values()) v = rng.Normal();
  for (double& v : b.values()) v = rng.Normal();
  SyntheticData out;
  out.scores = MatMulTransposed(a, b);

  auto& set = out.set;
  set.n_users = spec.n_users;
  set.n_items = spec.n_items;
  for (size_t u = 0; u < spec.n_users; ++u) set.user_ids.push_back(std::to_string(u));
  for (size_t i = 0; i < spec.n_items; ++i) set.item_ids.push_back(std::to_string(i));

  const size_t m = spec.interactions_per_user;
  std::vector<double> keys(spec.n_items);
  std::vector<uint32_t> order(spec.n_items);
  std::vector<int64_t> stamps(m);
  for (size_t u = 0; u < spec.n_users; ++u) {
    // Gumbel top-m is a without-replacement draw from softmax(S_u).
    const auto row = out.scores.row(u);
    for (size_t i = 0; i < spec.n_items; ++i) {
      double uni = rng.Uniform();
      while (uni <= 0.0) uni = rng.Uniform();
      keys[i] = row[i] - std::log(-std::log(uni));
    }
    std::iota(order.begin(), order.end(), 0u);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m),
                      order.end(), [&](uint32_t x, uint32_t y) {
                        return keys[x] > keys[y] || (keys[x] == keys[y] && x < y);
                      });
    std::iota(stamps.begin(), stamps.end(), int64_t{0});
    Shuffle(std::span<int64_t>(stamps), rng);
    for (size_t j = 0; j < m; ++j) {
      set.interactions.push_back({static_cast<uint32_t>(u), order[j], stamps[j]});
    }
  }
  return out;
}

}  // namespace molr
