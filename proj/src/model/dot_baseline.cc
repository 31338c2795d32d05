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
#include "molr/model/dot_baseline.h"

#include <cmath>

#include "molr/core/error.h"

namespace molr {

template <typename T>
DotBaselineParams<T> InitDotBaseline(size_t n_users, size_t n_items,
                                     size_t dim, double temperature, Rng& rng) {
  if (n_users == 0 || n_items == 0) {
    throw Error(ErrorCode::kEmptyCorpus, "dot baseline needs users and items");
  }
  if (dim == 0 || !(temperature > 0.0)) {
    throw Error(ErrorCode::kConfig, "dot baseline dim/temperature invalid");
  }
  DotBaselineParams<T> p{BasicMatrix<T>(n_users, dim),
                         BasicMatrix<T>(n_items, dim), temperature};
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  for (auto& v : p.user_table.values()) v = static_cast<T>(rng.Uniform(-a, a));
  for (auto& v : p.item_table.values()) v = static_cast<T>(rng.Uniform(-a, a));
  return p;
}

template <typename T>
T DotScore(const DotBaselineParams<T>& p, uint32_t user, uint32_t item) {
  if (user >= p.user_table.rows() || item >= p.item_table.rows()) {
    throw Error(ErrorCode::kOutOfRange, "dot baseline id out of range");
  }
  const auto u = p.user_table.row(user);
  const auto x = p.item_table.row(item);
  T acc{0};
  for (size_t i = 0; i < u.size(); ++i) acc += u[i] * x[i];
  return acc / static_cast<T>(p.temperature);
}

template <typename T>
BasicMatrix<T> DotScoreMatrix(const DotBaselineParams<T>& p) {
  BasicMatrix<T> out = MatMulTransposed(p.user_table, p.item_table);
  const T t = static_cast<T>(p.temperature);
  for (auto& v : out.values()) v /= t;
  return out;
}

#define MOLR_INSTANTIATE(T)                                                  \
  template DotBaselineParams<T> InitDotBaseline<T>(size_t, size_t, size_t,   \
                                                   double, Rng&);            \
  template T DotScore<T>(const DotBaselineParams<T>&, uint32_t, uint32_t);   \
  template BasicMatrix<T> DotScoreMatrix<T>(const DotBaselineParams<T>&);

MOLR_INSTANTIATE(float)
MOLR_INSTANTIATE(double)
#undef MOLR_INSTANTIATE

}  // namespace molr
