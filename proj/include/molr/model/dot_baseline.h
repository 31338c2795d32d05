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
#ifndef MOLR_MODEL_DOT_BASELINE_H_
#define MOLR_MODEL_DOT_BASELINE_H_

#include <cstdint>
#include <string>

#include "molr/core/matrix.h"
#include "molr/core/rng.h"

namespace molr {

// Two-tower dot product baseline: score = <user, item> / temperature.
template <typename T>
struct DotBaselineParams {
  BasicMatrix<T> user_table;
  BasicMatrix<T> item_table;
  double temperature = 1.0;

  size_t dim() const noexcept { return user_table.cols(); }

  static DotBaselineParams ZerosLike(const DotBaselineParams& p) {
    return {BasicMatrix<T>(p.user_table.rows(), p.user_table.cols()),
            BasicMatrix<T>(p.item_table.rows(), p.item_table.cols()),
            p.temperature};
  }

  template <typename U>
  DotBaselineParams<U> Cast() const {
    return {user_table.template cast<U>(), item_table.template cast<U>(),
            temperature};
  }

  bool operator==(const DotBaselineParams&) const = default;
};

template <typename T, typename F>
void ForEachTensor(DotBaselineParams<T>& p, F&& f) {
  f(std::string("user_table"), p.user_table.values(), p.user_table.rows(),
    p.user_table.cols());
  f(std::string("item_table"), p.item_table.values(), p.item_table.rows(),
    p.item_table.cols());
}

template <typename T>
DotBaselineParams<T> InitDotBaseline(size_t n_users, size_t n_items,
                                     size_t dim, double temperature, Rng& rng);

template <typename T>
T DotScore(const DotBaselineParams<T>& p, uint32_t user, uint32_t item);

// n_users x n_items score matrix.
template <typename T>
BasicMatrix<T> DotScoreMatrix(const DotBaselineParams<T>& p);

}  // namespace molr

#endif  // MOLR_MODEL_DOT_BASELINE_H_
