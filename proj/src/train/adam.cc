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
#include "molr/train/adam.h"

#include <cmath>

#include "molr/core/error.h"
#include "molr/core/fpenv.h"

namespace molr {

void TrainConfig::Validate() const {
  if (batch_size < 1) throw Error(ErrorCode::kConfig, "batch_size must be >= 1");
  if (num_negatives < 1) throw Error(ErrorCode::kConfig, "num_negatives must be >= 1");
  if (!(lr > 0.0)) throw Error(ErrorCode::kConfig, "lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw Error(ErrorCode::kConfig, "adam betas must lie in [0, 1)");
  }
}

template <typename T>
void AdamStep(std::span<const std::span<T>> params,
              std::span<const std::span<const T>> grads, AdamState<T>& state,
              const TrainConfig& config) {
  if (params.size() != grads.size()) {
    throw Error(ErrorCode::kShapeMismatch, "tensor count differs");
  }
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.size(), T{0});
      state.v.emplace_back(p.size(), T{0});
    }
  }
  if (state.m.size() != params.size()) {
    throw Error(ErrorCode::kShapeMismatch, "optimizer state tensor count");
  }
  for (size_t t = 0; t < params.size(); ++t) {
    if (grads[t].size() != params[t].size() || state.m[t].size() != params[t].size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "tensor " + std::to_string(t) + " size mismatch");
    }
  }
  const ScopedFlushDenormals flush;
  ++state.step;
  const double b1 = config.beta1, b2 = config.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  const T step_size = static_cast<T>(config.lr / c1);
  const T inv_c2 = static_cast<T>(1.0 / c2);
  const T eps = static_cast<T>(config.eps);
  const T tb1 = static_cast<T>(b1), tb2 = static_cast<T>(b2);
  for (size_t t = 0; t < params.size(); ++t) {
    auto p = params[t];
    const auto g = grads[t];
    auto& m = state.m[t];
    auto& v = state.v[t];
    for (size_t i = 0; i < p.size(); ++i) {
      m[i] = tb1 * m[i] + (T{1} - tb1) * g[i];
      v[i] = tb2 * v[i] + (T{1} - tb2) * g[i] * g[i];
      p[i] -= step_size * m[i] / (std::sqrt(v[i] * inv_c2) + eps);
    }
  }
}

template void AdamStep<float>(std::span<const std::span<float>>,
                              std::span<const std::span<const float>>,
                              AdamState<float>&, const TrainConfig&);
template void AdamStep<double>(std::span<const std::span<double>>,
                               std::span<const std::span<const double>>,
                               AdamState<double>&, const TrainConfig&);

}  // namespace molr
