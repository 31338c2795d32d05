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
#ifndef MOLR_TRAIN_ADAM_H_
#define MOLR_TRAIN_ADAM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "molr/train/config.h"

namespace molr {

template <typename T>
struct AdamState {
  int64_t step = 0;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;
};

// Bias-corrected Adam over a list of tensors. grads[i] must match params[i]
// in length (ShapeMismatch otherwise); moments are created on first use.
template <typename T>
void AdamStep(std::span<const std::span<T>> params,
              std::span<const std::span<const T>> grads, AdamState<T>& state,
              const TrainConfig& config);

// Collects every tensor of a parameter structure (TowerParams,
// DotBaselineParams) as spans, in ForEachTensor order.
template <typename T, typename P>
std::vector<std::span<T>> TensorSpans(P& params) {
  std::vector<std::span<T>> out;
  ForEachTensor(params, [&out](const std::string&, std::span<T> v, size_t, size_t) {
    out.push_back(v);
  });
  return out;
}

template <typename T, typename P>
void AdamStep(P& params, P& grads, AdamState<T>& state, const TrainConfig& config) {
  const auto p = TensorSpans<T>(params);
  const auto g_mut = TensorSpans<T>(grads);
  const std::vector<std::span<const T>> g(g_mut.begin(), g_mut.end());
  AdamStep<T>(std::span<const std::span<T>>(p), std::span<const std::span<const T>>(g),
              state, config);
}

}  // namespace molr

#endif  // MOLR_TRAIN_ADAM_H_
