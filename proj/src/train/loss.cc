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
#include "molr/train/loss.h"

#include <algorithm>
#include <cmath>

#include "molr/core/error.h"
#include "molr/core/ops.h"

namespace molr {

template <typename T>
T SampledSoftmaxLoss(T pos_logit, std::span<const T> neg_logits) {
  std::vector<T> logits;
  logits.reserve(neg_logits.size() + 1);
  logits.push_back(pos_logit);
  logits.insert(logits.end(), neg_logits.begin(), neg_logits.end());
  return LogSumExp<T>(logits) - pos_logit;
}

template <typename T>
T SampledSoftmaxLossWithGrad(std::span<const T> logits,
                             std::span<const T> log_q, std::span<T> grad) {
  if (logits.empty()) throw Error(ErrorCode::kEmptyInput, "no logits");
  if (!log_q.empty() && log_q.size() != logits.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "log q length mismatch");
  }
  std::vector<T> adjusted(logits.begin(), logits.end());
  if (!log_q.empty()) {
    for (size_t i = 0; i < adjusted.size(); ++i) adjusted[i] -= log_q[i];
  }
  const T lse = LogSumExp<T>(adjusted);
  if (!grad.empty()) {
    for (size_t i = 0; i < adjusted.size(); ++i) {
      grad[i] = std::exp(adjusted[i] - lse);
    }
    grad[0] -= T{1};
  }
  return lse - adjusted[0];
}

template float SampledSoftmaxLoss<float>(float, std::span<const float>);
template double SampledSoftmaxLoss<double>(double, std::span<const double>);
template float SampledSoftmaxLossWithGrad<float>(std::span<const float>,
                                                 std::span<const float>,
                                                 std::span<float>);
template double SampledSoftmaxLossWithGrad<double>(std::span<const double>,
                                                   std::span<const double>,
                                                   std::span<double>);

}  // namespace molr
