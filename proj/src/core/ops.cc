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
#include "molr/core/ops.h"

#include <algorithm>
#include <limits>

#include "molr/core/error.h"

namespace molr {

template <typename T>
T L2NormalizeInPlace(std::span<T> v, double eps) {
  if (v.empty()) throw Error(ErrorCode::kDimensionMismatch, "empty vector");
  const T norm = Norm<T>(v);
  if (!(static_cast<double>(norm) > eps)) {
    throw Error(ErrorCode::kZeroNorm, "vector norm below epsilon");
  }
  const T inv = T{1} / norm;
  for (auto& x : v) x *= inv;
  return norm;
}

template <typename T>
void SoftmaxInPlace(std::span<T> v) {
  if (v.empty()) return;
  const T mx = *std::max_element(v.begin(), v.end());
  T sum{0};
  for (auto& x : v) {
    x = std::exp(x - mx);
    sum += x;
  }
  const T inv = T{1} / sum;
  for (auto& x : v) x *= inv;
}

template <typename T>
T LogSumExp(std::span<const T> v) {
  if (v.empty()) return -std::numeric_limits<T>::infinity();
  const T mx = *std::max_element(v.begin(), v.end());
  T sum{0};
  for (const T x : v) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

template float L2NormalizeInPlace<float>(std::span<float>, double);
template double L2NormalizeInPlace<double>(std::span<double>, double);
template void SoftmaxInPlace<float>(std::span<float>);
template void SoftmaxInPlace<double>(std::span<double>);
template float LogSumExp<float>(std::span<const float>);
template double LogSumExp<double>(std::span<const double>);

}  // namespace molr
