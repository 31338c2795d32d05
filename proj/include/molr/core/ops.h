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
#ifndef MOLR_CORE_OPS_H_
#define MOLR_CORE_OPS_H_

#include <cmath>
#include <span>
#include <vector>

namespace molr {

inline constexpr double kDefaultNormEps = 1e-12;

template <typename T>
T Dot(std::span<const T> a, std::span<const T> b) {
  T acc{0};
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
T Norm(std::span<const T> v) {
  return std::sqrt(Dot(v, v));
}

// Scales v to unit length in place and returns the original norm. Throws
// ZeroNorm when the norm is <= eps.
template <typename T>
T L2NormalizeInPlace(std::span<T> v, double eps = kDefaultNormEps);

template <typename T>
std::vector<T> L2Normalize(std::span<const T> v, double eps = kDefaultNormEps) {
  std::vector<T> out(v.begin(), v.end());
  L2NormalizeInPlace<T>(out, eps);
  return out;
}

// Max-shifted softmax.
template <typename T>
void SoftmaxInPlace(std::span<T> v);

template <typename T>
std::vector<T> Softmax(std::span<const T> v) {
  std::vector<T> out(v.begin(), v.end());
  SoftmaxInPlace<T>(out);
  return out;
}

// log(sum(exp(v))) with max shift.
template <typename T>
T LogSumExp(std::span<const T> v);

template <typename T>
inline T Sigmoid(T x) {
  if (x >= T{0}) return T{1} / (T{1} + std::exp(-x));
  const T e = std::exp(x);
  return e / (T{1} + e);
}

template <typename T>
inline T Silu(T x) {
  return x * Sigmoid(x);
}

template <typename T>
inline T SiluGrad(T x) {
  const T s = Sigmoid(x);
  return s * (T{1} + x * (T{1} - s));
}

}  // namespace molr

#endif  // MOLR_CORE_OPS_H_
