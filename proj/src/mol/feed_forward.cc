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
#include "molr/mol/feed_forward.h"

#include <cmath>

#include <Eigen/Core>

#include "molr/core/error.h"
#include "molr/core/ops.h"

namespace molr {

template <typename T>
FeedForward<T> FeedForward<T>::Zeros(size_t in, size_t hidden, size_t out) {
  return {BasicMatrix<T>(in, hidden), std::vector<T>(hidden, T{0}),
          BasicMatrix<T>(hidden, out)};
}

template <typename T>
FeedForward<T> FeedForward<T>::Random(size_t in, size_t hidden, size_t out,
                                      Rng& rng) {
  FeedForward ff = Zeros(in, hidden, out);
  const double a1 = 1.0 / std::sqrt(static_cast<double>(in));
  for (auto& w : ff.w1.values()) w = static_cast<T>(rng.Uniform(-a1, a1));
  for (auto& b : ff.b1) b = static_cast<T>(rng.Uniform(-a1, a1));
  const double a2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (auto& w : ff.w2.values()) w = static_cast<T>(rng.Uniform(-a2, a2));
  return ff;
}

template <typename T>
void FeedForward<T>::Forward(std::span<const T> x, std::span<T> hidden_pre,
                             std::span<T> y) const {
  const size_t in = in_dim(), hidden = hidden_dim(), out = out_dim();
  if (x.size() != in || hidden_pre.size() < hidden || y.size() != out) {
    throw Error(ErrorCode::kDimensionMismatch, "FeedForward::Forward shapes");
  }
  for (size_t j = 0; j < hidden; ++j) hidden_pre[j] = b1[j];
  for (size_t i = 0; i < in; ++i) {
    const T xi = x[i];
    if (xi == T{0}) continue;
    const T* w = w1.data() + i * hidden;
    for (size_t j = 0; j < hidden; ++j) hidden_pre[j] += xi * w[j];
  }
  for (size_t o = 0; o < out; ++o) y[o] = T{0};
  for (size_t j = 0; j < hidden; ++j) {
    const T h = Silu(hidden_pre[j]);
    const T* w = w2.data() + j * out;
    for (size_t o = 0; o < out; ++o) y[o] += h * w[o];
  }
}

template <typename T>
std::vector<T> FeedForward<T>::Forward(std::span<const T> x) const {
  std::vector<T> hidden(hidden_dim());
  std::vector<T> y(out_dim());
  Forward(x, hidden, y);
  return y;
}

template <typename T>
void FeedForward<T>::Backward(std::span<const T> x,
                              std::span<const T> hidden_pre,
                              std::span<const T> dy, FeedForward& grad,
                              std::span<T> dx, std::span<T> scratch) const {
  const size_t in = in_dim(), hidden = hidden_dim(), out = out_dim();
  if (scratch.size() < hidden) {
    throw Error(ErrorCode::kDimensionMismatch, "FeedForward scratch too small");
  }
  using Vec = Eigen::Matrix<T, 1, Eigen::Dynamic>;
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const Vec> xv(x.data(), in);
  const Eigen::Map<const Vec> dyv(dy.data(), out);
  const Eigen::Map<const Mat> w1m(w1.data(), in, hidden);
  const Eigen::Map<const Mat> w2m(w2.data(), hidden, out);
  Eigen::Map<Vec> dpre(scratch.data(), hidden);
  Vec h(hidden);
  for (size_t j = 0; j < hidden; ++j) h[j] = Silu(hidden_pre[j]);
  Eigen::Map<Mat>(grad.w2.data(), hidden, out).noalias() += h.transpose() * dyv;
  dpre.noalias() = dyv * w2m.transpose();
  for (size_t j = 0; j < hidden; ++j) {
    dpre[j] *= SiluGrad(hidden_pre[j]);
    grad.b1[j] += dpre[j];
  }
  Eigen::Map<Mat>(grad.w1.data(), in, hidden).noalias() += xv.transpose() * dpre;
  if (!dx.empty()) Eigen::Map<Vec>(dx.data(), in).noalias() += dpre * w1m.transpose();
}

template struct FeedForward<float>;
template struct FeedForward<double>;

}  // namespace molr
