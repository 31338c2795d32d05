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
#ifndef MOLR_MOL_FEED_FORWARD_H_
#define MOLR_MOL_FEED_FORWARD_H_

#include <span>
#include <string>
#include <vector>

#include "molr/core/matrix.h"
#include "molr/core/rng.h"

namespace molr {

// Two-layer network y = SiLU(x W1 + b1) W2. The output layer has no bias.
template <typename T>
struct FeedForward {
  BasicMatrix<T> w1;  // in x hidden
  std::vector<T> b1;  // hidden
  BasicMatrix<T> w2;  // hidden x out

  static FeedForward Zeros(size_t in, size_t hidden, size_t out);
  // Weights and biases ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
  static FeedForward Random(size_t in, size_t hidden, size_t out, Rng& rng);

  size_t in_dim() const noexcept { return w1.rows(); }
  size_t hidden_dim() const noexcept { return w1.cols(); }
  size_t out_dim() const noexcept { return w2.cols(); }

  // hidden_pre receives x W1 + b1 (needed by Backward).
  void Forward(std::span<const T> x, std::span<T> hidden_pre,
               std::span<T> y) const;
  std::vector<T> Forward(std::span<const T> x) const;

  // Accumulates parameter gradients into `grad`; adds dL/dx into dx unless
  // dx is empty. scratch must hold at least hidden_dim() values.
  void Backward(std::span<const T> x, std::span<const T> hidden_pre,
                std::span<const T> dy, FeedForward& grad, std::span<T> dx,
                std::span<T> scratch) const;

  template <typename U>
  FeedForward<U> Cast() const {
    return {w1.template cast<U>(), std::vector<U>(b1.begin(), b1.end()),
            w2.template cast<U>()};
  }

  bool operator==(const FeedForward&) const = default;
};

template <typename T, typename F>
void ForEachTensor(FeedForward<T>& ff, const std::string& prefix, F&& f) {
  f(prefix + ".w1", ff.w1.values(), ff.w1.rows(), ff.w1.cols());
  f(prefix + ".b1", std::span<T>(ff.b1), size_t{1}, ff.b1.size());
  f(prefix + ".w2", ff.w2.values(), ff.w2.rows(), ff.w2.cols());
}

// Decomposed gating: user-side, item-side and cross (logit-conditioned)
// networks, each emitting k_u * k_x pre-activations.
template <typename T>
struct GatingNetwork {
  FeedForward<T> user_net;   // D^U -> K -> k_u k_x
  FeedForward<T> item_net;   // D^X -> K -> k_u k_x
  FeedForward<T> cross_net;  // k_u k_x -> K -> k_u k_x

  template <typename U>
  GatingNetwork<U> Cast() const {
    return {user_net.template Cast<U>(), item_net.template Cast<U>(),
            cross_net.template Cast<U>()};
  }

  bool operator==(const GatingNetwork&) const = default;
};

template <typename T, typename F>
void ForEachTensor(GatingNetwork<T>& g, const std::string& prefix, F&& f) {
  ForEachTensor(g.user_net, prefix + ".user_net", f);
  ForEachTensor(g.item_net, prefix + ".item_net", f);
  ForEachTensor(g.cross_net, prefix + ".cross_net", f);
}

}  // namespace molr

#endif  // MOLR_MOL_FEED_FORWARD_H_
