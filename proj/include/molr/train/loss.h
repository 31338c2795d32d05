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
#ifndef MOLR_TRAIN_LOSS_H_
#define MOLR_TRAIN_LOSS_H_

#include <span>
#include <vector>

namespace molr {

// -log(e^pos / (e^pos + sum e^neg)) with max-shift stability.
template <typename T>
T SampledSoftmaxLoss(T pos_logit, std::span<const T> neg_logits);

// Same loss over logits = [pos, negs...] after subtracting log q per entry
// (logq may be empty for no correction). Writes dL/dlogit into grad (size
// 1 + negs) when non-empty.
template <typename T>
T SampledSoftmaxLossWithGrad(std::span<const T> logits,
                             std::span<const T> log_q, std::span<T> grad);

}  // namespace molr

#endif  // MOLR_TRAIN_LOSS_H_
