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
#ifndef MOLR_TRAIN_BACKWARD_H_
#define MOLR_TRAIN_BACKWARD_H_

#include <cstddef>

#include "molr/model/dot_baseline.h"
#include "molr/model/towers.h"
#include "molr/train/batch.h"

namespace molr {

struct ForwardCounters {
  size_t item_forward_calls = 0;
  size_t user_forward_calls = 0;
};

// Mean sampled-softmax loss of the batch under the MoL head. When grads is
// non-null it must be shaped like params (see TowerParams::ZerosLike) and
// receives the exact gradient of the mean loss (accumulated, not
// overwritten). With mean=false the loss and gradient are summed instead
// of averaged over the batch.
template <typename T>
T BatchForwardBackward(const TowerParams<T>& params, const TrainBatch<T>& batch,
                       TowerParams<T>* grads, ForwardCounters* counters = nullptr,
                       bool mean = true);

template <typename T>
T BatchForwardBackward(const DotBaselineParams<T>& params,
                       const TrainBatch<T>& batch, DotBaselineParams<T>* grads,
                       bool mean = true);

}  // namespace molr

#endif  // MOLR_TRAIN_BACKWARD_H_
