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
#ifndef MOLR_TRAIN_GRAD_CHECK_H_
#define MOLR_TRAIN_GRAD_CHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "molr/model/towers.h"
#include "molr/train/batch.h"

namespace molr {

struct GradCheckOptions {
  double step = 1e-4;
  size_t coords_per_tensor = 20;
  // Denominator floor of the relative error.
  double floor = 1e-6;
  uint64_t seed = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_tensor;
  size_t worst_index = 0;
  size_t coords_checked = 0;
};

struct CheckedTensor {
  std::string name;
  std::span<double> values;
  std::span<const double> analytic;
};

// relative error = |a - n| / max(|a|, |n|, floor) with n the central
// difference. Each tensor is sampled at coords_per_tensor coordinates, half
// of them (when available) among entries with a nonzero analytic gradient;
// tensors smaller than that are checked in full.
GradCheckResult GradCheck(std::span<const CheckedTensor> tensors,
                          const std::function<double()>& loss,
                          const GradCheckOptions& options = {});

// Analytic gradient of the mean batch loss, in double precision.
TowerParams<double> MolAnalyticGrad(const TowerParams<double>& params,
                                    const TrainBatch<double>& batch);

// Checks every MoL tower tensor against finite differences. extra_scale
// multiplies the analytic gradient of the named tensor (fault injection).
GradCheckResult GradCheckMol(TowerParams<double> params,
                             const TrainBatch<double>& batch,
                             const GradCheckOptions& options = {},
                             const std::string& scaled_tensor = "",
                             double scale = 1.0);

}  // namespace molr

#endif  // MOLR_TRAIN_GRAD_CHECK_H_
