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
#include "molr/train/grad_check.h"

#include <algorithm>
#include <cmath>

#include "molr/core/rng.h"
#include "molr/train/backward.h"

namespace molr {

GradCheckResult GradCheck(std::span<const CheckedTensor> tensors,
                          const std::function<double()>& loss,
                          const GradCheckOptions& options) {
  GradCheckResult result;
  Rng rng(options.seed);
  for (const auto& t : tensors) {
    const size_t n = t.values.size();
    std::vector<uint32_t> coords;
    if (n <= options.coords_per_tensor) {
      coords.resize(n);
      for (size_t i = 0; i < n; ++i) coords[i] = static_cast<uint32_t>(i);
    } else {
      std::vector<uint32_t> nonzero;
      for (size_t i = 0; i < n; ++i) {
        if (t.analytic[i] != 0.0) nonzero.push_back(static_cast<uint32_t>(i));
      }
      const size_t want_nz = std::min(nonzero.size(), options.coords_per_tensor / 2);
      const auto pick = PermutationPrefix(static_cast<uint32_t>(nonzero.size()),
                                          static_cast<uint32_t>(want_nz), rng);
      for (const uint32_t p : pick) coords.push_back(nonzero[p]);
      const auto rest = PermutationPrefix(
          static_cast<uint32_t>(n),
          static_cast<uint32_t>(options.coords_per_tensor - coords.size()), rng);
      coords.insert(coords.end(), rest.begin(), rest.end());
    }
    for (const uint32_t i : coords) {
      const double saved = t.values[i];
      t.values[i] = saved + options.step;
      const double up = loss();
      t.values[i] = saved - options.step;
      const double down = loss();
      t.values[i] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = t.analytic[i];
      const double denom = std::max({std::fabs(a), std::fabs(numeric), options.floor});
      const double rel = std::fabs(a - numeric) / denom;
      ++result.coords_checked;
      if (result.worst_tensor.empty() || rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst_tensor = t.name;
        result.worst_index = i;
      }
    }
  }
  return result;
}

TowerParams<double> MolAnalyticGrad(const TowerParams<double>& params,
                                    const TrainBatch<double>& batch) {
  TowerParams<double> grads = TowerParams<double>::ZerosLike(params);
  BatchForwardBackward(params, batch, &grads);
  return grads;
}

GradCheckResult GradCheckMol(TowerParams<double> params,
                             const TrainBatch<double>& batch,
                             const GradCheckOptions& options,
                             const std::string& scaled_tensor, double scale) {
  TowerParams<double> grads = MolAnalyticGrad(params, batch);
  std::vector<CheckedTensor> tensors;
  ForEachTensor(params, [&](const std::string& name, std::span<double> v, size_t,
                            size_t) { tensors.push_back({name, v, {}}); });
  size_t idx = 0;
  ForEachTensor(grads, [&](const std::string& name, std::span<double> g, size_t,
                           size_t) {
    if (name == scaled_tensor) {
      for (double& x : g) x *= scale;
    }
    tensors[idx++].analytic = g;
  });
  auto loss = [&]() {
    return static_cast<double>(BatchForwardBackward<double>(params, batch, nullptr));
  };
  return GradCheck(tensors, loss, options);
}

}  // namespace molr
