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
#include "molr/eval/cost.h"

#include "molr/core/error.h"

namespace molr {

void CostQuery::Validate() const {
  for (const double v : {B, X, D, DU, DX, DXU, K, L}) {
    if (!(v > 0)) throw Error(ErrorCode::kConfig, "cost query dims must be positive");
  }
}

double GatingFlops(const CostQuery& q, bool decomposed) {
  double f;
  if (decomposed) {
    f = q.B * q.K * (q.DU + q.L) + q.X * q.K * (q.DX + q.L) +
        q.B * q.X * q.K * (q.DXU + q.L);
  } else {
    f = q.B * q.X * q.K * (q.D + q.L);
  }
  return q.convention == FlopConvention::kFma2 ? 2.0 * f : f;
}

double GatingMemory(const CostQuery& q, bool decomposed, double bytes_per) {
  if (!decomposed) return (q.B * q.X * q.D + q.B * q.X * q.K) * bytes_per;
  return (q.B * q.X * q.DXU + q.B * q.X * q.K + q.B * (q.DU + q.K) +
          q.X * (q.DX + q.K)) * bytes_per;
}

double ArithmeticIntensity(double B, double X, double d_prime, double byte_width) {
  return 2.0 * B * X * d_prime / ((B * d_prime + X * d_prime + B * X) * byte_width);
}

InferenceCost MolInferenceFlops(const InferenceCostConfig& c, double k_prime) {
  const double ku = static_cast<double>(c.k_u);
  const double kx = static_cast<double>(c.k_x);
  const double d = static_cast<double>(c.d);
  const double h = static_cast<double>(c.gating_hidden);
  const double du = static_cast<double>(c.user_feature_dim);
  const double ph = static_cast<double>(c.proj_hidden);
  const double g = ku * kx;
  InferenceCost out;
  out.terms = {
      {"user_emb_proj", du * ph + ph * ku * d, false, false},
      {"user_weight_fn", du * h + h * g, false, false},
      {"item_emb_proj", k_prime * (du * ph + ph * kx * d), true, true},
      {"item_weight_fn", k_prime * (du * h + h * g), true, true},
      {"component_logits", k_prime * g * d, true, false},
      {"cross_weight_fn", k_prime * (g * h + h * g), true, false},
      {"gating_combine", k_prime * g, true, false},
      {"weighted_sum", k_prime * g, true, false},
  };
  for (const auto& t : out.terms) {
    if (!t.cached) out.total += t.flops;
  }
  return out;
}

}  // namespace molr
