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
#ifndef MOLR_EVAL_COST_H_
#define MOLR_EVAL_COST_H_

#include <string>
#include <vector>

namespace molr {

enum class FlopConvention { kMac, kFma2 };

struct CostQuery {
  double B = 0;    // batch size
  double X = 0;    // negatives / candidates
  double D = 0;    // fused feature dim
  double DU = 0;   // user-side feature dim
  double DX = 0;   // item-side feature dim
  double DXU = 0;  // cross feature dim
  double K = 0;    // hidden dim
  double L = 0;    // output dim
  FlopConvention convention = FlopConvention::kMac;

  void Validate() const;
};

double GatingFlops(const CostQuery& q, bool decomposed);
double GatingMemory(const CostQuery& q, bool decomposed, double bytes_per = 4.0);

// FLOPs per byte moved for a B x X dot product over D'-dim vectors.
double ArithmeticIntensity(double B, double X, double d_prime, double byte_width);

struct InferenceCostConfig {
  size_t k_u = 8;
  size_t k_x = 8;
  size_t d = 32;
  size_t gating_hidden = 128;
  size_t user_feature_dim = 50;
  size_t proj_hidden = 512;
};

struct CostTerm {
  std::string name;
  double flops = 0.0;
  bool per_candidate = false;
  // Item-side terms are precomputed in the item cache and excluded from
  // the total.
  bool cached = false;
};

struct InferenceCost {
  std::vector<CostTerm> terms;
  double total = 0.0;
};

// Multiply-accumulate count of the query path for k' candidates.
InferenceCost MolInferenceFlops(const InferenceCostConfig& config, double k_prime);

}  // namespace molr

#endif  // MOLR_EVAL_COST_H_
