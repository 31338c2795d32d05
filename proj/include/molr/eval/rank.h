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
#ifndef MOLR_EVAL_RANK_H_
#define MOLR_EVAL_RANK_H_

#include <vector>

#include "molr/core/matrix.h"

namespace molr {

// Singular values in descending order.
std::vector<double> SingularValues(const BasicMatrix<double>& m);

// Share of squared singular-value mass in the top d directions, on the raw
// (uncentered) matrix. Throws DimensionError unless d <= min(rows, cols).
double ExplainedVariance(const BasicMatrix<double>& m, size_t d);

// The curve for d = 1 .. min(rows, cols).
std::vector<double> ExplainedVarianceCurve(const BasicMatrix<double>& m);

// Count of singular values above rel_tol * largest. Throws EmptyInput.
size_t NumericRank(const BasicMatrix<double>& m, double rel_tol = 1e-6);
size_t NumericRankFromSingularValues(const std::vector<double>& sv,
                                     double rel_tol = 1e-6);

}  // namespace molr

#endif  // MOLR_EVAL_RANK_H_
