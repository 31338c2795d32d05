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
#include "molr/eval/rank.h"

#include <Eigen/SVD>

#include "molr/core/error.h"

namespace molr {

std::vector<double> SingularValues(const BasicMatrix<double>& m) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw Error(ErrorCode::kEmptyInput, "empty matrix");
  }
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(e);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

double ExplainedVariance(const BasicMatrix<double>& m, size_t d) {
  const size_t n = std::min(m.rows(), m.cols());
  if (d > n) {
    throw Error(ErrorCode::kDimensionError,
                "d=" + std::to_string(d) + " exceeds min dimension " + std::to_string(n));
  }
  const auto curve = ExplainedVarianceCurve(m);
  return d == 0 ? 0.0 : curve[d - 1];
}

std::vector<double> ExplainedVarianceCurve(const BasicMatrix<double>& m) {
  const auto sv = SingularValues(m);
  double total = 0.0;
  for (const double s : sv) total += s * s;
  std::vector<double> curve(sv.size());
  double acc = 0.0;
  for (size_t i = 0; i < sv.size(); ++i) {
    acc += sv[i] * sv[i];
    curve[i] = total > 0.0 ? acc / total : 0.0;
  }
  if (!curve.empty() && total > 0.0) curve.back() = 1.0;
  return curve;
}

size_t NumericRankFromSingularValues(const std::vector<double>& sv, double rel_tol) {
  if (sv.empty()) return 0;
  double smax = 0.0;
  for (const double s : sv) smax = std::max(smax, s);
  size_t rank = 0;
  for (const double s : sv) rank += s > rel_tol * smax ? 1 : 0;
  return rank;
}

size_t NumericRank(const BasicMatrix<double>& m, double rel_tol) {
  return NumericRankFromSingularValues(SingularValues(m), rel_tol);
}

}  // namespace molr
