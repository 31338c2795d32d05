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
#ifndef MOLR_CORE_MATRIX_H_
#define MOLR_CORE_MATRIX_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "molr/core/error.h"

namespace molr {

// Dense row-major matrix. float is the production element type; double is
// used by the finite-difference and rank analysis paths.
template <typename T>
class BasicMatrix {
 public:
  using value_type = T;

  BasicMatrix() = default;
  BasicMatrix(size_t rows, size_t cols, T fill = T{0})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  BasicMatrix(size_t rows, size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "matrix payload size " + std::to_string(data_.size()) +
                      " != " + std::to_string(rows_) + "x" +
                      std::to_string(cols_));
    }
  }
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        throw Error(ErrorCode::kDimensionMismatch, "ragged initializer");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  size_t rows() const noexcept { return rows_; }
  size_t cols() const noexcept { return cols_; }
  size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  template <typename U>
  BasicMatrix<U> cast() const {
    std::vector<U> out(data_.begin(), data_.end());
    return BasicMatrix<U>(rows_, cols_, std::move(out));
  }

  bool operator==(const BasicMatrix&) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<T> data_;
};

using Matrix = BasicMatrix<float>;
using MatrixD = BasicMatrix<double>;

// a (m x k) times b (k x n).
template <typename T>
BasicMatrix<T> MatMul(const BasicMatrix<T>& a, const BasicMatrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "MatMul inner dimension");
  }
  BasicMatrix<T> out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    auto o = out.row(i);
    for (size_t p = 0; p < a.cols(); ++p) {
      const T av = a(i, p);
      if (av == T{0}) continue;
      const auto br = b.row(p);
      for (size_t j = 0; j < b.cols(); ++j) o[j] += av * br[j];
    }
  }
  return out;
}

// a (m x k) times b^T where b is (n x k).
template <typename T>
BasicMatrix<T> MatMulTransposed(const BasicMatrix<T>& a,
                                const BasicMatrix<T>& b) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "MatMulTransposed inner dim");
  }
  BasicMatrix<T> out(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    const auto ar = a.row(i);
    for (size_t j = 0; j < b.rows(); ++j) {
      const auto br = b.row(j);
      T acc{0};
      for (size_t p = 0; p < ar.size(); ++p) acc += ar[p] * br[p];
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace molr

#endif  // MOLR_CORE_MATRIX_H_
