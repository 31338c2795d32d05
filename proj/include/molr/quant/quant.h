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
#ifndef MOLR_QUANT_QUANT_H_
#define MOLR_QUANT_QUANT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "molr/core/matrix.h"

namespace molr {

// Largest vector length whose INT8 dot product cannot overflow an int32
// accumulator: 127 * 127 * 131070 < 2^31.
inline constexpr size_t kMaxInt8DotLength = 131070;

// Rowwise symmetric INT8 codes: value ~= code * scale, scale = max|row|/127.
// All-zero rows carry scale 1 and zero codes.
struct QuantizedRows {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<int8_t> codes;  // rows x cols, row-major
  std::vector<float> scales;  // one per row

  std::span<const int8_t> row(size_t r) const {
    return {codes.data() + r * cols, cols};
  }
  float Dequantized(size_t r, size_t c) const {
    return static_cast<float>(codes[r * cols + c]) * scales[r];
  }

  bool operator==(const QuantizedRows&) const = default;
};

struct QuantizedVector {
  std::vector<int8_t> codes;
  float scale = 1.0f;
};

QuantizedRows QuantizeRowwise(const Matrix& m);
QuantizedVector QuantizeVector(std::span<const float> v);

// Exact integer dot product. Throws LengthOverflow past kMaxInt8DotLength
// and DimensionMismatch on unequal lengths.
int32_t Int8Dot(std::span<const int8_t> a, std::span<const int8_t> b);

// Snapshot with dtype tag 1.
std::string EncodeQuantized(const QuantizedRows& q);
QuantizedRows DecodeQuantized(std::string_view bytes);

}  // namespace molr

#endif  // MOLR_QUANT_QUANT_H_
