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
#include "molr/quant/quant.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "molr/core/error.h"
#include "molr/core/snapshot.h"

namespace molr {
namespace {

float RowScale(std::span<const float> row) {
  float mx = 0.0f;
  for (const float v : row) mx = std::max(mx, std::fabs(v));
  return mx > 0.0f ? mx / 127.0f : 1.0f;
}

void QuantizeInto(std::span<const float> row, float scale,
                  std::span<int8_t> out) {
  for (size_t i = 0; i < row.size(); ++i) {
    const double q = std::nearbyint(static_cast<double>(row[i]) / scale);
    out[i] = static_cast<int8_t>(std::clamp(q, -127.0, 127.0));
  }
}

}  // namespace

QuantizedRows QuantizeRowwise(const Matrix& m) {
  QuantizedRows q;
  q.rows = m.rows();
  q.cols = m.cols();
  q.codes.resize(m.size());
  q.scales.resize(m.rows());
  for (size_t r = 0; r < m.rows(); ++r) {
    q.scales[r] = RowScale(m.row(r));
    QuantizeInto(m.row(r), q.scales[r],
                 std::span<int8_t>(q.codes.data() + r * q.cols, q.cols));
  }
  return q;
}

QuantizedVector QuantizeVector(std::span<const float> v) {
  QuantizedVector q;
  q.scale = RowScale(v);
  q.codes.resize(v.size());
  QuantizeInto(v, q.scale, q.codes);
  return q;
}

int32_t Int8Dot(std::span<const int8_t> a, std::span<const int8_t> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "int8 dot length mismatch");
  }
  if (a.size() > kMaxInt8DotLength) {
    throw Error(ErrorCode::kLengthOverflow,
                "length " + std::to_string(a.size()) +
                    " may overflow the int32 accumulator");
  }
  int32_t acc = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<int32_t>(a[i]) * static_cast<int32_t>(b[i]);
  }
  return acc;
}

std::string EncodeQuantized(const QuantizedRows& q) {
  ByteWriter out;
  WriteSnapshotHeader(out, {q.rows, q.cols, DType::kI8RowScaled});
  out.Bytes(std::string_view(reinterpret_cast<const char*>(q.codes.data()),
                             q.codes.size()));
  for (const float s : q.scales) out.F32(s);
  return out.Take();
}

QuantizedRows DecodeQuantized(std::string_view bytes) {
  ByteReader in(bytes);
  const SnapshotHeader h = ReadSnapshotHeader(in);
  if (h.dtype != DType::kI8RowScaled) {
    throw Error(ErrorCode::kFormat, "expected int8 snapshot");
  }
  if (in.remaining() != h.PayloadBytes()) {
    throw Error(ErrorCode::kFormat, "int8 snapshot payload length mismatch");
  }
  QuantizedRows q;
  q.rows = h.rows;
  q.cols = h.cols;
  const auto codes = in.Bytes(h.rows * h.cols);
  q.codes.assign(reinterpret_cast<const int8_t*>(codes.data()),
                 reinterpret_cast<const int8_t*>(codes.data()) + codes.size());
  q.scales.resize(h.rows);
  for (auto& s : q.scales) s = in.F32();
  return q;
}

}  // namespace molr
