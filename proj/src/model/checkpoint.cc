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
#include "molr/model/checkpoint.h"

#include <sstream>

#include "molr/core/error.h"

namespace molr {
namespace {

void CopyInto(const Archive& a, const std::string& name, std::span<float> dst,
              size_t rows, size_t cols) {
  const Matrix m = a.SectionMatrix(name);
  if (m.rows() != rows || m.cols() != cols) {
    throw Error(ErrorCode::kShapeMismatch,
                "section '" + name + "' has shape " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()) + ", expected " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  std::copy(m.values().begin(), m.values().end(), dst.begin());
}

std::string FormatDouble(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

size_t MetaSize(const Archive& a, const std::string& key) {
  return std::stoul(a.Meta(key));
}

}  // namespace

Archive EncodeCheckpoint(const TowerParams<float>& params) {
  Archive a;
  const auto& c = params.config;
  a.SetMeta("kind", "mol");
  a.SetMeta("n_users", std::to_string(c.n_users));
  a.SetMeta("n_items", std::to_string(c.n_items));
  a.SetMeta("user_dim", std::to_string(c.user_dim));
  a.SetMeta("item_dim", std::to_string(c.item_dim));
  a.SetMeta("proj_hidden", std::to_string(c.proj_hidden));
  a.SetMeta("compressed_from", std::to_string(c.compressed_from));
  a.SetMeta("k_u", std::to_string(c.mol.k_u));
  a.SetMeta("k_x", std::to_string(c.mol.k_x));
  a.SetMeta("d", std::to_string(c.mol.d));
  a.SetMeta("tau", FormatDouble(c.mol.tau));
  a.SetMeta("gating_hidden", std::to_string(c.mol.gating_hidden));
  a.SetMeta("dropout_p", FormatDouble(c.mol.dropout_p));
  a.SetMeta("l2_normalized", c.mol.l2_normalized ? "1" : "0");
  auto copy = params;
  ForEachTensor(copy, [&a](const std::string& name, std::span<float> v,
                           size_t rows, size_t cols) {
    a.AddMatrix(name, Matrix(rows, cols, std::vector<float>(v.begin(), v.end())));
  });
  return a;
}

Archive EncodeCheckpoint(const DotBaselineParams<float>& params) {
  Archive a;
  a.SetMeta("kind", "dot");
  a.SetMeta("temperature", FormatDouble(params.temperature));
  a.AddMatrix("user_table", params.user_table);
  a.AddMatrix("item_table", params.item_table);
  return a;
}

Checkpoint DecodeCheckpoint(const Archive& a) {
  const std::string& kind = a.Meta("kind");
  if (kind == "dot") {
    return DotBaselineParams<float>{a.SectionMatrix("user_table"),
                                    a.SectionMatrix("item_table"),
                                    std::stod(a.Meta("temperature"))};
  }
  if (kind != "mol") {
    throw Error(ErrorCode::kFormat, "unknown checkpoint kind '" + kind + "'");
  }
  TowerConfig c;
  c.n_users = MetaSize(a, "n_users");
  c.n_items = MetaSize(a, "n_items");
  c.user_dim = MetaSize(a, "user_dim");
  c.item_dim = MetaSize(a, "item_dim");
  c.proj_hidden = MetaSize(a, "proj_hidden");
  c.compressed_from = MetaSize(a, "compressed_from");
  c.mol.k_u = MetaSize(a, "k_u");
  c.mol.k_x = MetaSize(a, "k_x");
  c.mol.d = MetaSize(a, "d");
  c.mol.tau = std::stod(a.Meta("tau"));
  c.mol.gating_hidden = MetaSize(a, "gating_hidden");
  c.mol.dropout_p = std::stod(a.Meta("dropout_p"));
  c.mol.l2_normalized = a.Meta("l2_normalized") == "1";
  c.Validate();
  // Build the expected shapes, then fill every tensor from its section.
  Rng unused(0);
  TowerParams<float> p = TowerParams<float>::ZerosLike(InitParams<float>(c, unused));
  ForEachTensor(p, [&a](const std::string& name, std::span<float> v,
                        size_t rows, size_t cols) {
    CopyInto(a, name, v, rows, cols);
  });
  return p;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::visit([&path](const auto& p) { EncodeCheckpoint(p).Save(path); }, ckpt);
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(Archive::Load(path));
}

uint64_t CheckpointHash(const Checkpoint& ckpt) {
  const std::string bytes =
      std::visit([](const auto& p) { return EncodeCheckpoint(p).Encode(); }, ckpt);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace molr
