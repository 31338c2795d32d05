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
#include "molr/mol/item_cache.h"

#include <string>

#include "molr/core/error.h"
#include "molr/model/towers.h"

namespace molr {

template <typename T>
ItemCache<T>::ItemCache(size_t k_u, size_t k_x, size_t d, bool l2_normalized,
                        BasicMatrix<T> item_embs, BasicMatrix<T> item_gate_pre,
                        BasicMatrix<T> stage1,
                        std::optional<QuantizedRows> stage1_q)
    : k_u_(k_u),
      k_x_(k_x),
      d_(d),
      l2_normalized_(l2_normalized),
      item_embs_(std::move(item_embs)),
      item_gate_pre_(std::move(item_gate_pre)),
      stage1_(std::move(stage1)),
      stage1_q_(std::move(stage1_q)) {
  const size_t n = item_embs_.rows();
  if (item_embs_.cols() != k_x_ * d_ || item_gate_pre_.rows() != n ||
      item_gate_pre_.cols() != k_u_ * k_x_ || stage1_.rows() != n ||
      (stage1_q_ && (stage1_q_->rows != n || stage1_q_->cols != stage1_.cols()))) {
    throw Error(ErrorCode::kDimensionMismatch, "inconsistent item cache fields");
  }
}

template <typename T>
ItemCache<T> BuildItemCache(const TowerParams<T>& params,
                            const CacheOptions& options) {
  const auto& cfg = params.config;
  const size_t n = params.item_table.rows();
  if (n == 0) throw Error(ErrorCode::kEmptyCorpus, "empty item corpus");
  const size_t k_x = cfg.mol.k_x, d = cfg.mol.d, g = cfg.mol.groups();
  BasicMatrix<T> embs(n, k_x * d), gate(n, g), stage1(n, d);
  for (size_t i = 0; i < n; ++i) {
    const ItemOutput<T> out = ItemForward(params, static_cast<uint32_t>(i));
    std::copy(out.embs.values().begin(), out.embs.values().end(),
              embs.row(i).begin());
    std::copy(out.gate_pre.begin(), out.gate_pre.end(), gate.row(i).begin());
    const std::vector<T> s1 = Stage1Embedding(out.embs);
    std::copy(s1.begin(), s1.end(), stage1.row(i).begin());
  }
  std::optional<QuantizedRows> q;
  if (options.quantize_stage1) {
    q = QuantizeRowwise(stage1.template cast<float>());
  }
  return ItemCache<T>(cfg.mol.k_u, k_x, d, cfg.mol.l2_normalized,
                      std::move(embs), std::move(gate), std::move(stage1),
                      std::move(q));
}

Archive EncodeItemCache(const ItemCache<float>& cache) {
  Archive a;
  a.SetMeta("kind", "item_cache");
  a.SetMeta("k_u", std::to_string(cache.k_u()));
  a.SetMeta("k_x", std::to_string(cache.k_x()));
  a.SetMeta("d", std::to_string(cache.d()));
  a.SetMeta("l2_normalized", cache.l2_normalized() ? "1" : "0");
  a.AddMatrix("item_embs", cache.item_embs());
  a.AddMatrix("item_gate_pre", cache.item_gate_pre());
  a.AddMatrix("stage1", cache.stage1());
  if (cache.stage1_q()) a.AddSection("stage1_q", EncodeQuantized(*cache.stage1_q()));
  return a;
}

ItemCache<float> DecodeItemCache(const Archive& a) {
  if (!a.HasMeta("kind") || a.Meta("kind") != "item_cache") {
    throw Error(ErrorCode::kFormat, "archive is not an item cache");
  }
  std::optional<QuantizedRows> q;
  if (a.HasSection("stage1_q")) q = DecodeQuantized(a.Section("stage1_q"));
  return ItemCache<float>(std::stoul(a.Meta("k_u")), std::stoul(a.Meta("k_x")),
                          std::stoul(a.Meta("d")), a.Meta("l2_normalized") == "1",
                          a.SectionMatrix("item_embs"),
                          a.SectionMatrix("item_gate_pre"),
                          a.SectionMatrix("stage1"), std::move(q));
}

void SaveItemCache(const std::filesystem::path& path,
                   const ItemCache<float>& cache) {
  EncodeItemCache(cache).Save(path);
}

ItemCache<float> LoadItemCache(const std::filesystem::path& path) {
  return DecodeItemCache(Archive::Load(path));
}

template class ItemCache<float>;
template class ItemCache<double>;
template ItemCache<float> BuildItemCache<float>(const TowerParams<float>&,
                                                const CacheOptions&);
template ItemCache<double> BuildItemCache<double>(const TowerParams<double>&,
                                                  const CacheOptions&);

}  // namespace molr
