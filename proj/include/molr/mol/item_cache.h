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
#ifndef MOLR_MOL_ITEM_CACHE_H_
#define MOLR_MOL_ITEM_CACHE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>

#include "molr/core/matrix.h"
#include "molr/core/snapshot.h"
#include "molr/quant/quant.h"

namespace molr {

template <typename T>
struct TowerParams;

// Immutable item-side snapshot. Row r holds item id r.
template <typename T>
class ItemCache {
 public:
  ItemCache() = default;
  ItemCache(size_t k_u, size_t k_x, size_t d, bool l2_normalized,
            BasicMatrix<T> item_embs, BasicMatrix<T> item_gate_pre,
            BasicMatrix<T> stage1, std::optional<QuantizedRows> stage1_q);

  size_t size() const noexcept { return item_embs_.rows(); }
  size_t k_u() const noexcept { return k_u_; }
  size_t k_x() const noexcept { return k_x_; }
  size_t d() const noexcept { return d_; }
  size_t groups() const noexcept { return k_u_ * k_x_; }
  bool l2_normalized() const noexcept { return l2_normalized_; }

  // X x (k_x * d): item components, flattened per item.
  const BasicMatrix<T>& item_embs() const noexcept { return item_embs_; }
  // X x (k_u * k_x): cached item_net outputs.
  const BasicMatrix<T>& item_gate_pre() const noexcept { return item_gate_pre_; }
  // X x d': first-stage embeddings.
  const BasicMatrix<T>& stage1() const noexcept { return stage1_; }
  const std::optional<QuantizedRows>& stage1_q() const noexcept {
    return stage1_q_;
  }

  bool operator==(const ItemCache&) const = default;

 private:
  size_t k_u_ = 0;
  size_t k_x_ = 0;
  size_t d_ = 0;
  bool l2_normalized_ = false;
  BasicMatrix<T> item_embs_;
  BasicMatrix<T> item_gate_pre_;
  BasicMatrix<T> stage1_;
  std::optional<QuantizedRows> stage1_q_;
};

struct CacheOptions {
  bool quantize_stage1 = false;
};

// Runs the item tower over every item of the params' item table.
template <typename T>
ItemCache<T> BuildItemCache(const TowerParams<T>& params,
                            const CacheOptions& options = {});

// Gathered cache rows, in the order of `indices`.
template <typename T>
struct ItemSlice {
  std::vector<uint32_t> ids;
  BasicMatrix<T> item_embs;
  BasicMatrix<T> item_gate_pre;
};

Archive EncodeItemCache(const ItemCache<float>& cache);
ItemCache<float> DecodeItemCache(const Archive& archive);
void SaveItemCache(const std::filesystem::path& path,
                   const ItemCache<float>& cache);
ItemCache<float> LoadItemCache(const std::filesystem::path& path);

}  // namespace molr

#endif  // MOLR_MOL_ITEM_CACHE_H_
