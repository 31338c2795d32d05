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
#ifndef MOLR_MODEL_CHECKPOINT_H_
#define MOLR_MODEL_CHECKPOINT_H_

#include <filesystem>
#include <string>
#include <variant>

#include "molr/core/snapshot.h"
#include "molr/model/dot_baseline.h"
#include "molr/model/towers.h"

namespace molr {

// A checkpoint is an Archive: one f32 snapshot per parameter tensor (named
// as in ForEachTensor), config values in the metadata, and "kind" set to
// "mol" or "dot".
using Checkpoint = std::variant<TowerParams<float>, DotBaselineParams<float>>;

Archive EncodeCheckpoint(const TowerParams<float>& params);
Archive EncodeCheckpoint(const DotBaselineParams<float>& params);
Checkpoint DecodeCheckpoint(const Archive& archive);

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// FNV-1a over the encoded bytes; used to compare runs.
uint64_t CheckpointHash(const Checkpoint& ckpt);

}  // namespace molr

#endif  // MOLR_MODEL_CHECKPOINT_H_
