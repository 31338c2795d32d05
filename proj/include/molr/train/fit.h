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
#ifndef MOLR_TRAIN_FIT_H_
#define MOLR_TRAIN_FIT_H_

#include <cstdint>
#include <ostream>
#include <vector>

#include "molr/core/rng.h"
#include "molr/eval/metrics.h"
#include "molr/model/checkpoint.h"
#include "molr/model/towers.h"
#include "molr/train/batch.h"
#include "molr/train/config.h"

namespace molr {

enum class ModelKind { kMol, kDot };

struct ModelSpec {
  ModelKind kind = ModelKind::kMol;
  // n_users / n_items are taken from the data.
  TowerConfig tower;
  size_t dot_dim = 64;
  double dot_temperature = 1.0;
};

struct FitData {
  size_t n_users = 0;
  size_t n_items = 0;
  std::vector<TrainPair> train;
  std::vector<EvalPair> valid;
};

struct EpochRecord {
  size_t epoch = 0;
  double train_loss = 0.0;
  double val_hr = 0.0;  // HR at TrainConfig::eval_k
  double wall_seconds = 0.0;
};

struct FitResult {
  Checkpoint params;
  std::vector<EpochRecord> history;
};

// Trains from freshly initialized parameters. Same data, spec, config and
// rng state give bit-identical results. One log line per epoch goes to
// log when given.
FitResult Fit(const FitData& data, const ModelSpec& spec,
              const TrainConfig& config, Rng& rng, std::ostream* log = nullptr);

std::vector<EpochRecord> FitMol(TowerParams<float>& params, const FitData& data,
                                const TrainConfig& config, Rng& rng,
                                std::ostream* log = nullptr);
std::vector<EpochRecord> FitDot(DotBaselineParams<float>& params,
                                const FitData& data, const TrainConfig& config,
                                Rng& rng, std::ostream* log = nullptr);

}  // namespace molr

#endif  // MOLR_TRAIN_FIT_H_
