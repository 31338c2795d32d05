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
#ifndef MOLR_EVAL_METRICS_H_
#define MOLR_EVAL_METRICS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace molr {

struct EvalPair {
  uint32_t user = 0;
  uint32_t item = 0;
};

// Scores every corpus item for a user.
class Ranker {
 public:
  virtual ~Ranker() = default;
  virtual size_t num_items() const = 0;
  virtual void Score(uint32_t user, std::span<float> out) const = 0;
};

class FunctionRanker : public Ranker {
 public:
  using Fn = std::function<void(uint32_t, std::span<float>)>;
  FunctionRanker(size_t num_items, Fn fn) : num_items_(num_items), fn_(std::move(fn)) {}
  size_t num_items() const override { return num_items_; }
  void Score(uint32_t user, std::span<float> out) const override { fn_(user, out); }

 private:
  size_t num_items_;
  Fn fn_;
};

// 1-indexed rank of target over the full corpus; ties go to the smaller id.
size_t TargetRank(std::span<const float> scores, uint32_t target);

// Full-corpus rank of each pair's target (targets are not excluded from
// the candidates). Throws EmptyEvalSet and OutOfRange.
std::vector<size_t> TargetRanks(const Ranker& ranker, std::span<const EvalPair> pairs);

std::map<size_t, double> HitRatesFromRanks(std::span<const size_t> ranks,
                                           std::span<const size_t> ks);
double MrrFromRanks(std::span<const size_t> ranks);

std::map<size_t, double> HitRateAtK(const Ranker& ranker,
                                    std::span<const EvalPair> pairs,
                                    std::span<const size_t> ks);
double MeanReciprocalRank(const Ranker& ranker, std::span<const EvalPair> pairs);

}  // namespace molr

#endif  // MOLR_EVAL_METRICS_H_
