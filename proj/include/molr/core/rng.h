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
#ifndef MOLR_CORE_RNG_H_
#define MOLR_CORE_RNG_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace molr {

// xoshiro256** seeded through splitmix64. Every derived quantity (uniform
// reals, bounded integers, normals) is computed here with integer and IEEE
// arithmetic only, so a seed reproduces the same stream on any platform.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0);

  uint64_t NextU64();
  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Unbiased integer in [0, n). n must be > 0.
  uint64_t Below(uint64_t n);
  // Standard normal via Box-Muller (one cached spare).
  double Normal();
  bool Bernoulli(double p) { return Uniform() < p; }

  // Independent child generator for a named sub-stream.
  Rng Fork(uint64_t stream) const;

  uint64_t seed() const noexcept { return seed_; }

 private:
  uint64_t seed_;
  std::array<uint64_t, 4> s_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// First `count` entries of a seeded Fisher-Yates permutation of [0, n).
std::vector<uint32_t> PermutationPrefix(uint32_t n, uint32_t count, Rng& rng);

template <typename T>
void Shuffle(std::span<T> items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    const size_t j = rng.Below(i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace molr

#endif  // MOLR_CORE_RNG_H_
