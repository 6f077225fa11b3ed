// Copyright 2026 The eyesam Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace eyesam {

// Deterministic random source used by every sampling operation.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are not, so bounded integers and reals
// are derived here from raw 64-bit draws:
//   * uniform_index(n): rejection sampling on the top of the 64-bit range,
//     then x % n (unbiased).
//   * uniform_unit(): top 53 bits scaled by 2^-53, giving [0, 1).
// Identical seeds therefore produce identical draws on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  std::uint64_t uniform_index(std::uint64_t n);
  double uniform_unit();
  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform_unit();
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// Seed for one (image, feature, strategy) cell, independent of evaluation
// order: mix64 folded over the global seed and the FNV-1a hash of each key.
std::uint64_t derive_cell_seed(std::uint64_t global_seed,
                               std::string_view image_id,
                               std::string_view feature,
                               std::string_view strategy);

}  // namespace eyesam
