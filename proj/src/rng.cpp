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

#include "eyesam/rng.hpp"

#include <limits>

#include "eyesam/error.hpp"

namespace eyesam {

std::uint64_t SeededRng::uniform_index(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "uniform_index(0)");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  // Largest multiple of n that fits; draws at or above it are rejected.
  const std::uint64_t limit = kMax - (kMax % n + 1) % n;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return x % n;
}

double SeededRng::uniform_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_cell_seed(std::uint64_t global_seed,
                               std::string_view image_id,
                               std::string_view feature,
                               std::string_view strategy) {
  std::uint64_t h = mix64(global_seed);
  h = mix64(h ^ fnv1a64(image_id));
  h = mix64(h ^ fnv1a64(feature));
  h = mix64(h ^ fnv1a64(strategy));
  return h;
}

}  // namespace eyesam
