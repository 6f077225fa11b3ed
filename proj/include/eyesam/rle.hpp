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
#include <vector>

#include "json.hpp"

#include "eyesam/binary_mask.hpp"

namespace eyesam {

// Row-major run lengths alternating background/foreground, starting with a
// (possibly zero) background run. Counts sum to width*height.
struct RleMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> counts;
};

RleMask rle_encode(const BinaryMask& mask);
// Throws kDecodeError when counts do not cover the declared size exactly.
BinaryMask rle_decode(const RleMask& rle);

// {"width": W, "height": H, "counts": [...]}
nlohmann::json rle_to_json(const RleMask& rle);
RleMask rle_from_json(const nlohmann::json& j);

}  // namespace eyesam
