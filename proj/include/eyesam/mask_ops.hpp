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

#include <cstddef>
#include <utility>
#include <vector>

#include "eyesam/binary_mask.hpp"
#include "eyesam/geometry.hpp"
#include "eyesam/rng.hpp"

namespace eyesam {

// Minimal axis-aligned box containing every foreground pixel.
// Throws kEmptyMask when the mask has no foreground.
Box bounding_box(const BinaryMask& mask);

// Scales each side about the box center, then clamps to `bounds`.
//
// The box is treated as the continuous span [x_min, x_max] between pixel
// centers; new edges are center -/+ factor * half-span, rounded to the
// nearest pixel with exact halves rounded away from the center.
// Throws kInvalidFactor for factor <= 0.
Box scale_box(const Box& box, double factor, ImageSize bounds);

// Moves each edge independently by round(u), u ~ U[-fraction*s, fraction*s],
// where s is the side length in pixels (width for x edges, height for y
// edges). Draw order is x_min, y_min, x_max, y_max. The result is reordered
// so min <= max and clamped to `bounds`; inclusive corners keep it >= 1x1.
// Throws kInvalidFraction unless 0 <= fraction < 1.
Box perturb_box(const Box& box, double fraction, SeededRng& rng,
                ImageSize bounds);

// `n` foreground points drawn uniformly with replacement from the mask.
std::vector<Point> sample_points_in_mask(const BinaryMask& mask, std::size_t n,
                                         SeededRng& rng);

// `n` background points drawn uniformly with replacement from the pixels of
// `box` (clipped to the mask) that are not in the mask.
// Throws kNoBackgroundAvailable when no such pixel exists.
std::vector<Point> sample_points_outside_mask_in_box(const BinaryMask& mask,
                                                     const Box& box,
                                                     std::size_t n,
                                                     SeededRng& rng);

// Foreground pixels with at least one 4-neighbor that is background or
// outside the image, in row-major order.
std::vector<std::pair<int, int>> boundary_pixels(const BinaryMask& mask);

}  // namespace eyesam
