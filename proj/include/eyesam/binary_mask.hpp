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
#include <span>
#include <utility>
#include <vector>

#include "eyesam/geometry.hpp"

namespace eyesam {

// Dense per-pixel foreground set for one image. Storage is row-major with one
// byte per pixel (0 or 1).
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height);
  explicit BinaryMask(ImageSize size) : BinaryMask(size.width, size.height) {}
  // Any nonzero byte in `values` is foreground.
  BinaryMask(int width, int height, std::span<const std::uint8_t> values);

  static BinaryMask from_pixels(int width, int height,
                                std::span<const std::pair<int, int>> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  ImageSize size() const { return {width_, height_}; }
  bool in_bounds(int x, int y) const { return size().contains(x, y); }

  // Out-of-bounds queries answer false.
  bool contains(int x, int y) const {
    return in_bounds(x, y) && data_[index(x, y)] != 0;
  }
  void set(int x, int y, bool value = true);

  std::int64_t count() const;
  bool empty() const { return count() == 0; }

  // Foreground coordinates in row-major order.
  std::vector<std::pair<int, int>> foreground() const;

  std::span<const std::uint8_t> data() const { return data_; }

  BinaryMask& operator|=(const BinaryMask& other);
  BinaryMask& operator&=(const BinaryMask& other);
  // Removes every pixel set in `other`.
  BinaryMask& subtract(const BinaryMask& other);

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

}  // namespace eyesam
