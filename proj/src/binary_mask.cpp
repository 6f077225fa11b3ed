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

#include "eyesam/binary_mask.hpp"

#include <algorithm>
#include <string>

#include "eyesam/error.hpp"

namespace eyesam {
namespace {

void check_same_size(const BinaryMask& a, const BinaryMask& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "mask sizes differ: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
}

}  // namespace

BinaryMask::BinaryMask(int width, int height) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative mask dimensions");
  }
  data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
               0);
}

BinaryMask::BinaryMask(int width, int height,
                       std::span<const std::uint8_t> values)
    : BinaryMask(width, height) {
  if (values.size() != data_.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "mask buffer holds " + std::to_string(values.size()) +
                    " values, expected " + std::to_string(data_.size()));
  }
  std::transform(values.begin(), values.end(), data_.begin(),
                 [](std::uint8_t v) { return v != 0 ? 1 : 0; });
}

BinaryMask BinaryMask::from_pixels(int width, int height,
                                   std::span<const std::pair<int, int>> pixels) {
  BinaryMask mask(width, height);
  for (const auto& [x, y] : pixels) mask.set(x, y);
  return mask;
}

void BinaryMask::set(int x, int y, bool value) {
  if (!in_bounds(x, y)) {
    throw Error(ErrorCode::kInvalidArgument,
                "pixel (" + std::to_string(x) + "," + std::to_string(y) +
                    ") outside " + std::to_string(width_) + "x" +
                    std::to_string(height_) + " mask");
  }
  data_[index(x, y)] = value ? 1 : 0;
}

std::int64_t BinaryMask::count() const {
  return std::count(data_.begin(), data_.end(), std::uint8_t{1});
}

std::vector<std::pair<int, int>> BinaryMask::foreground() const {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < height_; ++y) {
    const std::uint8_t* row = data_.data() + index(0, y);
    for (int x = 0; x < width_; ++x) {
      if (row[x]) out.emplace_back(x, y);
    }
  }
  return out;
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& other) {
  check_same_size(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] |= other.data_[i];
  return *this;
}

BinaryMask& BinaryMask::operator&=(const BinaryMask& other) {
  check_same_size(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] &= other.data_[i];
  return *this;
}

BinaryMask& BinaryMask::subtract(const BinaryMask& other) {
  check_same_size(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (other.data_[i]) data_[i] = 0;
  }
  return *this;
}

}  // namespace eyesam
