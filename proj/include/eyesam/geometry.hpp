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
#include <ostream>

namespace eyesam {

// Pixel coordinates: x is the column index from the left, y the row index
// from the top, origin at the top-left pixel.

struct ImageSize {
  int width = 0;
  int height = 0;

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height;
  }
  friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

// Axis-aligned box with inclusive corners, so Box(5,7,5,7) covers one pixel.
struct Box {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const { return x_max - x_min + 1; }
  int height() const { return y_max - y_min + 1; }
  bool contains(int x, int y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

enum class PointLabel : std::uint8_t { kBackground = 0, kForeground = 1 };

struct Point {
  int x = 0;
  int y = 0;
  PointLabel label = PointLabel::kForeground;

  bool foreground() const { return label == PointLabel::kForeground; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Box& b) {
  return os << "Box(" << b.x_min << "," << b.y_min << "," << b.x_max << ","
            << b.y_max << ")";
}

inline std::ostream& operator<<(std::ostream& os, const Point& p) {
  return os << "(" << p.x << "," << p.y << (p.foreground() ? ",fg)" : ",bg)");
}

}  // namespace eyesam
