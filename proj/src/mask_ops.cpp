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

#include "eyesam/mask_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eyesam/error.hpp"

namespace eyesam {
namespace {

// Nearest integer, exact halves toward -infinity / +infinity respectively.
int round_half_down(double v) { return static_cast<int>(std::ceil(v - 0.5)); }
int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

Box clamp_box(Box b, ImageSize bounds) {
  b.x_min = std::clamp(b.x_min, 0, bounds.width - 1);
  b.x_max = std::clamp(b.x_max, 0, bounds.width - 1);
  b.y_min = std::clamp(b.y_min, 0, bounds.height - 1);
  b.y_max = std::clamp(b.y_max, 0, bounds.height - 1);
  return b;
}

void check_bounds(ImageSize bounds) {
  if (bounds.width <= 0 || bounds.height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "image bounds must be positive");
  }
}

std::vector<Point> draw_points(const std::vector<std::pair<int, int>>& pool,
                               std::size_t n, PointLabel label,
                               SeededRng& rng) {
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [x, y] = pool[rng.uniform_index(pool.size())];
    out.push_back({x, y, label});
  }
  return out;
}

}  // namespace

Box bounding_box(const BinaryMask& mask) {
  Box box{mask.width(), mask.height(), -1, -1};
  bool any = false;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.contains(x, y)) continue;
      any = true;
      box.x_min = std::min(box.x_min, x);
      box.x_max = std::max(box.x_max, x);
      box.y_min = std::min(box.y_min, y);
      box.y_max = std::max(box.y_max, y);
    }
  }
  if (!any) throw Error(ErrorCode::kEmptyMask, "bounding_box of empty mask");
  return box;
}

Box scale_box(const Box& box, double factor, ImageSize bounds) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::kInvalidFactor,
                "scale factor must be positive, got " + std::to_string(factor));
  }
  check_bounds(bounds);
  const double cx = 0.5 * (box.x_min + box.x_max);
  const double cy = 0.5 * (box.y_min + box.y_max);
  const double hx = 0.5 * (box.x_max - box.x_min) * factor;
  const double hy = 0.5 * (box.y_max - box.y_min) * factor;
  const Box scaled{round_half_down(cx - hx), round_half_down(cy - hy),
                   round_half_up(cx + hx), round_half_up(cy + hy)};
  return clamp_box(scaled, bounds);
}

Box perturb_box(const Box& box, double fraction, SeededRng& rng,
                ImageSize bounds) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidFraction,
                "perturbation fraction must lie in [0,1), got " +
                    std::to_string(fraction));
  }
  check_bounds(bounds);
  const double dx = fraction * box.width();
  const double dy = fraction * box.height();
  auto shift = [&](double limit) {
    return static_cast<int>(std::lround(rng.uniform_real(-limit, limit)));
  };
  int x0 = box.x_min + shift(dx);
  int y0 = box.y_min + shift(dy);
  int x1 = box.x_max + shift(dx);
  int y1 = box.y_max + shift(dy);
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  return clamp_box({x0, y0, x1, y1}, bounds);
}

std::vector<Point> sample_points_in_mask(const BinaryMask& mask, std::size_t n,
                                         SeededRng& rng) {
  const auto pool = mask.foreground();
  if (pool.empty()) {
    throw Error(ErrorCode::kEmptyMask, "cannot sample points from empty mask");
  }
  return draw_points(pool, n, PointLabel::kForeground, rng);
}

std::vector<Point> sample_points_outside_mask_in_box(const BinaryMask& mask,
                                                     const Box& box,
                                                     std::size_t n,
                                                     SeededRng& rng) {
  std::vector<std::pair<int, int>> pool;
  const int y_lo = std::max(box.y_min, 0);
  const int y_hi = std::min(box.y_max, mask.height() - 1);
  const int x_lo = std::max(box.x_min, 0);
  const int x_hi = std::min(box.x_max, mask.width() - 1);
  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      if (!mask.contains(x, y)) pool.emplace_back(x, y);
    }
  }
  if (pool.empty()) {
    throw Error(ErrorCode::kNoBackgroundAvailable,
                "box is fully covered by the mask");
  }
  return draw_points(pool, n, PointLabel::kBackground, rng);
}

std::vector<std::pair<int, int>> boundary_pixels(const BinaryMask& mask) {
  std::vector<std::pair<int, int>> out;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.contains(x, y)) continue;
      if (!mask.contains(x - 1, y) || !mask.contains(x + 1, y) ||
          !mask.contains(x, y - 1) || !mask.contains(x, y + 1)) {
        out.emplace_back(x, y);
      }
    }
  }
  return out;
}

}  // namespace eyesam
