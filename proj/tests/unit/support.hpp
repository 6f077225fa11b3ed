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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "eyesam/binary_mask.hpp"
#include "eyesam/label_map.hpp"
#include "eyesam/rng.hpp"

namespace eyesam::testing {

using PixelSet = std::set<std::pair<int, int>>;

inline PixelSet pixel_set(const BinaryMask& m) {
  PixelSet s;
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      if (m.contains(x, y)) s.insert({x, y});
    }
  }
  return s;
}

// Boundary by direct 4-neighbour enumeration.
inline PixelSet brute_boundary(const BinaryMask& m) {
  PixelSet out;
  const PixelSet fg = pixel_set(m);
  for (const auto& [x, y] : fg) {
    const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
    for (const auto& n : nb) {
      if (!fg.count({n[0], n[1]})) {
        out.insert({x, y});
        break;
      }
    }
  }
  return out;
}

inline double brute_dice(const BinaryMask& a, const BinaryMask& b) {
  const PixelSet sa = pixel_set(a), sb = pixel_set(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& p : sa) inter += sb.count(p);
  return 2.0 * static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size());
}

inline double brute_iou(const BinaryMask& a, const BinaryMask& b) {
  const PixelSet sa = pixel_set(a), sb = pixel_set(b);
  if (sa.empty() && sb.empty()) return 1.0;
  PixelSet uni = sa;
  uni.insert(sb.begin(), sb.end());
  std::size_t inter = 0;
  for (const auto& p : sa) inter += sb.count(p);
  return static_cast<double>(inter) / static_cast<double>(uni.size());
}

// O(n^2) sup-inf scan over boundary pixels.
inline double brute_hausdorff(const BinaryMask& a, const BinaryMask& b) {
  const PixelSet ba = brute_boundary(a), bb = brute_boundary(b);
  if (ba.empty() && bb.empty()) return 0.0;
  if (ba.empty() || bb.empty()) return std::hypot(a.width(), a.height());
  auto directed = [](const PixelSet& from, const PixelSet& to) {
    double worst = 0;
    for (const auto& [x1, y1] : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [x2, y2] : to) {
        best = std::min(best, std::hypot(double(x1 - x2), double(y1 - y2)));
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(ba, bb), directed(bb, ba));
}

// Random mask: a mix of density noise, filled rectangles and empty masks.
inline BinaryMask random_mask(SeededRng& rng, int w, int h) {
  BinaryMask m(w, h);
  const auto mode = rng.uniform_index(6);
  if (mode == 0) return m;
  if (mode <= 2) {
    const double p = rng.uniform_unit();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (rng.uniform_unit() < p) m.set(x, y);
      }
    }
    return m;
  }
  const auto rects = 1 + rng.uniform_index(3);
  for (std::uint64_t r = 0; r < rects; ++r) {
    const int x0 = static_cast<int>(rng.uniform_index(w));
    const int y0 = static_cast<int>(rng.uniform_index(h));
    const int x1 = x0 + static_cast<int>(rng.uniform_index(w - x0));
    const int y1 = y0 + static_cast<int>(rng.uniform_index(h - y0));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) m.set(x, y);
    }
  }
  return m;
}

inline BinaryMask rect_mask(int w, int h, int x0, int y0, int x1, int y1) {
  BinaryMask m(w, h);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) m.set(x, y);
  }
  return m;
}

// Concentric disks: sclera region, iris radius, pupil radius (0 = absent).
inline LabelMap eye_labels(int w, int h, int cx, int cy, int sclera_r, int iris_r, int pupil_r) {
  LabelMap l(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      if (pupil_r > 0 && d2 <= pupil_r * pupil_r) l.set(x, y, EyeClass::kPupil);
      else if (iris_r > 0 && d2 <= iris_r * iris_r) l.set(x, y, EyeClass::kIris);
      else if (sclera_r > 0 && d2 <= sclera_r * sclera_r) l.set(x, y, EyeClass::kSclera);
    }
  }
  return l;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    SeededRng rng(std::hash<std::string>{}(tag) ^ static_cast<std::uint64_t>(
                      std::chrono::steady_clock::now().time_since_epoch().count()));
    path_ = std::filesystem::temp_directory_path() /
            ("eyesam_" + tag + "_" + std::to_string(rng.next_u64() % 1000000007));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace eyesam::testing
