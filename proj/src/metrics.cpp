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

#include "eyesam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "eyesam/error.hpp"
#include "eyesam/mask_ops.hpp"

namespace eyesam {
namespace {

constexpr double kFar = 1e20;

struct Overlap {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t both = 0;
};

Overlap overlap(const BinaryMask& a, const BinaryMask& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "cannot compare " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " mask with " +
                    std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
  Overlap o;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) {
    o.a += da[i];
    o.b += db[i];
    o.both += da[i] & db[i];
  }
  return o;
}

// Felzenszwalb-Huttenlocher 1-D lower envelope of parabolas. `f` holds exact
// integer-valued squared distances, so the output is exact as well.
void distance_1d(std::span<const double> f, std::span<double> d,
                 std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto intersect = [&](int q, int p) {
    return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
  };
  for (int q = 1; q < n; ++q) {
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}

double directed_sq(const std::vector<std::pair<int, int>>& from,
                   const std::vector<double>& field, int width) {
  double worst = 0.0;
  for (const auto& [x, y] : from) {
    worst = std::max(worst, field[static_cast<std::size_t>(y) * width + x]);
  }
  return worst;
}

}  // namespace

double dice(const BinaryMask& a, const BinaryMask& b) {
  const Overlap o = overlap(a, b);
  if (o.a + o.b == 0) return 1.0;
  return 2.0 * static_cast<double>(o.both) / static_cast<double>(o.a + o.b);
}

double iou(const BinaryMask& a, const BinaryMask& b) {
  const Overlap o = overlap(a, b);
  const std::int64_t uni = o.a + o.b - o.both;
  if (uni == 0) return 1.0;
  return static_cast<double>(o.both) / static_cast<double>(uni);
}

std::vector<double> squared_distance_transform(const BinaryMask& sites) {
  const int w = sites.width();
  const int h = sites.height();
  std::vector<double> field(static_cast<std::size_t>(w) * h, kFar);
  for (const auto& [x, y] : sites.foreground()) {
    field[static_cast<std::size_t>(y) * w + x] = 0.0;
  }
  std::vector<int> v;
  std::vector<double> z;
  std::vector<double> in(std::max(w, h));
  std::vector<double> out(std::max(w, h));
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) in[y] = field[static_cast<std::size_t>(y) * w + x];
    distance_1d({in.data(), static_cast<std::size_t>(h)},
                {out.data(), static_cast<std::size_t>(h)}, v, z);
    for (int y = 0; y < h; ++y) field[static_cast<std::size_t>(y) * w + x] = out[y];
  }
  for (int y = 0; y < h; ++y) {
    double* row = field.data() + static_cast<std::size_t>(y) * w;
    std::copy(row, row + w, in.begin());
    distance_1d({in.data(), static_cast<std::size_t>(w)},
                {out.data(), static_cast<std::size_t>(w)}, v, z);
    std::copy(out.begin(), out.begin() + w, row);
  }
  return field;
}

double hausdorff(const BinaryMask& a, const BinaryMask& b) {
  overlap(a, b);  // shape check
  const auto ba = boundary_pixels(a);
  const auto bb = boundary_pixels(b);
  if (ba.empty() && bb.empty()) return 0.0;
  if (ba.empty() || bb.empty()) {
    return std::hypot(static_cast<double>(a.width()),
                      static_cast<double>(a.height()));
  }
  const BinaryMask edge_a = BinaryMask::from_pixels(a.width(), a.height(), ba);
  const BinaryMask edge_b = BinaryMask::from_pixels(b.width(), b.height(), bb);
  const double ab = directed_sq(ba, squared_distance_transform(edge_b), a.width());
  const double ba_sq = directed_sq(bb, squared_distance_transform(edge_a), a.width());
  return std::sqrt(std::max(ab, ba_sq));
}

MetricTriple score_masks(const BinaryMask& predicted, const BinaryMask& truth) {
  MetricTriple m;
  m.dice = dice(predicted, truth);
  m.iou = iou(predicted, truth);
  m.hausdorff = hausdorff(predicted, truth);
  m.degenerate = predicted.empty() || truth.empty();
  return m;
}

double mean_iou(std::span<const EvalRecord> records,
                std::span<const Feature> features) {
  if (features.empty()) throw Error(ErrorCode::kNoData, "no features selected");
  double total = 0.0;
  for (Feature f : features) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : records) {
      if (r.feature != f || !r.scored() || !r.iou) continue;
      sum += *r.iou;
      ++n;
    }
    if (n == 0) {
      throw Error(ErrorCode::kNoData, "no scored records for feature " +
                                          std::string(feature_name(f)));
    }
    total += sum / static_cast<double>(n);
  }
  return total / static_cast<double>(features.size());
}

}  // namespace eyesam
