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

#include <gtest/gtest.h>

#include <cmath>

#include "eyesam/error.hpp"
#include "eyesam/metrics.hpp"
#include "support.hpp"

namespace eyesam {
namespace {

using testing::brute_dice;
using testing::brute_hausdorff;
using testing::brute_iou;
using testing::random_mask;
using testing::rect_mask;

BinaryMask pixel(int w, int h, int x, int y) {
  BinaryMask m(w, h);
  m.set(x, y);
  return m;
}

TEST(Dice, IdentityAndDisjoint) {
  const BinaryMask a = rect_mask(8, 8, 1, 1, 3, 3);
  EXPECT_EQ(dice(a, a), 1.0);
  EXPECT_EQ(dice(a, rect_mask(8, 8, 5, 5, 6, 6)), 0.0);
}

TEST(DiceIou, OffsetBlocks) {
  const BinaryMask a = rect_mask(6, 6, 0, 0, 1, 1);
  const BinaryMask b = rect_mask(6, 6, 1, 0, 2, 1);
  EXPECT_DOUBLE_EQ(dice(a, b), 0.5);
  EXPECT_DOUBLE_EQ(iou(a, b), 2.0 / 6.0);
}

TEST(Iou, Subset) {
  EXPECT_DOUBLE_EQ(iou(pixel(4, 4, 0, 0), rect_mask(4, 4, 0, 0, 1, 1)), 0.25);
}

TEST(Metrics, BothEmptyConventions) {
  const BinaryMask e(5, 5);
  EXPECT_EQ(dice(e, e), 1.0);
  EXPECT_EQ(iou(e, e), 1.0);
  EXPECT_EQ(hausdorff(e, e), 0.0);
  const MetricTriple t = score_masks(e, e);
  EXPECT_TRUE(t.degenerate);
}

TEST(Metrics, OneEmptySentinel) {
  const BinaryMask e(30, 40);
  const BinaryMask a = pixel(30, 40, 3, 3);
  EXPECT_DOUBLE_EQ(hausdorff(e, a), 50.0);
  EXPECT_DOUBLE_EQ(hausdorff(a, e), 50.0);
  const MetricTriple t = score_masks(e, a);
  EXPECT_TRUE(t.degenerate);
  EXPECT_EQ(t.dice, 0.0);
  EXPECT_EQ(t.iou, 0.0);
  EXPECT_FALSE(score_masks(a, a).degenerate);
}

TEST(Metrics, ShapeMismatch) {
  const BinaryMask a(4, 4), b(4, 5);
  for (auto f : {+[](const BinaryMask& x, const BinaryMask& y) { return dice(x, y); },
                 +[](const BinaryMask& x, const BinaryMask& y) { return iou(x, y); },
                 +[](const BinaryMask& x, const BinaryMask& y) { return hausdorff(x, y); }}) {
    try {
      f(a, b);
      ADD_FAILURE() << "expected ShapeMismatch";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
    }
  }
}

TEST(Hausdorff, IdenticalIsZero) {
  const BinaryMask a = rect_mask(9, 9, 2, 1, 6, 7);
  EXPECT_EQ(hausdorff(a, a), 0.0);
}

TEST(Hausdorff, TwoPixels) {
  EXPECT_DOUBLE_EQ(hausdorff(pixel(10, 10, 0, 0), pixel(10, 10, 3, 4)), 5.0);
}

TEST(Hausdorff, ConcentricSquares) {
  const BinaryMask outer = rect_mask(15, 15, 3, 3, 11, 11);
  const BinaryMask inner = rect_mask(15, 15, 6, 6, 8, 8);
  const double expected = brute_hausdorff(outer, inner);
  EXPECT_EQ(hausdorff(outer, inner), expected);
  // Outer corner (3,3) to nearest inner boundary pixel (6,6).
  EXPECT_DOUBLE_EQ(expected, std::hypot(3.0, 3.0));
}

TEST(Metrics, RandomPairsMatchBruteForce) {
  SeededRng rng(2024);
  for (int t = 0; t < 400; ++t) {
    const int w = 1 + static_cast<int>(rng.uniform_index(32));
    const int h = 1 + static_cast<int>(rng.uniform_index(32));
    const BinaryMask a = random_mask(rng, w, h);
    const BinaryMask b = random_mask(rng, w, h);
    ASSERT_NEAR(dice(a, b), brute_dice(a, b), 1e-12);
    ASSERT_NEAR(iou(a, b), brute_iou(a, b), 1e-12);
    ASSERT_NEAR(hausdorff(a, b), brute_hausdorff(a, b), 1e-9);
    ASSERT_EQ(dice(a, b), dice(b, a));
    ASSERT_EQ(iou(a, b), iou(b, a));
    ASSERT_EQ(hausdorff(a, b), hausdorff(b, a));
    const double i = iou(a, b);
    ASSERT_NEAR(dice(a, b), 2 * i / (1 + i), 1e-12);
    ASSERT_LE(i, dice(a, b) + 1e-15);
  }
}

TEST(DistanceTransform, MatchesBruteForce) {
  SeededRng rng(5);
  for (int t = 0; t < 100; ++t) {
    const int w = 1 + static_cast<int>(rng.uniform_index(20));
    const int h = 1 + static_cast<int>(rng.uniform_index(20));
    const BinaryMask s = random_mask(rng, w, h);
    if (s.empty()) continue;
    const auto d = squared_distance_transform(s);
    const auto sites = testing::pixel_set(s);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double best = 1e300;
        for (const auto& [sx, sy] : sites) {
          best = std::min(best, double((x - sx) * (x - sx) + (y - sy) * (y - sy)));
        }
        ASSERT_EQ(d[static_cast<std::size_t>(y) * w + x], best);
      }
    }
  }
}

EvalRecord scored(Feature f, double v) {
  EvalRecord r;
  r.feature = f;
  r.iou = v;
  r.dice = 2 * v / (1 + v);
  r.hausdorff = 0;
  return r;
}

TEST(MeanIou, SingleFeature) {
  const std::vector<EvalRecord> rs = {scored(Feature::kPupil, 0.5), scored(Feature::kPupil, 1.0)};
  const Feature fs[] = {Feature::kPupil};
  EXPECT_DOUBLE_EQ(mean_iou(rs, fs), 0.75);
}

TEST(MeanIou, UnweightedOverFeaturesAndExclusion) {
  std::vector<EvalRecord> rs = {scored(Feature::kPupil, 1.0), scored(Feature::kIris, 0.5),
                                scored(Feature::kIris, 0.5), scored(Feature::kSclera, 0.0)};
  EvalRecord skipped;
  skipped.feature = Feature::kPupil;
  skipped.skipped = true;
  skipped.skip_reason = SkipReason::kFeatureAbsent;
  rs.push_back(skipped);
  EXPECT_DOUBLE_EQ(mean_iou(rs, kAllFeatures), 0.5);
  const Feature no_sclera[] = {Feature::kPupil, Feature::kIris};
  EXPECT_DOUBLE_EQ(mean_iou(rs, no_sclera), 0.75);
}

TEST(MeanIou, NoDataThrows) {
  const std::vector<EvalRecord> rs = {scored(Feature::kPupil, 1.0)};
  try {
    mean_iou(rs, kAllFeatures);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoData);
  }
  try {
    mean_iou({}, kAllFeatures);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoData);
  }
}

}  // namespace
}  // namespace eyesam
