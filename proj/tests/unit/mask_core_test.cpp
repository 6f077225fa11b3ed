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
#include <map>

#include "eyesam/error.hpp"
#include "eyesam/mask_ops.hpp"
#include "support.hpp"

namespace eyesam {
namespace {

using testing::brute_boundary;
using testing::pixel_set;
using testing::random_mask;
using testing::rect_mask;

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no eyesam::Error thrown";
  return ErrorCode::kIoError;
}

TEST(BinaryMask, MembershipAndBounds) {
  BinaryMask m(4, 3);
  m.set(3, 2);
  EXPECT_TRUE(m.contains(3, 2));
  EXPECT_FALSE(m.contains(4, 2));
  EXPECT_FALSE(m.contains(-1, 0));
  EXPECT_EQ(m.count(), 1);
  EXPECT_EQ(code_of([&] { m.set(4, 0); }), ErrorCode::kInvalidArgument);
}

TEST(BoundingBox, SinglePixel) {
  const std::pair<int, int> px[] = {{5, 7}};
  EXPECT_EQ(bounding_box(BinaryMask::from_pixels(10, 10, px)), (Box{5, 7, 5, 7}));
}

TEST(BoundingBox, FullFrame) {
  EXPECT_EQ(bounding_box(rect_mask(10, 10, 0, 0, 9, 9)), (Box{0, 0, 9, 9}));
}

TEST(BoundingBox, LShape) {
  const std::pair<int, int> px[] = {{1, 1}, {1, 4}, {3, 1}};
  EXPECT_EQ(bounding_box(BinaryMask::from_pixels(8, 8, px)), (Box{1, 1, 3, 4}));
}

TEST(BoundingBox, EmptyThrows) {
  EXPECT_EQ(code_of([] { bounding_box(BinaryMask(3, 3)); }), ErrorCode::kEmptyMask);
}

TEST(BoundingBox, TightAgainstEnumeration) {
  SeededRng rng(11);
  for (int t = 0; t < 300; ++t) {
    const BinaryMask m = random_mask(rng, 1 + static_cast<int>(rng.uniform_index(20)),
                                     1 + static_cast<int>(rng.uniform_index(20)));
    if (m.empty()) continue;
    int x0 = 1 << 30, y0 = 1 << 30, x1 = -1, y1 = -1;
    for (const auto& [x, y] : pixel_set(m)) {
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
    ASSERT_EQ(bounding_box(m), (Box{x0, y0, x1, y1}));
  }
}

TEST(ScaleBox, DoublesAboutCenter) {
  EXPECT_EQ(scale_box({10, 10, 20, 20}, 2.0, {100, 100}), (Box{5, 5, 25, 25}));
}

TEST(ScaleBox, IdentityAtOne) {
  SeededRng rng(3);
  for (int t = 0; t < 200; ++t) {
    const int x0 = static_cast<int>(rng.uniform_index(50));
    const int y0 = static_cast<int>(rng.uniform_index(50));
    const Box b{x0, y0, x0 + static_cast<int>(rng.uniform_index(50)),
                y0 + static_cast<int>(rng.uniform_index(50))};
    ASSERT_EQ(scale_box(b, 1.0, {100, 100}), b);
  }
}

TEST(ScaleBox, ClampsToBounds) {
  EXPECT_EQ(scale_box({0, 0, 10, 10}, 2.0, {12, 12}), (Box{0, 0, 11, 11}));
}

TEST(ScaleBox, RejectsNonPositiveFactor) {
  EXPECT_EQ(code_of([] { scale_box({0, 0, 1, 1}, 0.0, {5, 5}); }), ErrorCode::kInvalidFactor);
  EXPECT_EQ(code_of([] { scale_box({0, 0, 1, 1}, -1.0, {5, 5}); }), ErrorCode::kInvalidFactor);
}

TEST(ScaleBox, HalfPixelRoundsAwayFromCenter) {
  // Span [2,3], center 2.5, half-span 0.5 -> factor 2 gives [1.5, 3.5] -> [1, 4].
  EXPECT_EQ(scale_box({2, 2, 3, 3}, 2.0, {10, 10}), (Box{1, 1, 4, 4}));
}

TEST(PerturbBox, ZeroFractionIsIdentity) {
  SeededRng rng(5);
  const Box b{3, 4, 30, 17};
  EXPECT_EQ(perturb_box(b, 0.0, rng, {64, 64}), b);
}

TEST(PerturbBox, BoundedDisplacement) {
  SeededRng rng(42);
  const Box b{10, 10, 20, 20};
  for (int i = 0; i < 1000; ++i) {
    const Box p = perturb_box(b, 0.2, rng, {100, 100});
    ASSERT_LE(std::abs(p.x_min - 10), 2);
    ASSERT_LE(std::abs(p.y_min - 10), 2);
    ASSERT_LE(std::abs(p.x_max - 20), 2);
    ASSERT_LE(std::abs(p.y_max - 20), 2);
  }
}

TEST(PerturbBox, DeterministicForSeed) {
  SeededRng a(42), b(42);
  EXPECT_EQ(perturb_box({10, 10, 20, 20}, 0.1, a, {64, 64}),
            perturb_box({10, 10, 20, 20}, 0.1, b, {64, 64}));
}

TEST(PerturbBox, RejectsBadFraction) {
  SeededRng rng(1);
  EXPECT_EQ(code_of([&] { perturb_box({0, 0, 1, 1}, 1.0, rng, {5, 5}); }),
            ErrorCode::kInvalidFraction);
  EXPECT_EQ(code_of([&] { perturb_box({0, 0, 1, 1}, -0.01, rng, {5, 5}); }),
            ErrorCode::kInvalidFraction);
}

TEST(PerturbBox, OrderedAndInsideBoundsForTinyBoxes) {
  SeededRng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const int x = static_cast<int>(rng.uniform_index(8));
    const int y = static_cast<int>(rng.uniform_index(8));
    const Box p = perturb_box({x, y, x + 1, y}, 0.9, rng, {8, 8});
    ASSERT_LE(p.x_min, p.x_max);
    ASSERT_LE(p.y_min, p.y_max);
    ASSERT_GE(p.x_min, 0);
    ASSERT_GE(p.y_min, 0);
    ASSERT_LT(p.x_max, 8);
    ASSERT_LT(p.y_max, 8);
  }
}

TEST(SamplePoints, SinglePixelRepeats) {
  const std::pair<int, int> px[] = {{2, 3}};
  SeededRng rng(1);
  const auto pts = sample_points_in_mask(BinaryMask::from_pixels(5, 5, px), 4, rng);
  ASSERT_EQ(pts.size(), 4u);
  for (const auto& p : pts) {
    EXPECT_EQ(p, (Point{2, 3, PointLabel::kForeground}));
  }
}

TEST(SamplePoints, OnMaskAndDeterministic) {
  SeededRng gen(77);
  for (int t = 0; t < 200; ++t) {
    const BinaryMask m = random_mask(gen, 16, 12);
    if (m.empty()) continue;
    SeededRng a(t), b(t);
    const auto pa = sample_points_in_mask(m, 4, a);
    ASSERT_EQ(pa, sample_points_in_mask(m, 4, b));
    for (const auto& p : pa) ASSERT_TRUE(m.contains(p.x, p.y));
  }
}

TEST(SamplePoints, EmptyMaskThrows) {
  SeededRng rng(1);
  EXPECT_EQ(code_of([&] { sample_points_in_mask(BinaryMask(4, 4), 1, rng); }),
            ErrorCode::kEmptyMask);
}

TEST(SamplePoints, RoughlyUniform) {
  const BinaryMask m = rect_mask(4, 1, 0, 0, 3, 0);
  SeededRng rng(123);
  std::map<int, int> hist;
  for (const auto& p : sample_points_in_mask(m, 40000, rng)) ++hist[p.x];
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(hist[x], 10000, 400);
}

TEST(SampleBackground, ForcedSinglePixel) {
  BinaryMask m = rect_mask(10, 10, 2, 2, 5, 5);
  m.set(4, 3, false);
  SeededRng rng(2);
  const auto pts = sample_points_outside_mask_in_box(m, {2, 2, 5, 5}, 3, rng);
  ASSERT_EQ(pts.size(), 3u);
  for (const auto& p : pts) EXPECT_EQ(p, (Point{4, 3, PointLabel::kBackground}));
}

TEST(SampleBackground, FullyCoveredThrows) {
  SeededRng rng(2);
  const BinaryMask m = rect_mask(10, 10, 2, 2, 5, 5);
  EXPECT_EQ(code_of([&] { sample_points_outside_mask_in_box(m, {2, 2, 5, 5}, 1, rng); }),
            ErrorCode::kNoBackgroundAvailable);
}

TEST(SampleBackground, InsideBoxOffMask) {
  SeededRng gen(31);
  for (int t = 0; t < 300; ++t) {
    const BinaryMask m = random_mask(gen, 14, 14);
    const int x0 = static_cast<int>(gen.uniform_index(14));
    const int y0 = static_cast<int>(gen.uniform_index(14));
    const Box b{x0, y0, x0 + static_cast<int>(gen.uniform_index(14 - x0)),
                y0 + static_cast<int>(gen.uniform_index(14 - y0))};
    bool any = false;
    for (int y = b.y_min; y <= b.y_max; ++y) {
      for (int x = b.x_min; x <= b.x_max; ++x) any |= !m.contains(x, y);
    }
    SeededRng rng(t);
    if (!any) {
      EXPECT_EQ(code_of([&] { sample_points_outside_mask_in_box(m, b, 4, rng); }),
                ErrorCode::kNoBackgroundAvailable);
      continue;
    }
    for (const auto& p : sample_points_outside_mask_in_box(m, b, 4, rng)) {
      ASSERT_TRUE(b.contains(p.x, p.y));
      ASSERT_FALSE(m.contains(p.x, p.y));
      ASSERT_FALSE(p.foreground());
    }
  }
}

TEST(Boundary, FilledSquarePerimeter) {
  const BinaryMask m = rect_mask(7, 7, 2, 2, 4, 4);
  const auto b = boundary_pixels(m);
  EXPECT_EQ(b.size(), 8u);
  EXPECT_EQ(std::count(b.begin(), b.end(), std::make_pair(3, 3)), 0);
}

TEST(Boundary, SinglePixel) {
  const std::pair<int, int> px[] = {{1, 1}};
  const auto b = boundary_pixels(BinaryMask::from_pixels(3, 3, px));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], std::make_pair(1, 1));
}

TEST(Boundary, FullImageIsOuterRing) {
  const auto b = boundary_pixels(rect_mask(6, 5, 0, 0, 5, 4));
  EXPECT_EQ(b.size(), static_cast<std::size_t>(2 * 6 + 2 * 5 - 4));
}

TEST(Boundary, MatchesEnumeration) {
  SeededRng rng(8);
  for (int t = 0; t < 300; ++t) {
    const BinaryMask m = random_mask(rng, 1 + static_cast<int>(rng.uniform_index(24)),
                                     1 + static_cast<int>(rng.uniform_index(24)));
    const auto b = boundary_pixels(m);
    ASSERT_EQ(testing::PixelSet(b.begin(), b.end()), brute_boundary(m));
  }
}

TEST(Rng, KnownStandardSequence) {
  // mt19937_64 default-seed 10000th output is fixed by the standard.
  SeededRng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, UniformIndexInRange) {
  SeededRng rng(1);
  for (std::uint64_t n : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL, (1ULL << 63) + 5}) {
    for (int i = 0; i < 200; ++i) ASSERT_LT(rng.uniform_index(n), n);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform_unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, CellSeedsDependOnEveryKey) {
  const auto base = derive_cell_seed(1, "img", "pupil", "P1");
  EXPECT_EQ(base, derive_cell_seed(1, "img", "pupil", "P1"));
  EXPECT_NE(base, derive_cell_seed(2, "img", "pupil", "P1"));
  EXPECT_NE(base, derive_cell_seed(1, "img2", "pupil", "P1"));
  EXPECT_NE(base, derive_cell_seed(1, "img", "iris", "P1"));
  EXPECT_NE(base, derive_cell_seed(1, "img", "pupil", "P4"));
  // Key boundaries matter.
  EXPECT_NE(derive_cell_seed(1, "ab", "c", "d"), derive_cell_seed(1, "a", "bc", "d"));
}

}  // namespace
}  // namespace eyesam
