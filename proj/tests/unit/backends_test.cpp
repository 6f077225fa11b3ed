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

#include <opencv2/imgproc.hpp>

#include "eyesam/backends.hpp"
#include "eyesam/error.hpp"
#include "eyesam/mask_ops.hpp"
#include "eyesam/metrics.hpp"
#include "eyesam/sam_backend.hpp"
#include "support.hpp"

namespace eyesam {
namespace {

using testing::eye_labels;
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

cv::Mat gray(int w, int h, int seed = 0) {
  cv::Mat m(h, w, CV_8UC1);
  cv::randu(m, seed, 255);
  return m;
}

PredictionSet make_set(std::vector<BinaryMask> masks, std::vector<double> scores) {
  PredictionSet p;
  p.masks = std::move(masks);
  p.scores = std::move(scores);
  return p;
}

TEST(SelectMask, HighestScoreTieLowest) {
  const auto a = rect_mask(4, 4, 0, 0, 0, 0), b = rect_mask(4, 4, 1, 1, 1, 1),
             c = rect_mask(4, 4, 2, 2, 2, 2);
  EXPECT_EQ(select_prompted_mask(make_set({a, b, c}, {0.2, 0.9, 0.4})), b);
  EXPECT_EQ(select_prompted_mask(make_set({a}, {0.1})), a);
  EXPECT_EQ(select_prompted_mask(make_set({a, b}, {0.5, 0.5})), a);
}

TEST(SelectMask, AverageIsMajority) {
  const auto a = rect_mask(4, 1, 0, 0, 1, 0), b = rect_mask(4, 1, 1, 0, 2, 0),
             c = rect_mask(4, 1, 1, 0, 3, 0);
  const BinaryMask avg = average_mask(make_set({a, b, c}, {1, 1, 1}));
  EXPECT_EQ(avg, rect_mask(4, 1, 1, 0, 2, 0));
  EXPECT_EQ(select_mask(make_set({a, b, c}, {1, 1, 1}), MultimaskPolicy::kAverage), avg);
  EXPECT_EQ(*parse_multimask_policy("average"), MultimaskPolicy::kAverage);
  EXPECT_EQ(multimask_policy_name(MultimaskPolicy::kHighestScore), "highest-score");
  EXPECT_FALSE(parse_multimask_policy("mean").has_value());
}

TEST(Oracle, ReturnsFeatureMask) {
  const LabelMap l = eye_labels(40, 30, 20, 15, 14, 8, 3);
  OracleBackend o;
  const cv::Mat img = gray(40, 30);
  const auto h = o.embed(img);
  o.attach_ground_truth(h, l, std::nullopt);
  for (Feature f : kAllFeatures) {
    const BinaryMask truth = feature_mask(l, f);
    // Inferred from the first foreground point.
    SeededRng rng(1);
    PromptSet ps;
    ps.points = sample_points_in_mask(truth, 1, rng);
    const auto preds = o.predict(h, ps);
    ASSERT_EQ(preds.size(), 1u);
    EXPECT_EQ(preds.masks[0], truth);
    EXPECT_EQ(preds.scores[0], 1.0);
    // Inferred from the box.
    PromptSet bx;
    bx.box = bounding_box(truth);
    EXPECT_EQ(o.predict(h, bx).masks[0], truth);
  }
  const auto everything = o.segment_everything(img);
  EXPECT_EQ(everything.size(), 3u);
}

TEST(Oracle, TargetOverridesInference) {
  const LabelMap l = eye_labels(40, 30, 20, 15, 14, 8, 3);
  OracleBackend o;
  const auto h = o.embed(gray(40, 30));
  o.attach_ground_truth(h, l, Feature::kSclera);
  PromptSet ps;
  ps.points.push_back({20, 15, PointLabel::kForeground});  // on the pupil
  EXPECT_EQ(o.predict(h, ps).masks[0], feature_mask(l, Feature::kSclera));
}

TEST(Oracle, WithoutTruthFails) {
  OracleBackend o;
  const auto h = o.embed(gray(10, 10));
  PromptSet ps;
  ps.points.push_back({1, 1});
  EXPECT_EQ(code_of([&] { o.predict(h, ps); }), ErrorCode::kBackendError);
}

TEST(Backend, HandleAndPromptValidation) {
  MockDiskBackend a(3), b(3);
  const auto ha = a.embed(gray(20, 20));
  PromptSet empty;
  EXPECT_EQ(code_of([&] { a.predict(ha, empty); }), ErrorCode::kEmptyPrompt);
  PromptSet ps;
  ps.points.push_back({5, 5});
  EXPECT_EQ(code_of([&] { b.predict(ha, ps); }), ErrorCode::kInvalidHandle);
  a.release(ha);
  EXPECT_EQ(code_of([&] { a.predict(ha, ps); }), ErrorCode::kInvalidHandle);
  const auto h2 = a.embed(gray(20, 20));
  PromptSet outside;
  outside.points.push_back({20, 5});
  EXPECT_EQ(code_of([&] { a.predict(h2, outside); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { a.segment_everything(gray(20, 20)); }), ErrorCode::kCapabilityError);
  EXPECT_EQ(code_of([&] { a.embed(cv::Mat()); }), ErrorCode::kDecodeError);
}

TEST(MockDisk, DiskAroundPoint) {
  MockDiskBackend m(4);
  const auto h = m.embed(gray(30, 30));
  PromptSet ps;
  ps.points.push_back({10, 12});
  const BinaryMask mask = m.predict(h, ps).masks[0];
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 30; ++x) {
      const int d2 = (x - 10) * (x - 10) + (y - 12) * (y - 12);
      ASSERT_EQ(mask.contains(x, y), d2 <= 16) << x << "," << y;
    }
  }
  EXPECT_EQ(m.identity(), "mock-disk/1.0-r4");
}

TEST(MockDisk, Deterministic) {
  MockDiskBackend m(5);
  const cv::Mat img = gray(30, 30);
  PromptSet ps;
  ps.points = {{10, 10}, {12, 12, PointLabel::kBackground}};
  ps.box = Box{2, 2, 20, 20};
  const auto h1 = m.embed(img), h2 = m.embed(img);
  EXPECT_EQ(m.predict(h1, ps).masks, m.predict(h2, ps).masks);
}

TEST(MockBox, FillsBox) {
  MockBoxBackend m;
  const auto h = m.embed(gray(20, 20));
  PromptSet ps;
  ps.box = Box{3, 4, 8, 9};
  EXPECT_EQ(m.predict(h, ps).masks[0], rect_mask(20, 20, 3, 4, 8, 9));
}

TEST(MockGrid, TilesAndPrompted) {
  MockGridBackend g(8);
  const cv::Mat img = gray(20, 12);
  const auto tiles = g.segment_everything(img);
  ASSERT_EQ(tiles.size(), 6u);  // 3 x 2
  EXPECT_EQ(tiles.masks[0], rect_mask(20, 12, 0, 0, 7, 7));
  EXPECT_EQ(tiles.masks[5], rect_mask(20, 12, 16, 8, 19, 11));
  const auto h = g.embed(img);
  PromptSet ps;
  ps.points.push_back({17, 9});
  EXPECT_EQ(g.predict(h, ps).masks[0], tiles.masks[5]);
}

TEST(MakeBackend, KindsAndErrors) {
  EXPECT_EQ(make_backend({})->name(), "oracle");
  BackendConfig c;
  c.kind = "mock-grid";
  c.grid_cell = 4;
  EXPECT_EQ(make_backend(c)->identity(), "mock-grid/1.0-c4");
  c.kind = "nope";
  EXPECT_EQ(code_of([&] { make_backend(c); }), ErrorCode::kConfigError);
  c.kind = "sam";
  c.sam.encoder_path = "/nonexistent/encoder.onnx";
  c.sam.decoder_path = "/nonexistent/decoder.onnx";
  EXPECT_EQ(code_of([&] { make_backend(c); }), ErrorCode::kBackendUnavailable);
  const auto j = backend_config_to_json(backend_config_from_json(
      nlohmann::json{{"kind", "mock-disk"}, {"disk_radius", 7}}));
  EXPECT_EQ(j["disk_radius"], 7);
  EXPECT_EQ(backend_config_from_json("mock-box").kind, "mock-box");
}

// ---- SAM pre/post-processing with a scripted engine ----

TEST(SamTransform, LongestSide) {
  const auto t = make_sam_transform({640, 400});
  EXPECT_EQ(t.resized, (ImageSize{1024, 640}));
  const auto [x, y] = t.apply(320, 200);
  EXPECT_FLOAT_EQ(x, 512.0f);
  EXPECT_FLOAT_EQ(y, 320.0f);
  const auto tall = make_sam_transform({400, 640});
  EXPECT_EQ(tall.resized, (ImageSize{640, 1024}));
}

TEST(SamPreprocess, GrayBecomesThreeEqualChannelsAndPads) {
  cv::Mat img(40, 64, CV_8UC1, cv::Scalar(200));
  const auto t = make_sam_transform({64, 40}, 128);
  const cv::Mat blob = sam_preprocess(img, t);
  ASSERT_EQ(blob.dims, 4);
  EXPECT_EQ(blob.size[1], 3);
  EXPECT_EQ(blob.size[2], 128);
  EXPECT_EQ(blob.size[3], 128);
  const float mean[3] = {123.675f, 116.28f, 103.53f};
  const float stdv[3] = {58.395f, 57.12f, 57.375f};
  for (int c = 0; c < 3; ++c) {
    const float* plane = blob.ptr<float>(0, c);
    EXPECT_NEAR(plane[0], (200 - mean[c]) / stdv[c], 1e-5);
    EXPECT_NEAR(plane[79 * 128 + 127], (200 - mean[c]) / stdv[c], 1e-5);
    EXPECT_EQ(plane[80 * 128 + 5], 0.0f);  // padding rows
  }
}

TEST(SamPrompts, Encoding) {
  const auto t = make_sam_transform({200, 100}, 1024);
  PromptSet ps;
  ps.points = {{10, 20, PointLabel::kForeground}, {30, 40, PointLabel::kBackground}};
  auto enc = encode_sam_prompts(ps, t);
  EXPECT_EQ(enc.labels, (std::vector<float>{1, 0, -1}));
  EXPECT_FLOAT_EQ(enc.coords[0], 10 * 1024.0f / 200);
  ps.box = Box{1, 2, 3, 4};
  enc = encode_sam_prompts(ps, t);
  EXPECT_EQ(enc.labels, (std::vector<float>{1, 0, 2, 3}));
  EXPECT_FLOAT_EQ(enc.coords[6], 3 * 1024.0f / 200);
}

TEST(SamHelpers, GridStabilityNms) {
  const auto g = build_point_grid(32);
  ASSERT_EQ(g.size(), 1024u);
  EXPECT_DOUBLE_EQ(g.front().first, 1.0 / 64);
  EXPECT_DOUBLE_EQ(g.back().second, 1.0 - 1.0 / 64);
  cv::Mat l(2, 2, CV_32F);
  l.at<float>(0, 0) = 5;
  l.at<float>(0, 1) = 0.5f;
  l.at<float>(1, 0) = -0.5f;
  l.at<float>(1, 1) = -5;
  EXPECT_DOUBLE_EQ(stability_score(l, 0.0, 1.0), 1.0 / 3.0);
  const std::vector<Box> boxes = {{0, 0, 9, 9}, {1, 1, 9, 9}, {20, 20, 25, 25}};
  EXPECT_EQ(box_nms(boxes, {0.5, 0.9, 0.7}, 0.7), (std::vector<std::size_t>{1, 2}));
  EXPECT_DOUBLE_EQ(box_iou({0, 0, 1, 1}, {1, 1, 2, 2}), 1.0 / 7.0);
}

// Low-resolution logits: positive inside a disk around the first prompt
// coordinate in model space.
class ScriptedEngine : public SamEngine {
 public:
  int encodes = 0;
  int decodes = 0;
  int outputs = 4;
  cv::Mat encode(const cv::Mat& blob) override {
    ++encodes;
    return blob.clone();
  }
  SamDecoderOutput decode(const cv::Mat&, const SamPromptTensors& p,
                          const SamTransform& t) override {
    ++decodes;
    const double scale = 256.0 / t.input_size;
    const double cx = p.coords[0] * scale, cy = p.coords[1] * scale;
    SamDecoderOutput out;
    for (int k = 0; k < outputs; ++k) {
      cv::Mat l(256, 256, CV_32F);
      const double r = 10.0 + 4.0 * k;
      for (int y = 0; y < 256; ++y) {
        for (int x = 0; x < 256; ++x) {
          const double d = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
          l.at<float>(y, x) = static_cast<float>(4.0 * (r - d));
        }
      }
      out.logits.push_back(l);
      out.iou_predictions.push_back(k == 2 ? 0.97f : 0.5f + 0.1f * k);
    }
    return out;
  }
};

TEST(SamBackendScripted, PredictMapsBackToOriginal) {
  auto engine = std::make_unique<ScriptedEngine>();
  auto* e = engine.get();
  SamBackend sam({}, std::move(engine));
  EXPECT_EQ(sam.identity(), "sam-vit_b/onnx-1");
  const cv::Mat img = gray(640, 400);
  const auto h = sam.embed(img);
  EXPECT_EQ(e->encodes, 1);
  PromptSet ps;
  ps.points.push_back({320, 200});
  const auto preds = sam.predict(h, ps);
  ASSERT_EQ(preds.size(), 3u);  // multimask outputs 1..3
  for (const auto& m : preds.masks) {
    EXPECT_EQ(m.width(), 640);
    EXPECT_EQ(m.height(), 400);
    EXPECT_TRUE(m.contains(320, 200));
  }
  // Output 2 (radius 18 low-res cells = 45 px) has the top score.
  const BinaryMask& best = select_prompted_mask(preds);
  EXPECT_EQ(&best, &preds.masks[1]);
  const double expected_area = 3.14159265 * 45.0 * 45.0;
  EXPECT_NEAR(static_cast<double>(best.count()), expected_area, expected_area * 0.05);
  // Same handle, same prompts, same answer; no re-encode.
  EXPECT_EQ(sam.predict(h, ps).masks, preds.masks);
  EXPECT_EQ(e->encodes, 1);
}

TEST(SamBackendScripted, SingleOutputWhenMultimaskOff) {
  SamConfig cfg;
  cfg.multimask = false;
  SamBackend sam(cfg, std::make_unique<ScriptedEngine>());
  const auto h = sam.embed(gray(100, 80));
  PromptSet ps;
  ps.box = Box{10, 10, 40, 40};
  EXPECT_EQ(sam.predict(h, ps).size(), 1u);
}

TEST(SamBackendScripted, EverythingModeFiltersAndSuppresses) {
  SamConfig cfg;
  cfg.points_per_side = 4;
  auto engine = std::make_unique<ScriptedEngine>();
  auto* e = engine.get();
  SamBackend sam(cfg, std::move(engine));
  const auto all = sam.segment_everything(gray(128, 128));
  EXPECT_EQ(e->decodes, 16);
  // Only output 2 passes the 0.88 score gate; the 4x4 grid disks overlap
  // little, so NMS keeps one mask per grid point.
  EXPECT_EQ(all.size(), 16u);
  for (double s : all.scores) EXPECT_NEAR(s, 0.97, 1e-6);
}

TEST(SamBackend, RejectsUnknownVariant) {
  SamConfig cfg;
  cfg.variant = "vit_x";
  EXPECT_EQ(code_of([&] { SamBackend(cfg, std::make_unique<ScriptedEngine>()); }),
            ErrorCode::kConfigError);
}

}  // namespace
}  // namespace eyesam
