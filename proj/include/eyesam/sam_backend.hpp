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

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <opencv2/core.hpp>

#include "eyesam/segmenter.hpp"

namespace eyesam {

struct SamConfig {
  // vit_b, vit_l or vit_h. Informational: selects the expected checkpoint and
  // is reported in the backend identity.
  std::string variant = "vit_b";
  // ONNX exports of the image encoder and of the prompt encoder + mask
  // decoder (the layout produced by the reference export script).
  std::filesystem::path encoder_path;
  std::filesystem::path decoder_path;
  bool multimask = true;
  int input_size = 1024;
  // Automatic mask generation.
  int points_per_side = 32;
  double pred_iou_thresh = 0.88;
  double stability_score_thresh = 0.95;
  double stability_score_offset = 1.0;
  double box_nms_thresh = 0.7;
  double mask_threshold = 0.0;
};

// Longest-side resize to the square model input.
struct SamTransform {
  ImageSize original;
  ImageSize resized;
  int input_size = 1024;

  // Pixel coordinate in the original image -> model input coordinate.
  std::pair<float, float> apply(double x, double y) const;
};

SamTransform make_sam_transform(ImageSize original, int input_size = 1024);

// 1x3xSxS float blob: RGB, per-channel normalized with the SA-1B mean/std,
// resized so the longest side is S, zero-padded bottom/right.
cv::Mat sam_preprocess(const cv::Mat& image, const SamTransform& t);

struct SamPromptTensors {
  std::vector<float> coords;  // N x 2, model input coordinates
  std::vector<float> labels;  // N: 1 fg, 0 bg, 2/3 box corners, -1 padding
  std::size_t count() const { return labels.size(); }
};

// Points keep their labels; a box becomes two corner points labelled 2 and
// 3. Without a box a (0,0) padding point labelled -1 is appended.
SamPromptTensors encode_sam_prompts(const PromptSet& prompts, const SamTransform& t);

struct SamDecoderOutput {
  std::vector<cv::Mat> logits;        // CV_32F, original or low resolution
  std::vector<float> iou_predictions;
};

// Upscales low-resolution logits to the padded model input, removes the
// padding and resizes to the original image. Logits already at the original
// size pass through.
cv::Mat postprocess_logits(const cv::Mat& logits, const SamTransform& t);

// |logits > thr + offset| / |logits > thr - offset|, 0 when the denominator
// is zero.
double stability_score(const cv::Mat& logits, double threshold, double offset);

// Regular n x n grid of normalized (x, y) points at cell centers.
std::vector<std::pair<double, double>> build_point_grid(int n_per_side);

// Greedy non-maximum suppression on box IoU; returns kept indices in
// descending score order (ties by lower index).
std::vector<std::size_t> box_nms(const std::vector<Box>& boxes,
                                 const std::vector<double>& scores, double iou_thresh);

double box_iou(const Box& a, const Box& b);

// Runs the networks. Kept separate from SamBackend so pre- and
// post-processing can be exercised without model files.
class SamEngine {
 public:
  virtual ~SamEngine() = default;
  virtual cv::Mat encode(const cv::Mat& blob) = 0;
  virtual SamDecoderOutput decode(const cv::Mat& embedding, const SamPromptTensors& prompts,
                                  const SamTransform& t) = 0;
};

// OpenCV DNN runner for ONNX exports. Throws kBackendUnavailable when the
// model files are missing or cannot be imported.
std::unique_ptr<SamEngine> make_opencv_sam_engine(const SamConfig& config);

class SamBackend final : public SegmenterBackend {
 public:
  SamBackend(SamConfig config, std::unique_ptr<SamEngine> engine);

  std::string name() const override { return "sam-" + config_.variant; }
  std::string version() const override { return "onnx-1"; }
  BackendCapabilities capabilities() const override { return {true, config_.multimask}; }

  const SamConfig& config() const { return config_; }

 protected:
  void do_embed(const cv::Mat& image, std::uint64_t key) override;
  PredictionSet do_predict(std::uint64_t key, ImageSize size,
                           const PromptSet& prompts) override;
  PredictionSet do_segment_everything(const cv::Mat& image) override;
  void do_release(std::uint64_t key) override { cache_.erase(key); }

 private:
  struct Cached {
    cv::Mat embedding;
    SamTransform transform;
  };
  PredictionSet decode_to_masks(const Cached& c, const PromptSet& prompts, bool multimask,
                                std::vector<cv::Mat>* logits_out);

  SamConfig config_;
  std::unique_ptr<SamEngine> engine_;
  std::map<std::uint64_t, Cached> cache_;
};

}  // namespace eyesam
