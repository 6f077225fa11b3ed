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

#include "eyesam/sam_backend.hpp"

#include <algorithm>
#include <numeric>

#include <opencv2/dnn.hpp>
#include <opencv2/imgproc.hpp>

#include "eyesam/error.hpp"
#include "eyesam/image_io.hpp"
#include "eyesam/mask_ops.hpp"

namespace eyesam {
namespace {

constexpr float kPixelMean[3] = {123.675f, 116.28f, 103.53f};
constexpr float kPixelStd[3] = {58.395f, 57.12f, 57.375f};

BinaryMask threshold_logits(const cv::Mat& logits, double thr) {
  BinaryMask mask(logits.cols, logits.rows);
  for (int y = 0; y < logits.rows; ++y) {
    const float* row = logits.ptr<float>(y);
    for (int x = 0; x < logits.cols; ++x) {
      if (row[x] > thr) mask.set(x, y);
    }
  }
  return mask;
}

// Decoders export either the single best mask, or the single-output token
// followed by three multimask outputs.
std::vector<std::size_t> pick_outputs(std::size_t available, bool multimask) {
  if (available == 4) {
    if (multimask) return {1, 2, 3};
    return {0};
  }
  std::vector<std::size_t> all(available);
  std::iota(all.begin(), all.end(), 0);
  return all;
}

class OpenCvSamEngine final : public SamEngine {
 public:
  explicit OpenCvSamEngine(const SamConfig& config) {
    for (const auto* p : {&config.encoder_path, &config.decoder_path}) {
      if (p->empty() || !std::filesystem::exists(*p)) {
        throw Error(ErrorCode::kBackendUnavailable,
                    "SAM model file not found: '" + p->string() + "'");
      }
    }
    try {
      encoder_ = cv::dnn::readNetFromONNX(config.encoder_path.string());
      decoder_ = cv::dnn::readNetFromONNX(config.decoder_path.string());
    } catch (const cv::Exception& e) {
      throw Error(ErrorCode::kBackendUnavailable,
                  std::string("cannot import SAM ONNX models: ") + e.what());
    }
  }

  cv::Mat encode(const cv::Mat& blob) override {
    try {
      encoder_.setInput(blob);
      return encoder_.forward().clone();
    } catch (const cv::Exception& e) {
      throw Error(ErrorCode::kBackendError, std::string("SAM encoder failed: ") + e.what());
    }
  }

  SamDecoderOutput decode(const cv::Mat& embedding, const SamPromptTensors& prompts,
                          const SamTransform& t) override {
    const int n = static_cast<int>(prompts.count());
    const int coord_dims[] = {1, n, 2};
    const int label_dims[] = {1, n};
    const int mask_dims[] = {1, 1, 256, 256};
    cv::Mat coords(3, coord_dims, CV_32F, const_cast<float*>(prompts.coords.data()));
    cv::Mat labels(2, label_dims, CV_32F, const_cast<float*>(prompts.labels.data()));
    cv::Mat mask_input(4, mask_dims, CV_32F, cv::Scalar(0));
    cv::Mat has_mask(1, 1, CV_32F, cv::Scalar(0));
    cv::Mat orig_size = (cv::Mat_<float>(1, 2) << static_cast<float>(t.original.height),
                         static_cast<float>(t.original.width));
    try {
      decoder_.setInput(embedding, "image_embeddings");
      decoder_.setInput(coords, "point_coords");
      decoder_.setInput(labels, "point_labels");
      decoder_.setInput(mask_input, "mask_input");
      decoder_.setInput(has_mask, "has_mask_input");
      decoder_.setInput(orig_size, "orig_im_size");
      std::vector<cv::Mat> outs;
      decoder_.forward(outs, std::vector<cv::String>{"masks", "iou_predictions"});
      return unpack(outs.at(0), outs.at(1));
    } catch (const cv::Exception& e) {
      throw Error(ErrorCode::kBackendError, std::string("SAM decoder failed: ") + e.what());
    }
  }

 private:
  static SamDecoderOutput unpack(const cv::Mat& masks, const cv::Mat& ious) {
    if (masks.dims != 4) throw Error(ErrorCode::kBackendError, "unexpected SAM mask rank");
    const int m = masks.size[1];
    const int h = masks.size[2];
    const int w = masks.size[3];
    SamDecoderOutput out;
    for (int i = 0; i < m; ++i) {
      const float* src = masks.ptr<float>(0, i);
      out.logits.push_back(cv::Mat(h, w, CV_32F, const_cast<float*>(src)).clone());
      out.iou_predictions.push_back(ious.ptr<float>(0)[i]);
    }
    return out;
  }

  cv::dnn::Net encoder_;
  cv::dnn::Net decoder_;
};

}  // namespace

std::pair<float, float> SamTransform::apply(double x, double y) const {
  return {static_cast<float>(x * resized.width / original.width),
          static_cast<float>(y * resized.height / original.height)};
}

SamTransform make_sam_transform(ImageSize original, int input_size) {
  if (original.width <= 0 || original.height <= 0 || input_size <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid SAM transform size");
  }
  const double scale =
      static_cast<double>(input_size) / std::max(original.width, original.height);
  SamTransform t;
  t.original = original;
  t.input_size = input_size;
  t.resized = {static_cast<int>(original.width * scale + 0.5),
               static_cast<int>(original.height * scale + 0.5)};
  return t;
}

cv::Mat sam_preprocess(const cv::Mat& image, const SamTransform& t) {
  const cv::Mat rgb = to_rgb8(image);
  if (rgb.cols != t.original.width || rgb.rows != t.original.height) {
    throw Error(ErrorCode::kShapeMismatch, "image does not match SAM transform");
  }
  cv::Mat resized;
  cv::resize(rgb, resized, cv::Size(t.resized.width, t.resized.height), 0, 0,
             cv::INTER_LINEAR);
  const int s = t.input_size;
  const int dims[] = {1, 3, s, s};
  cv::Mat blob(4, dims, CV_32F, cv::Scalar(0));
  for (int c = 0; c < 3; ++c) {
    float* plane = blob.ptr<float>(0, c);
    for (int y = 0; y < resized.rows; ++y) {
      const cv::Vec3b* row = resized.ptr<cv::Vec3b>(y);
      for (int x = 0; x < resized.cols; ++x) {
        plane[static_cast<std::size_t>(y) * s + x] =
            (static_cast<float>(row[x][c]) - kPixelMean[c]) / kPixelStd[c];
      }
    }
  }
  return blob;
}

SamPromptTensors encode_sam_prompts(const PromptSet& prompts, const SamTransform& t) {
  SamPromptTensors out;
  auto push = [&](double x, double y, float label) {
    const auto [mx, my] = t.apply(x, y);
    out.coords.push_back(mx);
    out.coords.push_back(my);
    out.labels.push_back(label);
  };
  for (const auto& p : prompts.points) push(p.x, p.y, p.foreground() ? 1.0f : 0.0f);
  if (prompts.box) {
    push(prompts.box->x_min, prompts.box->y_min, 2.0f);
    push(prompts.box->x_max, prompts.box->y_max, 3.0f);
  } else {
    out.coords.push_back(0.0f);
    out.coords.push_back(0.0f);
    out.labels.push_back(-1.0f);
  }
  return out;
}

cv::Mat postprocess_logits(const cv::Mat& logits, const SamTransform& t) {
  if (logits.cols == t.original.width && logits.rows == t.original.height) return logits;
  cv::Mat full;
  cv::resize(logits, full, cv::Size(t.input_size, t.input_size), 0, 0, cv::INTER_LINEAR);
  const cv::Mat cropped = full(cv::Rect(0, 0, t.resized.width, t.resized.height));
  cv::Mat out;
  cv::resize(cropped, out, cv::Size(t.original.width, t.original.height), 0, 0,
             cv::INTER_LINEAR);
  return out;
}

double stability_score(const cv::Mat& logits, double threshold, double offset) {
  std::int64_t high = 0;
  std::int64_t low = 0;
  for (int y = 0; y < logits.rows; ++y) {
    const float* row = logits.ptr<float>(y);
    for (int x = 0; x < logits.cols; ++x) {
      high += row[x] > threshold + offset;
      low += row[x] > threshold - offset;
    }
  }
  return low == 0 ? 0.0 : static_cast<double>(high) / static_cast<double>(low);
}

std::vector<std::pair<double, double>> build_point_grid(int n_per_side) {
  if (n_per_side <= 0) throw Error(ErrorCode::kInvalidArgument, "grid needs n > 0");
  const double offset = 1.0 / (2.0 * n_per_side);
  std::vector<std::pair<double, double>> grid;
  grid.reserve(static_cast<std::size_t>(n_per_side) * n_per_side);
  for (int j = 0; j < n_per_side; ++j) {
    for (int i = 0; i < n_per_side; ++i) {
      const double step = n_per_side > 1 ? (1.0 - 2.0 * offset) / (n_per_side - 1) : 0.0;
      grid.emplace_back(offset + i * step, offset + j * step);
    }
  }
  return grid;
}

double box_iou(const Box& a, const Box& b) {
  const int ix0 = std::max(a.x_min, b.x_min);
  const int iy0 = std::max(a.y_min, b.y_min);
  const int ix1 = std::min(a.x_max, b.x_max);
  const int iy1 = std::min(a.y_max, b.y_max);
  const double inter =
      ix1 < ix0 || iy1 < iy0 ? 0.0 : double(ix1 - ix0 + 1) * double(iy1 - iy0 + 1);
  const double uni = double(a.width()) * a.height() + double(b.width()) * b.height() - inter;
  return uni > 0 ? inter / uni : 0.0;
}

std::vector<std::size_t> box_nms(const std::vector<Box>& boxes,
                                 const std::vector<double>& scores, double iou_thresh) {
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    bool suppressed = false;
    for (std::size_t k : kept) {
      if (box_iou(boxes[i], boxes[k]) > iou_thresh) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(i);
  }
  return kept;
}

std::unique_ptr<SamEngine> make_opencv_sam_engine(const SamConfig& config) {
  return std::make_unique<OpenCvSamEngine>(config);
}

SamBackend::SamBackend(SamConfig config, std::unique_ptr<SamEngine> engine)
    : config_(std::move(config)), engine_(std::move(engine)) {
  if (!engine_) throw Error(ErrorCode::kBackendUnavailable, "SAM backend has no engine");
  if (config_.variant != "vit_b" && config_.variant != "vit_l" && config_.variant != "vit_h") {
    throw Error(ErrorCode::kConfigError, "unknown SAM variant '" + config_.variant + "'");
  }
}

void SamBackend::do_embed(const cv::Mat& image, std::uint64_t key) {
  Cached c;
  c.transform = make_sam_transform({image.cols, image.rows}, config_.input_size);
  c.embedding = engine_->encode(sam_preprocess(image, c.transform));
  cache_[key] = std::move(c);
}

PredictionSet SamBackend::decode_to_masks(const Cached& c, const PromptSet& prompts,
                                          bool multimask, std::vector<cv::Mat>* logits_out) {
  const SamDecoderOutput out =
      engine_->decode(c.embedding, encode_sam_prompts(prompts, c.transform), c.transform);
  if (out.logits.empty() || out.logits.size() != out.iou_predictions.size()) {
    throw Error(ErrorCode::kBackendError, "SAM decoder returned inconsistent outputs");
  }
  PredictionSet preds;
  for (std::size_t i : pick_outputs(out.logits.size(), multimask)) {
    cv::Mat logits = postprocess_logits(out.logits[i], c.transform);
    preds.masks.push_back(threshold_logits(logits, config_.mask_threshold));
    preds.scores.push_back(out.iou_predictions[i]);
    if (logits_out) logits_out->push_back(std::move(logits));
  }
  return preds;
}

PredictionSet SamBackend::do_predict(std::uint64_t key, ImageSize, const PromptSet& prompts) {
  const auto it = cache_.find(key);
  if (it == cache_.end()) throw Error(ErrorCode::kInvalidHandle, "unknown SAM embedding");
  return decode_to_masks(it->second, prompts, config_.multimask, nullptr);
}

PredictionSet SamBackend::do_segment_everything(const cv::Mat& image) {
  Cached c;
  c.transform = make_sam_transform({image.cols, image.rows}, config_.input_size);
  c.embedding = engine_->encode(sam_preprocess(image, c.transform));

  std::vector<BinaryMask> masks;
  std::vector<double> scores;
  std::vector<Box> boxes;
  for (const auto& [gx, gy] : build_point_grid(config_.points_per_side)) {
    PromptSet ps;
    ps.points.push_back({std::min(static_cast<int>(gx * image.cols), image.cols - 1),
                         std::min(static_cast<int>(gy * image.rows), image.rows - 1),
                         PointLabel::kForeground});
    std::vector<cv::Mat> logits;
    PredictionSet preds = decode_to_masks(c, ps, true, &logits);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (preds.scores[i] <= config_.pred_iou_thresh) continue;
      if (stability_score(logits[i], config_.mask_threshold, config_.stability_score_offset) <
          config_.stability_score_thresh) {
        continue;
      }
      if (preds.masks[i].empty()) continue;
      boxes.push_back(bounding_box(preds.masks[i]));
      masks.push_back(std::move(preds.masks[i]));
      scores.push_back(preds.scores[i]);
    }
  }
  PredictionSet out;
  for (std::size_t i : box_nms(boxes, scores, config_.box_nms_thresh)) {
    out.masks.push_back(std::move(masks[i]));
    out.scores.push_back(scores[i]);
  }
  if (out.masks.empty()) {
    out.masks.emplace_back(image.cols, image.rows);
    out.scores.push_back(0.0);
  }
  return out;
}

}  // namespace eyesam
