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

#include "eyesam/backends.hpp"

#include <algorithm>

#include "eyesam/error.hpp"
#include "eyesam/image_io.hpp"
#include "eyesam/mask_ops.hpp"
#include "eyesam/sam_backend.hpp"

namespace eyesam {
namespace {

PredictionSet single(BinaryMask mask, double score = 1.0) {
  PredictionSet p;
  p.masks.push_back(std::move(mask));
  p.scores.push_back(score);
  return p;
}

std::pair<int, int> anchor(const PromptSet& prompts) {
  for (const auto& p : prompts.points) {
    if (p.foreground()) return {p.x, p.y};
  }
  if (prompts.box) {
    return {(prompts.box->x_min + prompts.box->x_max) / 2,
            (prompts.box->y_min + prompts.box->y_max) / 2};
  }
  return {prompts.points.front().x, prompts.points.front().y};
}

void paint_disk(BinaryMask& mask, int cx, int cy, int r, bool value) {
  for (int y = std::max(0, cy - r); y <= std::min(mask.height() - 1, cy + r); ++y) {
    for (int x = std::max(0, cx - r); x <= std::min(mask.width() - 1, cx + r); ++x) {
      const int dx = x - cx;
      const int dy = y - cy;
      if (dx * dx + dy * dy <= r * r) mask.set(x, y, value);
    }
  }
}

}  // namespace

void OracleBackend::attach_ground_truth(const EmbeddingHandle& handle,
                                        const LabelMap& labels,
                                        std::optional<Feature> target) {
  check_handle(handle);
  if (labels.size() != handle.image_size) {
    throw Error(ErrorCode::kShapeMismatch, "ground truth does not match image size");
  }
  std::lock_guard lock(mutex_);
  truth_[handle.key] = {labels, target};
  by_digest_[digests_.at(handle.key)] = labels;
}

void OracleBackend::do_embed(const cv::Mat& image, std::uint64_t key) {
  digests_[key] = image_digest(image);
}

void OracleBackend::do_release(std::uint64_t key) {
  truth_.erase(key);
  digests_.erase(key);
}

PredictionSet OracleBackend::do_predict(std::uint64_t key, ImageSize,
                                        const PromptSet& prompts) {
  const auto it = truth_.find(key);
  if (it == truth_.end()) {
    throw Error(ErrorCode::kBackendError, "oracle has no ground truth for this image");
  }
  const LabelMap& labels = it->second.labels;
  std::optional<Feature> feature = it->second.target;
  if (!feature) {
    for (const auto& p : prompts.points) {
      if (!p.foreground()) continue;
      const auto code = static_cast<EyeClass>(labels.at(p.x, p.y));
      for (Feature f : kAllFeatures) {
        if (feature_class(f) == code) feature = f;
      }
      break;
    }
  }
  if (!feature && prompts.box) {
    double best = 0.0;
    for (Feature f : kAllFeatures) {
      const BinaryMask m = feature_mask(labels, f);
      if (m.empty()) continue;
      const double overlap = box_iou(bounding_box(m), *prompts.box);
      if (overlap > best) {
        best = overlap;
        feature = f;
      }
    }
  }
  if (!feature) return single(BinaryMask(labels.size()), 0.0);
  return single(feature_mask(labels, *feature));
}

PredictionSet OracleBackend::do_segment_everything(const cv::Mat& image) {
  const auto it = by_digest_.find(image_digest(image));
  if (it == by_digest_.end()) {
    throw Error(ErrorCode::kBackendError, "oracle has no ground truth for this image");
  }
  PredictionSet out;
  for (Feature f : kAllFeatures) {
    BinaryMask m = feature_mask(it->second, f);
    if (m.empty()) continue;
    out.masks.push_back(std::move(m));
    out.scores.push_back(1.0);
  }
  if (out.masks.empty()) return single(BinaryMask(it->second.size()), 0.0);
  return out;
}

MockDiskBackend::MockDiskBackend(int radius) : radius_(radius) {
  if (radius < 0) throw Error(ErrorCode::kConfigError, "disk radius must be >= 0");
}

PredictionSet MockDiskBackend::do_predict(std::uint64_t, ImageSize size,
                                          const PromptSet& prompts) {
  BinaryMask mask(size);
  bool any_fg = false;
  for (const auto& p : prompts.points) {
    if (!p.foreground()) continue;
    paint_disk(mask, p.x, p.y, radius_, true);
    any_fg = true;
  }
  if (!any_fg && prompts.box) {
    const auto [cx, cy] = anchor(prompts);
    paint_disk(mask, cx, cy, radius_, true);
  }
  for (const auto& p : prompts.points) {
    if (!p.foreground()) paint_disk(mask, p.x, p.y, radius_ / 2, false);
  }
  if (prompts.box) {
    for (const auto& [x, y] : mask.foreground()) {
      if (!prompts.box->contains(x, y)) mask.set(x, y, false);
    }
  }
  return single(std::move(mask));
}

PredictionSet MockBoxBackend::do_predict(std::uint64_t, ImageSize size,
                                         const PromptSet& prompts) {
  Box box;
  if (prompts.box) {
    box = *prompts.box;
  } else {
    BinaryMask pts(size);
    for (const auto& p : prompts.points) {
      if (p.foreground()) pts.set(p.x, p.y);
    }
    if (pts.empty()) return single(BinaryMask(size), 0.0);
    box = bounding_box(pts);
  }
  BinaryMask mask(size);
  for (int y = box.y_min; y <= box.y_max; ++y) {
    for (int x = box.x_min; x <= box.x_max; ++x) mask.set(x, y);
  }
  return single(std::move(mask));
}

MockGridBackend::MockGridBackend(int cell) : cell_(cell) {
  if (cell <= 0) throw Error(ErrorCode::kConfigError, "grid cell must be positive");
}

std::vector<BinaryMask> MockGridBackend::tiles(ImageSize size, int cell) {
  std::vector<BinaryMask> out;
  for (int ty = 0; ty < size.height; ty += cell) {
    for (int tx = 0; tx < size.width; tx += cell) {
      BinaryMask m(size);
      for (int y = ty; y < std::min(ty + cell, size.height); ++y) {
        for (int x = tx; x < std::min(tx + cell, size.width); ++x) m.set(x, y);
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

PredictionSet MockGridBackend::do_predict(std::uint64_t, ImageSize size,
                                          const PromptSet& prompts) {
  const auto [x, y] = anchor(prompts);
  const int cols = (size.width + cell_ - 1) / cell_;
  auto all = tiles(size, cell_);
  return single(std::move(all[static_cast<std::size_t>((y / cell_) * cols + x / cell_)]));
}

PredictionSet MockGridBackend::do_segment_everything(const cv::Mat& image) {
  PredictionSet out;
  out.masks = tiles({image.cols, image.rows}, cell_);
  out.scores.assign(out.masks.size(), 1.0);
  return out;
}

BackendConfig backend_config_from_json(const nlohmann::json& j) {
  BackendConfig c;
  try {
    if (j.is_string()) {
      c.kind = j.get<std::string>();
      return c;
    }
    c.kind = j.value("kind", c.kind);
    c.disk_radius = j.value("disk_radius", c.disk_radius);
    c.grid_cell = j.value("grid_cell", c.grid_cell);
    if (j.contains("sam")) {
      const auto& s = j.at("sam");
      c.sam.variant = s.value("variant", c.sam.variant);
      c.sam.encoder_path = s.value("encoder", std::string());
      c.sam.decoder_path = s.value("decoder", std::string());
      c.sam.multimask = s.value("multimask", c.sam.multimask);
      c.sam.points_per_side = s.value("points_per_side", c.sam.points_per_side);
      c.sam.pred_iou_thresh = s.value("pred_iou_thresh", c.sam.pred_iou_thresh);
      c.sam.stability_score_thresh =
          s.value("stability_score_thresh", c.sam.stability_score_thresh);
      c.sam.box_nms_thresh = s.value("box_nms_thresh", c.sam.box_nms_thresh);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("bad backend config: ") + e.what());
  }
  return c;
}

nlohmann::json backend_config_to_json(const BackendConfig& c) {
  nlohmann::json j{{"kind", c.kind}};
  if (c.kind == "mock-disk") j["disk_radius"] = c.disk_radius;
  if (c.kind == "mock-grid") j["grid_cell"] = c.grid_cell;
  if (c.kind == "sam") {
    j["sam"] = {{"variant", c.sam.variant},
                {"encoder", c.sam.encoder_path.string()},
                {"decoder", c.sam.decoder_path.string()},
                {"multimask", c.sam.multimask},
                {"points_per_side", c.sam.points_per_side},
                {"pred_iou_thresh", c.sam.pred_iou_thresh},
                {"stability_score_thresh", c.sam.stability_score_thresh},
                {"box_nms_thresh", c.sam.box_nms_thresh}};
  }
  return j;
}

std::unique_ptr<SegmenterBackend> make_backend(const BackendConfig& config) {
  if (config.kind == "oracle") return std::make_unique<OracleBackend>();
  if (config.kind == "mock-disk") return std::make_unique<MockDiskBackend>(config.disk_radius);
  if (config.kind == "mock-box") return std::make_unique<MockBoxBackend>();
  if (config.kind == "mock-grid") return std::make_unique<MockGridBackend>(config.grid_cell);
  if (config.kind == "sam") {
    return std::make_unique<SamBackend>(config.sam, make_opencv_sam_engine(config.sam));
  }
  throw Error(ErrorCode::kConfigError, "unknown backend kind '" + config.kind + "'");
}

}  // namespace eyesam
