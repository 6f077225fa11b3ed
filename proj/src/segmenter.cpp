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

#include "eyesam/segmenter.hpp"

#include <string>

#include "eyesam/error.hpp"

namespace eyesam {
namespace {

std::atomic<std::uint64_t> g_next_instance{1};

}  // namespace

void PredictionSet::validate(ImageSize size) const {
  if (masks.empty()) throw Error(ErrorCode::kBackendError, "backend returned no masks");
  if (masks.size() != scores.size()) {
    throw Error(ErrorCode::kBackendError, "backend returned " +
                                              std::to_string(masks.size()) + " masks but " +
                                              std::to_string(scores.size()) + " scores");
  }
  for (const auto& m : masks) {
    if (m.size() != size) {
      throw Error(ErrorCode::kBackendError,
                  "backend mask is " + std::to_string(m.width()) + "x" +
                      std::to_string(m.height()) + ", image is " +
                      std::to_string(size.width) + "x" + std::to_string(size.height));
    }
  }
}

std::string_view multimask_policy_name(MultimaskPolicy p) {
  return p == MultimaskPolicy::kHighestScore ? "highest-score" : "average";
}

std::optional<MultimaskPolicy> parse_multimask_policy(std::string_view name) {
  if (name == "highest-score") return MultimaskPolicy::kHighestScore;
  if (name == "average") return MultimaskPolicy::kAverage;
  return std::nullopt;
}

const BinaryMask& select_prompted_mask(const PredictionSet& preds) {
  if (preds.masks.empty() || preds.scores.size() != preds.masks.size()) {
    throw Error(ErrorCode::kInvalidArgument, "empty or inconsistent prediction set");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < preds.scores.size(); ++i) {
    if (preds.scores[i] > preds.scores[best]) best = i;
  }
  return preds.masks[best];
}

BinaryMask average_mask(const PredictionSet& preds) {
  if (preds.masks.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty prediction set");
  }
  const std::size_t n = preds.masks.size();
  const BinaryMask& first = preds.masks.front();
  std::vector<std::uint32_t> votes(first.data().size(), 0);
  for (const auto& m : preds.masks) {
    if (m.size() != first.size()) {
      throw Error(ErrorCode::kShapeMismatch, "prediction masks differ in size");
    }
    const auto d = m.data();
    for (std::size_t i = 0; i < d.size(); ++i) votes[i] += d[i];
  }
  std::vector<std::uint8_t> bits(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) bits[i] = 2 * votes[i] >= n ? 1 : 0;
  return BinaryMask(first.width(), first.height(), bits);
}

BinaryMask select_mask(const PredictionSet& preds, MultimaskPolicy policy) {
  return policy == MultimaskPolicy::kAverage ? average_mask(preds)
                                             : select_prompted_mask(preds);
}

SegmenterBackend::SegmenterBackend() : instance_id_(g_next_instance++) {}

EmbeddingHandle SegmenterBackend::embed(const cv::Mat& image) {
  if (image.empty()) throw Error(ErrorCode::kDecodeError, "empty image");
  std::lock_guard lock(mutex_);
  const std::uint64_t key = next_key_++;
  do_embed(image, key);
  const ImageSize size{image.cols, image.rows};
  live_[key] = size;
  return {instance_id_, key, size};
}

void SegmenterBackend::check_handle(const EmbeddingHandle& handle) const {
  std::lock_guard lock(mutex_);
  const auto it = live_.find(handle.key);
  if (handle.backend_instance != instance_id_ || it == live_.end() ||
      it->second != handle.image_size) {
    throw Error(ErrorCode::kInvalidHandle,
                "embedding handle does not belong to backend " + identity());
  }
}

PredictionSet SegmenterBackend::predict(const EmbeddingHandle& handle,
                                        const PromptSet& prompts) {
  check_handle(handle);
  if (prompts.empty()) {
    throw Error(ErrorCode::kEmptyPrompt, "predict needs at least one point or a box");
  }
  for (const auto& p : prompts.points) {
    if (!handle.image_size.contains(p.x, p.y)) {
      throw Error(ErrorCode::kInvalidArgument, "prompt point outside image");
    }
  }
  if (const auto& b = prompts.box) {
    if (b->x_min > b->x_max || b->y_min > b->y_max ||
        !handle.image_size.contains(b->x_min, b->y_min) ||
        !handle.image_size.contains(b->x_max, b->y_max)) {
      throw Error(ErrorCode::kInvalidArgument, "prompt box outside image or inverted");
    }
  }
  std::lock_guard lock(mutex_);
  PredictionSet out = do_predict(handle.key, handle.image_size, prompts);
  out.validate(handle.image_size);
  return out;
}

PredictionSet SegmenterBackend::segment_everything(const cv::Mat& image) {
  if (!capabilities().supports_everything_mode) {
    throw Error(ErrorCode::kCapabilityError,
                identity() + " does not support everything mode");
  }
  if (image.empty()) throw Error(ErrorCode::kDecodeError, "empty image");
  std::lock_guard lock(mutex_);
  PredictionSet out = do_segment_everything(image);
  out.validate({image.cols, image.rows});
  return out;
}

void SegmenterBackend::release(const EmbeddingHandle& handle) {
  check_handle(handle);
  std::lock_guard lock(mutex_);
  do_release(handle.key);
  live_.erase(handle.key);
}

void SegmenterBackend::attach_ground_truth(const EmbeddingHandle& handle,
                                           const LabelMap&, std::optional<Feature>) {
  check_handle(handle);
}

PredictionSet SegmenterBackend::do_segment_everything(const cv::Mat&) {
  throw Error(ErrorCode::kCapabilityError,
              identity() + " does not support everything mode");
}

void SegmenterBackend::do_release(std::uint64_t) {}

}  // namespace eyesam
