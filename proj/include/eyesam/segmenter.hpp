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

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/core.hpp>

#include "eyesam/binary_mask.hpp"
#include "eyesam/label_map.hpp"
#include "eyesam/prompts.hpp"

namespace eyesam {

struct BackendCapabilities {
  bool supports_everything_mode = false;
  bool multimask = false;
};

// Opaque token for a cached encoder output. Only valid for the backend
// instance that issued it.
struct EmbeddingHandle {
  std::uint64_t backend_instance = 0;
  std::uint64_t key = 0;
  ImageSize image_size;

  friend bool operator==(const EmbeddingHandle&, const EmbeddingHandle&) = default;
};

// Candidate masks with parallel predicted-quality scores. Never empty.
struct PredictionSet {
  std::vector<BinaryMask> masks;
  std::vector<double> scores;

  std::size_t size() const { return masks.size(); }
  // Throws kBackendError unless masks/scores are parallel, nonempty and all
  // masks have `size`.
  void validate(ImageSize size) const;
};

enum class MultimaskPolicy { kHighestScore, kAverage };

std::string_view multimask_policy_name(MultimaskPolicy p);
std::optional<MultimaskPolicy> parse_multimask_policy(std::string_view name);

// Highest-scoring mask; ties go to the lowest index.
const BinaryMask& select_prompted_mask(const PredictionSet& preds);

// Per-pixel majority over all candidate masks (a pixel is kept when at least
// half of the masks contain it).
BinaryMask average_mask(const PredictionSet& preds);

BinaryMask select_mask(const PredictionSet& preds, MultimaskPolicy policy);

// Backend-neutral promptable segmenter.
//
// The public entry points validate arguments, serialize calls on one
// instance, and check that outputs have original-image dimensions; concrete
// backends implement the do_* hooks.
class SegmenterBackend {
 public:
  SegmenterBackend();
  virtual ~SegmenterBackend() = default;
  SegmenterBackend(const SegmenterBackend&) = delete;
  SegmenterBackend& operator=(const SegmenterBackend&) = delete;

  virtual std::string name() const = 0;
  virtual std::string version() const = 0;
  virtual BackendCapabilities capabilities() const = 0;
  std::string identity() const { return name() + "/" + version(); }

  EmbeddingHandle embed(const cv::Mat& image);
  PredictionSet predict(const EmbeddingHandle& handle, const PromptSet& prompts);
  PredictionSet segment_everything(const cv::Mat& image);
  void release(const EmbeddingHandle& handle);

  // Ground-truth side channel used by the evaluation harness. Real models
  // ignore it; the oracle answers from it.
  virtual void attach_ground_truth(const EmbeddingHandle& handle,
                                   const LabelMap& labels,
                                   std::optional<Feature> target);

 protected:
  virtual void do_embed(const cv::Mat& image, std::uint64_t key) = 0;
  virtual PredictionSet do_predict(std::uint64_t key, ImageSize size,
                                   const PromptSet& prompts) = 0;
  virtual PredictionSet do_segment_everything(const cv::Mat& image);
  virtual void do_release(std::uint64_t key);

  void check_handle(const EmbeddingHandle& handle) const;

  // Held around every do_* call.
  mutable std::recursive_mutex mutex_;

 private:
  const std::uint64_t instance_id_;
  std::uint64_t next_key_ = 1;
  std::map<std::uint64_t, ImageSize> live_;
};

}  // namespace eyesam
