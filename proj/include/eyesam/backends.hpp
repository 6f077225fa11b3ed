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

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"

#include "eyesam/sam_backend.hpp"
#include "eyesam/segmenter.hpp"

namespace eyesam {

// Returns the ground-truth mask of the prompted feature. The feature is the
// `target` passed to attach_ground_truth when given; otherwise it is the
// class under the first foreground point, or the feature whose tight box
// overlaps the prompt box best. Everything mode returns one mask per
// feature present in the labels. Without attached labels, calls fail with
// kBackendError.
class OracleBackend final : public SegmenterBackend {
 public:
  std::string name() const override { return "oracle"; }
  std::string version() const override { return "1.0"; }
  BackendCapabilities capabilities() const override { return {true, false}; }

  void attach_ground_truth(const EmbeddingHandle& handle, const LabelMap& labels,
                           std::optional<Feature> target) override;

 protected:
  void do_embed(const cv::Mat& image, std::uint64_t key) override;
  PredictionSet do_predict(std::uint64_t key, ImageSize size,
                           const PromptSet& prompts) override;
  PredictionSet do_segment_everything(const cv::Mat& image) override;
  void do_release(std::uint64_t key) override;

 private:
  struct Truth {
    LabelMap labels;
    std::optional<Feature> target;
  };
  std::map<std::uint64_t, std::string> digests_;
  std::map<std::uint64_t, Truth> truth_;
  std::map<std::string, LabelMap> by_digest_;
};

// Union of radius-r disks around foreground points (box center when there
// are none), minus radius-r/2 disks around background points, clipped to the
// box when one is given.
class MockDiskBackend final : public SegmenterBackend {
 public:
  explicit MockDiskBackend(int radius = 10);
  std::string name() const override { return "mock-disk"; }
  std::string version() const override { return "1.0-r" + std::to_string(radius_); }
  BackendCapabilities capabilities() const override { return {false, false}; }

 protected:
  void do_embed(const cv::Mat&, std::uint64_t) override {}
  PredictionSet do_predict(std::uint64_t key, ImageSize size,
                           const PromptSet& prompts) override;

 private:
  int radius_;
};

// Fills the prompt box, or the bounding box of the foreground points.
class MockBoxBackend final : public SegmenterBackend {
 public:
  std::string name() const override { return "mock-box"; }
  std::string version() const override { return "1.0"; }
  BackendCapabilities capabilities() const override { return {false, false}; }

 protected:
  void do_embed(const cv::Mat&, std::uint64_t) override {}
  PredictionSet do_predict(std::uint64_t key, ImageSize size,
                           const PromptSet& prompts) override;
};

// Fixed tiling into cell x cell squares (edge tiles truncated), row-major.
// Everything mode returns every tile; predict returns the tile under the
// first foreground point, or under the box center.
class MockGridBackend final : public SegmenterBackend {
 public:
  explicit MockGridBackend(int cell = 16);
  std::string name() const override { return "mock-grid"; }
  std::string version() const override { return "1.0-c" + std::to_string(cell_); }
  BackendCapabilities capabilities() const override { return {true, false}; }

  static std::vector<BinaryMask> tiles(ImageSize size, int cell);

 protected:
  void do_embed(const cv::Mat&, std::uint64_t) override {}
  PredictionSet do_predict(std::uint64_t key, ImageSize size,
                           const PromptSet& prompts) override;
  PredictionSet do_segment_everything(const cv::Mat& image) override;

 private:
  int cell_;
};

struct BackendConfig {
  // oracle | mock-disk | mock-box | mock-grid | sam
  std::string kind = "oracle";
  int disk_radius = 10;
  int grid_cell = 16;
  SamConfig sam;
};

BackendConfig backend_config_from_json(const nlohmann::json& j);
nlohmann::json backend_config_to_json(const BackendConfig& c);

// Throws kConfigError for an unknown kind and kBackendUnavailable when a
// model cannot be loaded.
std::unique_ptr<SegmenterBackend> make_backend(const BackendConfig& config);

}  // namespace eyesam
