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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "json.hpp"

#include "eyesam/dataset.hpp"
#include "eyesam/error.hpp"
#include "eyesam/label_map.hpp"
#include "eyesam/prompts.hpp"
#include "eyesam/segmenter.hpp"

namespace eyesam {

// Wire format for prompts:
//   {"points": [{"x": 3, "y": 4, "label": 1}, ...],   // 1 fg, 0 bg
//    "box": [x_min, y_min, x_max, y_max]}             // optional
nlohmann::json prompts_to_json(const PromptSet& prompts);
PromptSet prompts_from_json(const nlohmann::json& j);  // throws kInvalidArgument

struct CommitEntry {
  Feature feature;
  BinaryMask mask;
  PromptSet prompts;
};

struct SessionInfo {
  std::string id;
  std::string image_ref;
  std::string digest;
  ImageSize size;
  bool cached_embedding = false;
};

struct Prediction {
  BinaryMask mask;
  double score = 0;
};

// Labeling sessions over one shared backend. Calls on distinct sessions may
// run concurrently; calls on one session are serialized.
class AnnotationService {
 public:
  explicit AnnotationService(std::unique_ptr<SegmenterBackend> backend,
                             std::optional<DatasetManifest> dataset = std::nullopt);
  ~AnnotationService();

  const SegmenterBackend& backend() const { return *backend_; }
  const std::optional<DatasetManifest>& dataset() const { return dataset_; }

  // Throws kDecodeError (undecodable), kBackendUnavailable/kBackendError.
  SessionInfo create_session(std::span<const std::uint8_t> image_bytes);
  // Throws kInvalidHandle for an unknown item id, kNoData without a dataset.
  SessionInfo create_session_from_item(const std::string& item_id);

  // All of these throw kInvalidHandle for an unknown session.
  SessionInfo info(const std::string& id) const;
  cv::Mat image(const std::string& id) const;
  // Throws kEmptyPrompt for an empty prompt set. Uses the highest-score mask.
  Prediction predict(const std::string& id, Feature feature, const PromptSet& prompts);
  // Returns the history depth. Throws kShapeMismatch for a wrong-size mask.
  std::size_t commit(const std::string& id, Feature feature, BinaryMask mask,
                     PromptSet prompts = {});
  // Throws kNoData when there is nothing to undo.
  std::size_t undo(const std::string& id);
  std::vector<CommitEntry> history(const std::string& id) const;
  // Replays the history: sclera, then iris, then pupil, each overwriting the
  // previous, so inner features win on overlap. Throws kNoData when empty.
  LabelMap export_labels(const std::string& id) const;
  nlohmann::json export_provenance(const std::string& id) const;

  std::size_t session_count() const;
  // Number of encoder runs so far (cache misses).
  std::size_t embed_count() const;

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  SessionInfo open(cv::Mat image, std::string image_ref, const std::optional<LabelMap>& labels);

  std::unique_ptr<SegmenterBackend> backend_;
  std::optional<DatasetManifest> dataset_;

  mutable std::shared_mutex cache_mutex_;
  std::map<std::string, EmbeddingHandle> cache_;  // image digest -> handle
  std::atomic<std::size_t> embeds_{0};

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_id_ = 1;
};

// Builds the replayed label map from a commit history of the given size.
LabelMap replay_history(ImageSize size, const std::vector<CommitEntry>& history);

// HTTP front end.
//   POST /sessions                       raw image bytes, or {"item_id": ...}
//   GET  /sessions/{id}                  session info
//   GET  /sessions/{id}/image            PNG of the session image
//   POST /sessions/{id}/predict          {"class", "points", "box"} -> {"mask", "score"}
//   POST /sessions/{id}/commit           {"class", "mask", "points"?, "box"?}
//   POST /sessions/{id}/undo
//   GET  /sessions/{id}/export           8-bit PNG, codes 0..3
//   GET  /sessions/{id}/export/provenance
//   GET  /items, GET /health
// Masks travel as {"width", "height", "counts"} run-length encodings.
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationService& service,
                            std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Binds (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  // Serves until stop(); call bind first.
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

int http_status_for(ErrorCode code);

}  // namespace eyesam
