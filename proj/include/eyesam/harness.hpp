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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "eyesam/backends.hpp"
#include "eyesam/dataset.hpp"
#include "eyesam/eval_record.hpp"
#include "eyesam/prompts.hpp"
#include "eyesam/segmenter.hpp"

namespace eyesam {

struct ExperimentConfig {
  std::filesystem::path dataset_root;
  DatasetLayout layout = DatasetLayout::kGenericFolder;
  BackendConfig backend;
  std::vector<StrategySpec> strategies = strategy_catalog();
  std::vector<Feature> features{kAllFeatures.begin(), kAllFeatures.end()};
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::filesystem::path output_dir = "results";
  MultimaskPolicy multimask = MultimaskPolicy::kHighestScore;
  // Evaluate at most this many labeled items (0 = all).
  std::size_t limit = 0;
  // Write qualitative overlays for the first N labeled items.
  std::size_t overlays = 0;

  // Throws kConfigError.
  void validate() const;
};

// JSON document:
//   {"dataset": {"root": "...", "layout": "generic-folder"},
//    "backend": {"kind": "oracle"} | "oracle",
//    "strategies": ["E", "BBOX@0.05", ...],   // default: full catalog
//    "features": ["pupil", "iris", "sclera"], // default: all
//    "seed": 1234, "workers": 2, "output_dir": "results",
//    "multimask_policy": "highest-score" | "average",
//    "limit": 0, "overlays": 0}
// Relative dataset/output paths resolve against `base_dir`.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::json experiment_config_to_json(const ExperimentConfig& c);

// Index of the candidate with the highest Dice against `truth`; ties go to
// the lowest index.
std::size_t match_best_mask_index(const PredictionSet& candidates, const BinaryMask& truth);
const BinaryMask& match_best_mask(const PredictionSet& candidates, const BinaryMask& truth);

struct CellResult {
  EvalRecord record;
  std::optional<BinaryMask> prediction;
  PromptSet prompts;
};

// Evaluates every cell of one labeled image against one backend, embedding
// the image once and running everything mode at most once.
class ImageEvaluator {
 public:
  ImageEvaluator(const DatasetItem& item, SegmenterBackend& backend, std::string dataset,
                 MultimaskPolicy policy = MultimaskPolicy::kHighestScore);
  ~ImageEvaluator();
  ImageEvaluator(const ImageEvaluator&) = delete;
  ImageEvaluator& operator=(const ImageEvaluator&) = delete;

  // Backend failures become records with `error` set; they never throw.
  CellResult evaluate(Feature feature, const StrategySpec& strategy, SeededRng& rng);

 private:
  const EmbeddingHandle& handle();
  const PredictionSet& everything();

  const DatasetItem& item_;
  SegmenterBackend& backend_;
  std::string dataset_;
  MultimaskPolicy policy_;
  std::optional<EmbeddingHandle> handle_;
  std::optional<PredictionSet> everything_;
};

// Single-cell convenience wrapper around ImageEvaluator.
EvalRecord evaluate_item(const DatasetItem& item, Feature feature,
                         const StrategySpec& strategy, SegmenterBackend& backend,
                         SeededRng& rng, const std::string& dataset = "dataset",
                         MultimaskPolicy policy = MultimaskPolicy::kHighestScore);

struct RunResult {
  std::filesystem::path results_dir;
  std::size_t records = 0;
  std::size_t scored = 0;
  std::size_t skipped = 0;
  std::size_t errors = 0;
};

// Writes <output_dir>/records.csv, summary.json and config.json (plus
// overlays/ when requested). Records are ordered by item id, then feature
// order, then strategy order, independent of worker count.
RunResult run_experiment(const ExperimentConfig& config);

// Aggregates per feature x strategy: N, skip counts by reason, error count,
// mean/median/std (population) of each metric, best base strategy per
// feature by mean IoU and the resulting mIoU with and without sclera.
// A pure function of the records.
nlohmann::json summarize(std::span<const EvalRecord> records);

}  // namespace eyesam
