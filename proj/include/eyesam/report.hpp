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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "json.hpp"

#include "eyesam/binary_mask.hpp"
#include "eyesam/eval_record.hpp"
#include "eyesam/label_map.hpp"
#include "eyesam/prompts.hpp"

namespace eyesam {

enum class Metric { kDice, kIou, kHausdorff };

std::string_view metric_name(Metric m);
bool higher_is_better(Metric m);

// One perturbation row: mean metric per feature, absent when no scored record.
struct PerturbationRow {
  double fraction = 0;
  struct Entry {
    std::optional<double> dice, iou, hausdorff;
  };
  std::vector<Entry> features;  // indexed like kAllFeatures
};

struct PerturbationTable {
  std::vector<PerturbationRow> rows;  // ascending fraction
  std::size_t missing = 0;            // blank entries (per metric)
};

// Rows for every BBOX perturbation fraction > 0 present in the records.
PerturbationTable perturbation_table(std::span<const EvalRecord> records);
std::string perturbation_table_csv(const PerturbationTable& t);
std::string perturbation_table_markdown(const PerturbationTable& t);

// Per-strategy values of one metric for one feature, over scored records of
// unperturbed strategies, in first-seen order.
struct StrategySeries {
  std::string strategy;
  std::vector<double> values;
};
std::vector<StrategySeries> strategy_series(std::span<const EvalRecord> records,
                                            Feature feature, Metric metric);

// Index of the best series by mean (max for Dice/IoU, min for HD); ties to
// the lowest index. nullopt when no series has values.
std::optional<std::size_t> best_strategy(const std::vector<StrategySeries>& series,
                                         Metric metric);

// Box plot of the series with the best one drawn in red. BGR 8-bit.
cv::Mat render_box_plot(const std::vector<StrategySeries>& series, Metric metric,
                        const std::string& title);

// Image with the predicted mask filled, the ground truth outlined, points
// as green (foreground) / red (background) discs and the box in light blue.
// `image` is as decoded from disk (BGR order); output is BGR 8-bit.
cv::Mat render_overlay(const cv::Mat& image, const BinaryMask& truth,
                       const BinaryMask& predicted, const PromptSet& prompts);

// Reads <results>/records.csv and writes, per requested format:
//   csv:  strategy_summary.csv, perturbation_table.csv, perturbation_table.md
//   json: report.json
//   png:  plots/<metric>_<feature>.png
// Returns the written paths. Throws kIoError / kDecodeError / kNoData.
std::vector<std::filesystem::path> emit_reports(const std::filesystem::path& results_dir,
                                                const std::set<std::string>& formats);

}  // namespace eyesam
