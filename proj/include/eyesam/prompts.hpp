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

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eyesam/eval_record.hpp"
#include "eyesam/geometry.hpp"
#include "eyesam/label_map.hpp"
#include "eyesam/rng.hpp"

namespace eyesam {

enum class StrategyKind {
  kE,
  kP1,
  kP4,
  kP4_4,
  kBbox,
  kBboxP1,
  kBboxP4,
  kBboxP1_1,
  kBboxP4_4,
};

std::string_view strategy_kind_name(StrategyKind kind);
std::optional<StrategyKind> parse_strategy_kind(std::string_view name);

// True for kinds whose prompt includes a tight bounding box.
bool kind_uses_box(StrategyKind kind);

struct StrategySpec {
  StrategyKind kind = StrategyKind::kE;
  double box_perturbation = 0.0;

  // Throws kInvalidFraction / kInvalidArgument on an invalid combination.
  void validate() const;

  // Canonical kind identifier ("BBOXP4_4").
  std::string_view name() const { return strategy_kind_name(kind); }
  // Identifier including perturbation, e.g. "BBOX@0.05"; equals name() when
  // unperturbed.
  std::string label() const;

  friend bool operator==(const StrategySpec&, const StrategySpec&) = default;
};

// Parses "BBOXP4" or "BBOX@0.10". Throws kConfigError on bad input.
StrategySpec parse_strategy(std::string_view text);

// The nine base strategies followed by BBOX at 5%, 10% and 20%
// perturbation: E, P1, P4, P4_4, BBOX, BBOXP1, BBOXP4, BBOXP1_1, BBOXP4_4,
// BBOX@0.05, BBOX@0.10, BBOX@0.20.
std::vector<StrategySpec> strategy_catalog();

// The payload handed to a segmenter. An empty set means "no prompt"
// (everything mode).
struct PromptSet {
  std::vector<Point> points;
  std::optional<Box> box;

  bool empty() const { return points.empty() && !box.has_value(); }
  std::size_t foreground_count() const;
  std::size_t background_count() const;

  friend bool operator==(const PromptSet&, const PromptSet&) = default;
};

class PromptOutcome {
 public:
  PromptOutcome(PromptSet prompts) : value_(std::move(prompts)) {}
  PromptOutcome(SkipReason reason) : value_(reason) {}

  bool skipped() const { return std::holds_alternative<SkipReason>(value_); }
  const PromptSet& prompts() const { return std::get<PromptSet>(value_); }
  SkipReason skip_reason() const { return std::get<SkipReason>(value_); }

  friend bool operator==(const PromptOutcome&, const PromptOutcome&) = default;

 private:
  std::variant<PromptSet, SkipReason> value_;
};

// Synthesizes the prompts a human annotator would give for `feature` under
// `strategy`, from ground-truth labels.
//
// Draw order from `rng`: foreground points, then the box perturbation, then
// negative points. The P4_4 doubled box only bounds where the negatives are
// drawn; it is not part of the returned prompt.
PromptOutcome build_prompts(const StrategySpec& strategy, Feature feature,
                            const LabelMap& labels, SeededRng& rng);

}  // namespace eyesam
