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

#include "eyesam/prompts.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>

#include "eyesam/error.hpp"
#include "eyesam/mask_ops.hpp"

namespace eyesam {
namespace {

constexpr std::array<std::pair<StrategyKind, std::string_view>, 9> kKindNames{{
    {StrategyKind::kE, "E"},
    {StrategyKind::kP1, "P1"},
    {StrategyKind::kP4, "P4"},
    {StrategyKind::kP4_4, "P4_4"},
    {StrategyKind::kBbox, "BBOX"},
    {StrategyKind::kBboxP1, "BBOXP1"},
    {StrategyKind::kBboxP4, "BBOXP4"},
    {StrategyKind::kBboxP1_1, "BBOXP1_1"},
    {StrategyKind::kBboxP4_4, "BBOXP4_4"},
}};

std::size_t positive_count(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kP1:
    case StrategyKind::kBboxP1:
    case StrategyKind::kBboxP1_1:
      return 1;
    case StrategyKind::kP4:
    case StrategyKind::kP4_4:
    case StrategyKind::kBboxP4:
    case StrategyKind::kBboxP4_4:
      return 4;
    case StrategyKind::kE:
    case StrategyKind::kBbox:
      return 0;
  }
  return 0;
}

bool uses_hole_negatives(StrategyKind kind) {
  return kind == StrategyKind::kBboxP1_1 || kind == StrategyKind::kBboxP4_4;
}

}  // namespace

std::string_view skip_reason_name(SkipReason r) {
  switch (r) {
    case SkipReason::kFeatureAbsent: return "feature_absent";
    case SkipReason::kHoleAbsent: return "hole_absent";
    case SkipReason::kStrategyInapplicable: return "strategy_inapplicable";
  }
  return "?";
}

std::optional<SkipReason> parse_skip_reason(std::string_view name) {
  for (SkipReason r : {SkipReason::kFeatureAbsent, SkipReason::kHoleAbsent,
                       SkipReason::kStrategyInapplicable}) {
    if (skip_reason_name(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view strategy_kind_name(StrategyKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<StrategyKind> parse_strategy_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool kind_uses_box(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kBbox:
    case StrategyKind::kBboxP1:
    case StrategyKind::kBboxP4:
    case StrategyKind::kBboxP1_1:
    case StrategyKind::kBboxP4_4:
      return true;
    default:
      return false;
  }
}

void StrategySpec::validate() const {
  if (!(box_perturbation >= 0.0 && box_perturbation < 1.0)) {
    throw Error(ErrorCode::kInvalidFraction,
                "box perturbation must lie in [0,1)");
  }
  if (box_perturbation > 0.0 && !kind_uses_box(kind)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(name()) + " has no box to perturb");
  }
}

std::string StrategySpec::label() const {
  std::string out(name());
  if (box_perturbation > 0.0) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "@%.2f", box_perturbation);
    out += buf;
  }
  return out;
}

StrategySpec parse_strategy(std::string_view text) {
  const auto at = text.find('@');
  const auto kind = parse_strategy_kind(text.substr(0, at));
  if (!kind) {
    throw Error(ErrorCode::kConfigError,
                "unknown strategy '" + std::string(text) + "'");
  }
  StrategySpec spec{*kind, 0.0};
  if (at != std::string_view::npos) {
    const auto frac = text.substr(at + 1);
    const auto [ptr, ec] =
        std::from_chars(frac.data(), frac.data() + frac.size(),
                        spec.box_perturbation);
    if (ec != std::errc{} || ptr != frac.data() + frac.size()) {
      throw Error(ErrorCode::kConfigError,
                  "bad perturbation in strategy '" + std::string(text) + "'");
    }
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }
  return spec;
}

std::vector<StrategySpec> strategy_catalog() {
  std::vector<StrategySpec> out;
  for (const auto& [kind, name] : kKindNames) out.push_back({kind, 0.0});
  for (double f : {0.05, 0.10, 0.20}) out.push_back({StrategyKind::kBbox, f});
  return out;
}

std::size_t PromptSet::foreground_count() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(),
                    [](const Point& p) { return p.foreground(); }));
}

std::size_t PromptSet::background_count() const {
  return points.size() - foreground_count();
}

PromptOutcome build_prompts(const StrategySpec& strategy, Feature feature,
                            const LabelMap& labels, SeededRng& rng) {
  strategy.validate();
  if (labels.width() <= 0 || labels.height() <= 0) {
    throw Error(ErrorCode::kInvalidLabelMap, "label map has no pixels");
  }
  const StrategyKind kind = strategy.kind;
  if (uses_hole_negatives(kind) && !inner_feature(feature)) {
    return SkipReason::kStrategyInapplicable;
  }
  const BinaryMask target = feature_mask(labels, feature);
  if (target.empty()) return SkipReason::kFeatureAbsent;

  std::optional<BinaryMask> hole;
  if (uses_hole_negatives(kind)) {
    hole = feature_mask(labels, *inner_feature(feature));
    if (hole->empty()) return SkipReason::kHoleAbsent;
  }

  PromptSet prompts;
  if (kind == StrategyKind::kE) return prompts;

  const std::size_t k = positive_count(kind);
  if (k > 0) prompts.points = sample_points_in_mask(target, k, rng);

  const ImageSize bounds = labels.size();
  const Box tight = bounding_box(target);
  if (kind_uses_box(kind)) {
    prompts.box = strategy.box_perturbation > 0.0
                      ? perturb_box(tight, strategy.box_perturbation, rng, bounds)
                      : tight;
  }

  std::vector<Point> negatives;
  if (kind == StrategyKind::kP4_4) {
    const Box doubled = scale_box(tight, 2.0, bounds);
    try {
      negatives = sample_points_outside_mask_in_box(target, doubled, 4, rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoBackgroundAvailable) throw;
      return SkipReason::kStrategyInapplicable;
    }
  } else if (hole) {
    negatives = sample_points_in_mask(*hole, k, rng);
    for (Point& p : negatives) p.label = PointLabel::kBackground;
  }
  prompts.points.insert(prompts.points.end(), negatives.begin(),
                        negatives.end());
  return prompts;
}

}  // namespace eyesam
