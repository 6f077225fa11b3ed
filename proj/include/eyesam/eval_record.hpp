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
#include <optional>
#include <string>
#include <string_view>

#include "eyesam/label_map.hpp"

namespace eyesam {

enum class SkipReason { kFeatureAbsent, kHoleAbsent, kStrategyInapplicable };

std::string_view skip_reason_name(SkipReason r);
std::optional<SkipReason> parse_skip_reason(std::string_view name);

// One (image, feature, strategy) measurement. Metric fields are empty for
// skipped cells and for cells whose backend call failed (`error` set).
struct EvalRecord {
  std::string dataset;
  std::string image_id;
  Feature feature = Feature::kPupil;
  std::string strategy;
  double perturbation = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> dice;
  std::optional<double> iou;
  std::optional<double> hausdorff;
  bool skipped = false;
  std::optional<SkipReason> skip_reason;
  bool degenerate = false;
  std::string error;
  std::string backend;

  bool failed() const { return !error.empty(); }
  bool scored() const { return !skipped && !failed(); }

  friend bool operator==(const EvalRecord&, const EvalRecord&) = default;
};

}  // namespace eyesam
