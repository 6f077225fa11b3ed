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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eyesam/binary_mask.hpp"

namespace eyesam {

// OpenEDS class codes.
enum class EyeClass : std::uint8_t {
  kBackground = 0,
  kSclera = 1,
  kIris = 2,
  kPupil = 3,
};

enum class Feature { kPupil, kIris, kSclera };

inline constexpr std::array<Feature, 3> kAllFeatures = {
    Feature::kPupil, Feature::kIris, Feature::kSclera};

std::string_view feature_name(Feature f);
std::optional<Feature> parse_feature(std::string_view name);
EyeClass feature_class(Feature f);

// The feature a negative "hole" prompt is placed on: iris for sclera, pupil
// for iris. Pupil has no inner feature.
std::optional<Feature> inner_feature(Feature f);

// Per-pixel class map, row-major, values restricted to {0,1,2,3}.
class LabelMap {
 public:
  LabelMap() = default;
  LabelMap(int width, int height);
  // Throws kInvalidLabelMap when any value is outside {0,1,2,3} or the
  // buffer size does not match.
  LabelMap(int width, int height, std::vector<std::uint8_t> values);

  int width() const { return width_; }
  int height() const { return height_; }
  ImageSize size() const { return {width_, height_}; }

  std::uint8_t at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }
  void set(int x, int y, EyeClass c);

  std::span<const std::uint8_t> values() const { return values_; }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> values_;
};

BinaryMask class_mask(const LabelMap& labels, EyeClass c);
BinaryMask feature_mask(const LabelMap& labels, Feature feature);

}  // namespace eyesam
