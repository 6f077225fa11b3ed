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

#include "eyesam/label_map.hpp"

#include <string>

#include "eyesam/error.hpp"

namespace eyesam {

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::kPupil: return "pupil";
    case Feature::kIris: return "iris";
    case Feature::kSclera: return "sclera";
  }
  return "?";
}

std::optional<Feature> parse_feature(std::string_view name) {
  for (Feature f : kAllFeatures) {
    if (feature_name(f) == name) return f;
  }
  return std::nullopt;
}

EyeClass feature_class(Feature f) {
  switch (f) {
    case Feature::kPupil: return EyeClass::kPupil;
    case Feature::kIris: return EyeClass::kIris;
    case Feature::kSclera: return EyeClass::kSclera;
  }
  return EyeClass::kBackground;
}

std::optional<Feature> inner_feature(Feature f) {
  switch (f) {
    case Feature::kSclera: return Feature::kIris;
    case Feature::kIris: return Feature::kPupil;
    case Feature::kPupil: return std::nullopt;
  }
  return std::nullopt;
}

LabelMap::LabelMap(int width, int height)
    : width_(width),
      height_(height),
      values_(static_cast<std::size_t>(width) * height, 0) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::kInvalidLabelMap, "negative label map dimensions");
  }
}

LabelMap::LabelMap(int width, int height, std::vector<std::uint8_t> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width < 0 || height < 0 ||
      values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kInvalidLabelMap,
                "label buffer of " + std::to_string(values_.size()) +
                    " values does not match " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] > 3) {
      throw Error(ErrorCode::kInvalidLabelMap,
                  "label value " + std::to_string(values_[i]) + " at pixel (" +
                      std::to_string(i % width) + "," +
                      std::to_string(i / width) + ") outside {0,1,2,3}");
    }
  }
}

void LabelMap::set(int x, int y, EyeClass c) {
  if (!size().contains(x, y)) {
    throw Error(ErrorCode::kInvalidArgument, "label pixel out of bounds");
  }
  values_[static_cast<std::size_t>(y) * width_ + x] =
      static_cast<std::uint8_t>(c);
}

BinaryMask class_mask(const LabelMap& labels, EyeClass c) {
  std::vector<std::uint8_t> bits(labels.values().size());
  const auto code = static_cast<std::uint8_t>(c);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    bits[i] = labels.values()[i] == code ? 1 : 0;
  }
  return BinaryMask(labels.width(), labels.height(), bits);
}

BinaryMask feature_mask(const LabelMap& labels, Feature feature) {
  return class_mask(labels, feature_class(feature));
}

}  // namespace eyesam
