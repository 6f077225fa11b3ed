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
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "eyesam/binary_mask.hpp"
#include "eyesam/eval_record.hpp"
#include "eyesam/label_map.hpp"

namespace eyesam {

struct MetricTriple {
  double dice = 0.0;
  double iou = 0.0;
  double hausdorff = 0.0;
  // Set when an empty-mask convention produced one of the values.
  bool degenerate = false;
};

// 2|A∩B| / (|A|+|B|). Both empty -> 1.0.
double dice(const BinaryMask& a, const BinaryMask& b);

// |A∩B| / |A∪B|. Both empty -> 1.0.
double iou(const BinaryMask& a, const BinaryMask& b);

// Symmetric Hausdorff distance between the 4-connected boundary pixel sets,
// Euclidean on pixel centers. Both empty -> 0.0; exactly one empty -> the
// image diagonal sqrt(w^2 + h^2).
double hausdorff(const BinaryMask& a, const BinaryMask& b);

// Exact squared Euclidean distance from every pixel to the nearest pixel of
// `sites`, row-major. Pixels are unreachable (huge value) when `sites` is
// empty.
std::vector<double> squared_distance_transform(const BinaryMask& sites);

MetricTriple score_masks(const BinaryMask& predicted, const BinaryMask& truth);

// Unweighted mean over `features` of the per-feature mean IoU of scored
// records. Throws kNoData when any selected feature has no scored record.
double mean_iou(std::span<const EvalRecord> records,
                std::span<const Feature> features);

}  // namespace eyesam
