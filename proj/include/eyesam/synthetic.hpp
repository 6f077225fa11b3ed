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

#include <opencv2/core.hpp>

#include "eyesam/label_map.hpp"
#include "eyesam/rng.hpp"

namespace eyesam {

// Procedural near-eye image: an almond-shaped eyelid opening (sclera) holding
// an iris disk and a pupil disk, rendered as 8-bit grayscale with noise and a
// corneal glint. Roughly one image in six is half-lidded or blinking, so the
// pupil or iris is partly or fully hidden.
struct SyntheticEye {
  cv::Mat image;  // CV_8UC1
  LabelMap labels;
};

SyntheticEye make_synthetic_eye(ImageSize size, SeededRng& rng);

// Writes `count` images in the generic-folder layout (images/NNNN.png,
// labels/NNNN.png) under `dir`.
void write_synthetic_dataset(const std::filesystem::path& dir, int count,
                             std::uint64_t seed, ImageSize size = {160, 100});

}  // namespace eyesam
