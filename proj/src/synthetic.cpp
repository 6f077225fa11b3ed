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

#include "eyesam/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <opencv2/imgcodecs.hpp>

#include "eyesam/error.hpp"
#include "eyesam/image_io.hpp"

namespace eyesam {

SyntheticEye make_synthetic_eye(ImageSize size, SeededRng& rng) {
  if (size.width < 16 || size.height < 16) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic eye needs at least 16x16");
  }
  const double w = size.width;
  const double h = size.height;
  const double cx = w * rng.uniform_real(0.42, 0.58);
  const double cy = h * rng.uniform_real(0.42, 0.58);
  const double half_w = w * rng.uniform_real(0.32, 0.42);
  const double half_h = h * rng.uniform_real(0.28, 0.38);

  // Mode: 0 open, 1 half-lidded (pupil above the lid), 2 blinking.
  const double mode_draw = rng.uniform_unit();
  const int mode = mode_draw < 0.84 ? 0 : (mode_draw < 0.92 ? 1 : 2);
  double openness = rng.uniform_real(0.75, 1.0);
  const double iris_r = half_h * rng.uniform_real(0.65, 0.85);
  double ix = cx + half_w * rng.uniform_real(-0.35, 0.35);
  double iy = cy + half_h * rng.uniform_real(-0.15, 0.15);
  const double pupil_r = iris_r * rng.uniform_real(0.3, 0.5);
  double px = ix + iris_r * rng.uniform_real(-0.15, 0.15);
  double py = iy + iris_r * rng.uniform_real(-0.15, 0.15);
  if (mode == 1) {
    openness = rng.uniform_real(0.3, 0.45);
    // Pupil sits above the visible opening.
    py = cy - half_h * openness - pupil_r - 1.0;
    iy = py + iris_r * 0.35;
  } else if (mode == 2) {
    openness = rng.uniform_real(0.05, 0.12);
    iy = cy - half_h - iris_r - 2.0;
    py = iy;
  }

  LabelMap labels(size.width, size.height);
  cv::Mat image(size.height, size.width, CV_8UC1);
  const int noise_amp = 6;
  for (int y = 0; y < size.height; ++y) {
    for (int x = 0; x < size.width; ++x) {
      const double u = (x - cx) / half_w;
      // Almond opening: vertical extent shrinks quadratically toward corners.
      const double lid = half_h * openness * (1.0 - u * u);
      const bool open = std::abs(u) < 1.0 && std::abs(y - cy) < lid;
      EyeClass c = EyeClass::kBackground;
      if (open) {
        if (std::hypot(x - px, y - py) <= pupil_r) {
          c = EyeClass::kPupil;
        } else if (std::hypot(x - ix, y - iy) <= iris_r) {
          c = EyeClass::kIris;
        } else {
          c = EyeClass::kSclera;
        }
      }
      labels.set(x, y, c);
      int base = 0;
      switch (c) {
        case EyeClass::kBackground: base = 95 + static_cast<int>(20.0 * y / h); break;
        case EyeClass::kSclera: base = 190; break;
        case EyeClass::kIris: base = 105; break;
        case EyeClass::kPupil: base = 25; break;
      }
      const int noise = static_cast<int>(rng.uniform_index(2 * noise_amp + 1)) - noise_amp;
      image.at<std::uint8_t>(y, x) = static_cast<std::uint8_t>(std::clamp(base + noise, 0, 255));
    }
  }
  // Corneal glint, image only.
  const int gx = static_cast<int>(px + pupil_r * 0.6);
  const int gy = static_cast<int>(py - pupil_r * 0.4);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (size.contains(gx + dx, gy + dy)) image.at<std::uint8_t>(gy + dy, gx + dx) = 250;
    }
  }
  return {image, std::move(labels)};
}

void write_synthetic_dataset(const std::filesystem::path& dir, int count,
                             std::uint64_t seed, ImageSize size) {
  if (count <= 0) throw Error(ErrorCode::kInvalidArgument, "count must be positive");
  std::filesystem::create_directories(dir / "images");
  std::filesystem::create_directories(dir / "labels");
  for (int i = 0; i < count; ++i) {
    SeededRng rng(mix64(seed ^ static_cast<std::uint64_t>(i)));
    const SyntheticEye eye = make_synthetic_eye(size, rng);
    char stem[16];
    std::snprintf(stem, sizeof stem, "%04d", i);
    std::vector<std::uint8_t> png;
    cv::imencode(".png", eye.image, png);
    write_file(dir / "images" / (std::string(stem) + ".png"), png);
    write_label_png(dir / "labels" / (std::string(stem) + ".png"), eye.labels);
  }
}

}  // namespace eyesam
