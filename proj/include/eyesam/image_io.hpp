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

#include <opencv2/core.hpp>

#include "eyesam/binary_mask.hpp"
#include "eyesam/label_map.hpp"

namespace eyesam {

// Decodes PNG/JPEG/BMP/... bytes, keeping the stored channel count and bit
// depth. Throws kDecodeError.
cv::Mat decode_image(std::span<const std::uint8_t> bytes);
cv::Mat read_image(const std::filesystem::path& path);

// Converts a 1-, 3- or 4-channel image of any integer or float depth to
// 8-bit RGB. Grayscale becomes three identical channels; 16-bit input is
// scaled down by 257; float input is assumed to lie in [0,1].
// Throws kDecodeError for unsupported layouts.
cv::Mat to_rgb8(const cv::Mat& image);

// Hex SHA-256 over the image dimensions, type and pixel bytes.
std::string image_digest(const cv::Mat& image);
std::string sha256_hex(std::span<const std::uint8_t> bytes);

// Width/height from a PNG header without decoding pixels.
std::optional<ImageSize> probe_png_size(const std::filesystem::path& path);
ImageSize probe_image_size(const std::filesystem::path& path);

// Label maps on disk: 8-bit single-channel images with codes {0..3}, or .npy
// integer arrays of shape (H, W) or (H, W, 1).
LabelMap read_label_file(const std::filesystem::path& path);
ImageSize probe_label_size(const std::filesystem::path& path);
LabelMap decode_label_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_label_png(const LabelMap& labels);
void write_label_png(const std::filesystem::path& path, const LabelMap& labels);
void write_label_npy(const std::filesystem::path& path, const LabelMap& labels);

cv::Mat mask_to_mat(const BinaryMask& mask);  // CV_8U, 0/255
BinaryMask mat_to_mask(const cv::Mat& mat);   // nonzero -> foreground

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace eyesam
