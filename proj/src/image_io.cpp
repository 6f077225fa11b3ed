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

#include "eyesam/image_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#include <openssl/evp.h>

#include "eyesam/error.hpp"
#include "eyesam/npy.hpp"

namespace eyesam {

cv::Mat decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(ErrorCode::kDecodeError, "empty image data");
  const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8U,
                    const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat img;
  try {
    img = cv::imdecode(buf, cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::kDecodeError, std::string("cannot decode image: ") + e.what());
  }
  if (img.empty()) throw Error(ErrorCode::kDecodeError, "cannot decode image");
  return img;
}

cv::Mat read_image(const std::filesystem::path& path) {
  cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (img.empty()) {
    throw Error(ErrorCode::kDecodeError, "cannot read image " + path.string());
  }
  return img;
}

cv::Mat to_rgb8(const cv::Mat& image) {
  if (image.empty()) throw Error(ErrorCode::kDecodeError, "empty image");
  cv::Mat eight;
  switch (image.depth()) {
    case CV_8U: eight = image; break;
    case CV_16U: image.convertTo(eight, CV_8U, 1.0 / 257.0); break;
    case CV_32F:
    case CV_64F: image.convertTo(eight, CV_8U, 255.0); break;
    default:
      throw Error(ErrorCode::kDecodeError, "unsupported image depth");
  }
  cv::Mat rgb;
  switch (eight.channels()) {
    case 1: cv::cvtColor(eight, rgb, cv::COLOR_GRAY2RGB); break;
    case 3: cv::cvtColor(eight, rgb, cv::COLOR_BGR2RGB); break;
    case 4: cv::cvtColor(eight, rgb, cv::COLOR_BGRA2RGB); break;
    default:
      throw Error(ErrorCode::kDecodeError, "unsupported channel count " +
                                               std::to_string(eight.channels()));
  }
  return rgb;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string image_digest(const cv::Mat& image) {
  const cv::Mat c = image.isContinuous() ? image : image.clone();
  std::vector<std::uint8_t> bytes;
  const std::array<int, 3> meta{c.cols, c.rows, c.type()};
  const auto* m = reinterpret_cast<const std::uint8_t*>(meta.data());
  bytes.insert(bytes.end(), m, m + sizeof(meta));
  bytes.insert(bytes.end(), c.data, c.data + c.total() * c.elemSize());
  return sha256_hex(bytes);
}

std::optional<ImageSize> probe_png_size(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 24> head{};
  if (!in.read(reinterpret_cast<char*>(head.data()), head.size())) {
    return std::nullopt;
  }
  static constexpr std::array<unsigned char, 8> kSig{0x89, 'P', 'N', 'G',
                                                     '\r', '\n', 0x1a, '\n'};
  if (!std::equal(kSig.begin(), kSig.end(), head.begin())) return std::nullopt;
  auto be32 = [&](int off) {
    return static_cast<int>((head[off] << 24) | (head[off + 1] << 16) |
                            (head[off + 2] << 8) | head[off + 3]);
  };
  return ImageSize{be32(16), be32(20)};
}

ImageSize probe_image_size(const std::filesystem::path& path) {
  if (auto s = probe_png_size(path)) return *s;
  const cv::Mat img = read_image(path);
  return {img.cols, img.rows};
}

namespace {

LabelMap label_from_mat(const cv::Mat& m, const std::string& origin) {
  if (m.channels() != 1 || m.depth() != CV_8U) {
    throw Error(ErrorCode::kInvalidLabelMap,
                origin + ": label image must be 8-bit single-channel");
  }
  std::vector<std::uint8_t> values(m.total());
  for (int y = 0; y < m.rows; ++y) {
    std::copy(m.ptr<std::uint8_t>(y), m.ptr<std::uint8_t>(y) + m.cols,
              values.begin() + static_cast<std::ptrdiff_t>(y) * m.cols);
  }
  try {
    return LabelMap(m.cols, m.rows, std::move(values));
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidLabelMap, origin + ": " + e.what());
  }
}

cv::Mat label_to_mat(const LabelMap& labels) {
  cv::Mat m(labels.height(), labels.width(), CV_8U);
  std::copy(labels.values().begin(), labels.values().end(), m.data);
  return m;
}

ImageSize npy_label_size(const NpyArray& a, const std::string& origin) {
  const auto& s = a.shape;
  if (!(s.size() == 2 || (s.size() == 3 && s[2] == 1))) {
    throw Error(ErrorCode::kInvalidLabelMap,
                origin + ": label array must have shape (H, W) or (H, W, 1)");
  }
  return {static_cast<int>(s[1]), static_cast<int>(s[0])};
}

}  // namespace

LabelMap read_label_file(const std::filesystem::path& path) {
  if (path.extension() == ".npy") {
    const NpyArray a = read_npy(path);
    const ImageSize size = npy_label_size(a, path.string());
    std::vector<std::uint8_t> values(a.element_count());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::int64_t v = a.integer_at(i);
      if (v < 0 || v > 3) {
        throw Error(ErrorCode::kInvalidLabelMap,
                    path.string() + ": label value " + std::to_string(v) +
                        " outside {0,1,2,3}");
      }
      values[i] = static_cast<std::uint8_t>(v);
    }
    return LabelMap(size.width, size.height, std::move(values));
  }
  const cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (m.empty()) {
    throw Error(ErrorCode::kDecodeError, "cannot read label image " + path.string());
  }
  return label_from_mat(m, path.string());
}

ImageSize probe_label_size(const std::filesystem::path& path) {
  if (path.extension() == ".npy") {
    return npy_label_size(read_npy_header(path), path.string());
  }
  return probe_image_size(path);
}

LabelMap decode_label_png(std::span<const std::uint8_t> bytes) {
  return label_from_mat(decode_image(bytes), "label image");
}

std::vector<std::uint8_t> encode_label_png(const LabelMap& labels) {
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", label_to_mat(labels), out)) {
    throw Error(ErrorCode::kIoError, "PNG encoding failed");
  }
  return out;
}

void write_label_png(const std::filesystem::path& path, const LabelMap& labels) {
  write_file(path, encode_label_png(labels));
}

void write_label_npy(const std::filesystem::path& path, const LabelMap& labels) {
  const std::array<std::size_t, 2> shape{static_cast<std::size_t>(labels.height()),
                                         static_cast<std::size_t>(labels.width())};
  write_file(path, encode_npy_u8(shape, labels.values()));
}

cv::Mat mask_to_mat(const BinaryMask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8U);
  const auto d = mask.data();
  for (std::size_t i = 0; i < d.size(); ++i) m.data[i] = d[i] ? 255 : 0;
  return m;
}

BinaryMask mat_to_mask(const cv::Mat& mat) {
  cv::Mat single;
  if (mat.channels() != 1) {
    throw Error(ErrorCode::kInvalidArgument, "mask image must be single-channel");
  }
  mat.convertTo(single, CV_8U);
  std::vector<std::uint8_t> values(single.total());
  for (int y = 0; y < single.rows; ++y) {
    std::copy(single.ptr<std::uint8_t>(y), single.ptr<std::uint8_t>(y) + single.cols,
              values.begin() + static_cast<std::ptrdiff_t>(y) * single.cols);
  }
  return BinaryMask(single.cols, single.rows, values);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace eyesam
