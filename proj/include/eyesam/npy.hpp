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
#include <span>
#include <string>
#include <vector>

namespace eyesam {

// Minimal NumPy .npy (format 1.0 / 2.0 / 3.0) support for integer label
// arrays. Only C-order little-endian or byte-sized integer and bool dtypes
// are accepted.
struct NpyArray {
  std::string descr;  // e.g. "|u1", "<i8"
  std::vector<std::size_t> shape;
  std::vector<std::uint8_t> raw;  // element bytes, C order

  std::size_t element_count() const;
  std::size_t item_size() const;
  // Element `i` widened to int64.
  std::int64_t integer_at(std::size_t i) const;
};

NpyArray parse_npy(std::span<const std::uint8_t> bytes);
NpyArray read_npy(const std::filesystem::path& path);
// Reads only the header; `raw` is left empty.
NpyArray read_npy_header(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_npy_u8(std::span<const std::size_t> shape,
                                        std::span<const std::uint8_t> data);

}  // namespace eyesam
