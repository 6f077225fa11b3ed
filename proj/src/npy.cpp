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

#include "eyesam/npy.hpp"

#include <cstring>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

#include "eyesam/error.hpp"

namespace eyesam {
namespace {

constexpr char kMagic[] = "\x93NUMPY";

Error bad(const std::string& what) {
  return Error(ErrorCode::kDecodeError, "npy: " + what);
}

struct Header {
  std::size_t data_offset = 0;
  NpyArray array;
};

Header parse_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 10 || std::memcmp(bytes.data(), kMagic, 6) != 0) {
    throw bad("missing magic string");
  }
  const int major = bytes[6];
  std::size_t header_len = 0;
  std::size_t prefix = 0;
  if (major == 1) {
    header_len = bytes[8] | (bytes[9] << 8);
    prefix = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) throw bad("truncated header");
    header_len = bytes[8] | (bytes[9] << 8) | (bytes[10] << 16) |
                 (static_cast<std::size_t>(bytes[11]) << 24);
    prefix = 12;
  } else {
    throw bad("unsupported format version " + std::to_string(major));
  }
  if (bytes.size() < prefix + header_len) throw bad("truncated header");
  const std::string dict(reinterpret_cast<const char*>(bytes.data()) + prefix,
                         header_len);

  Header h;
  h.data_offset = prefix + header_len;
  std::smatch m;
  if (!std::regex_search(dict, m,
                         std::regex(R"('descr'\s*:\s*'([^']+)')"))) {
    throw bad("header has no descr");
  }
  h.array.descr = m[1];
  if (std::regex_search(dict, m,
                        std::regex(R"('fortran_order'\s*:\s*True)"))) {
    throw bad("fortran-ordered arrays are not supported");
  }
  if (!std::regex_search(dict, m, std::regex(R"('shape'\s*:\s*\(([^)]*)\))"))) {
    throw bad("header has no shape");
  }
  std::stringstream dims(m[1].str());
  std::string tok;
  while (std::getline(dims, tok, ',')) {
    const auto first = tok.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    h.array.shape.push_back(std::stoull(tok.substr(first)));
  }
  const std::string& d = h.array.descr;
  if (d.size() < 3 || (d[0] != '<' && d[0] != '|' && d[0] != '=') ||
      (d[1] != 'u' && d[1] != 'i' && d[1] != 'b')) {
    throw bad("unsupported dtype " + d);
  }
  const auto size = h.array.item_size();
  if (size != 1 && size != 2 && size != 4 && size != 8) {
    throw bad("unsupported dtype " + d);
  }
  return h;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path,
                                std::size_t limit = 0) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  if (limit == 0) {
    return {std::istreambuf_iterator<char>(in), {}};
  }
  std::vector<std::uint8_t> buf(limit);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(limit));
  buf.resize(static_cast<std::size_t>(in.gcount()));
  return buf;
}

}  // namespace

std::size_t NpyArray::element_count() const {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

std::size_t NpyArray::item_size() const { return std::stoul(descr.substr(2)); }

std::int64_t NpyArray::integer_at(std::size_t i) const {
  const std::size_t size = item_size();
  const std::uint8_t* p = raw.data() + i * size;
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < size; ++b) v |= std::uint64_t{p[b]} << (8 * b);
  if (descr[1] == 'i' && size < 8 && (v >> (8 * size - 1)) & 1) {
    v |= ~std::uint64_t{0} << (8 * size);
  }
  return static_cast<std::int64_t>(v);
}

NpyArray parse_npy(std::span<const std::uint8_t> bytes) {
  Header h = parse_header(bytes);
  const std::size_t need = h.array.element_count() * h.array.item_size();
  if (bytes.size() < h.data_offset + need) throw bad("truncated data");
  h.array.raw.assign(bytes.begin() + h.data_offset,
                     bytes.begin() + h.data_offset + need);
  return std::move(h.array);
}

NpyArray read_npy(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  try {
    return parse_npy(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

NpyArray read_npy_header(const std::filesystem::path& path) {
  const auto bytes = slurp(path, 4096);
  try {
    return parse_header(bytes).array;
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_npy_u8(std::span<const std::size_t> shape,
                                        std::span<const std::uint8_t> data) {
  std::string dict = "{'descr': '|u1', 'fortran_order': False, 'shape': (";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    dict += std::to_string(shape[i]);
    if (i + 1 < shape.size() || shape.size() == 1) dict += ",";
    if (i + 1 < shape.size()) dict += " ";
  }
  dict += "), }";
  // Pad so the data starts on a 64-byte boundary, terminated by '\n'.
  const std::size_t total = 10 + dict.size() + 1;
  dict.append((64 - total % 64) % 64, ' ');
  dict += '\n';
  std::vector<std::uint8_t> out(kMagic, kMagic + 6);
  out.push_back(1);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(dict.size() & 0xff));
  out.push_back(static_cast<std::uint8_t>(dict.size() >> 8));
  out.insert(out.end(), dict.begin(), dict.end());
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

}  // namespace eyesam
