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

#include "eyesam/rle.hpp"

#include <cstdint>

#include "eyesam/error.hpp"

namespace eyesam {

RleMask rle_encode(const BinaryMask& mask) {
  RleMask out{mask.width(), mask.height(), {}};
  const auto p = mask.data();
  const std::size_t n = static_cast<std::size_t>(mask.width()) * mask.height();
  bool current = false;
  std::uint32_t run = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool v = p[i] != 0;
    if (v != current) {
      out.counts.push_back(run);
      run = 0;
      current = v;
    }
    ++run;
  }
  out.counts.push_back(run);
  return out;
}

BinaryMask rle_decode(const RleMask& rle) {
  if (rle.width < 0 || rle.height < 0) {
    throw Error(ErrorCode::kDecodeError, "negative mask size");
  }
  BinaryMask out(rle.width, rle.height);
  const std::uint64_t total = static_cast<std::uint64_t>(rle.width) * rle.height;
  std::uint64_t pos = 0;
  bool value = false;
  for (std::uint32_t c : rle.counts) {
    if (pos + c > total) throw Error(ErrorCode::kDecodeError, "run lengths exceed mask size");
    if (value) {
      for (std::uint64_t i = pos; i < pos + c; ++i) {
        out.set(static_cast<int>(i % rle.width), static_cast<int>(i / rle.width));
      }
    }
    pos += c;
    value = !value;
  }
  if (pos != total) throw Error(ErrorCode::kDecodeError, "run lengths do not cover the mask");
  return out;
}

nlohmann::json rle_to_json(const RleMask& rle) {
  return {{"width", rle.width}, {"height", rle.height}, {"counts", rle.counts}};
}

RleMask rle_from_json(const nlohmann::json& j) {
  try {
    RleMask r;
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    for (const auto& c : j.at("counts")) {
      if (!c.is_number_unsigned() || c.get<std::uint64_t>() > UINT32_MAX) {
        throw Error(ErrorCode::kDecodeError, "bad mask encoding: run length " + c.dump());
      }
      r.counts.push_back(c.get<std::uint32_t>());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDecodeError, std::string("bad mask encoding: ") + e.what());
  }
}

}  // namespace eyesam
