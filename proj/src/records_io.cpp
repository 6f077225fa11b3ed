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

#include "eyesam/records_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "eyesam/error.hpp"
#include "eyesam/image_io.hpp"

namespace eyesam {
namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string opt_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

// RFC 4180 style splitter over the whole document.
std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    any = true;
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

Error parse_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::kDecodeError,
               "records line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& s, std::size_t line) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) {
    throw parse_error(line, "bad number '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s, std::size_t line) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw parse_error(line, "bad boolean '" + s + "'");
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string format_record_row(const EvalRecord& r) {
  std::string out;
  out += quote(r.dataset) + ",";
  out += quote(r.image_id) + ",";
  out += std::string(feature_name(r.feature)) + ",";
  out += quote(r.strategy) + ",";
  out += format_real(r.perturbation) + ",";
  out += std::to_string(r.seed) + ",";
  out += opt_real(r.dice) + ",";
  out += opt_real(r.iou) + ",";
  out += opt_real(r.hausdorff) + ",";
  out += std::string(r.skipped ? "true" : "false") + ",";
  out += (r.skip_reason ? std::string(skip_reason_name(*r.skip_reason)) : "") + ",";
  out += std::string(r.degenerate ? "true" : "false") + ",";
  out += quote(r.error) + ",";
  out += quote(r.backend);
  return out;
}

std::string format_records_csv(std::span<const EvalRecord> records) {
  std::string out = kRecordColumns;
  out += '\n';
  for (const auto& r : records) {
    out += format_record_row(r);
    out += '\n';
  }
  return out;
}

std::vector<EvalRecord> parse_records_csv(const std::string& text) {
  const auto rows = split_csv(text);
  if (rows.empty()) throw Error(ErrorCode::kDecodeError, "records file is empty");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    header += (i ? "," : "") + rows[0][i];
  }
  if (header != kRecordColumns) {
    throw Error(ErrorCode::kDecodeError, "unexpected records header: " + header);
  }
  std::vector<EvalRecord> out;
  for (std::size_t n = 1; n < rows.size(); ++n) {
    const auto& f = rows[n];
    if (f.size() != 14) throw parse_error(n + 1, "expected 14 fields");
    EvalRecord r;
    r.dataset = f[0];
    r.image_id = f[1];
    const auto feature = parse_feature(f[2]);
    if (!feature) throw parse_error(n + 1, "bad feature '" + f[2] + "'");
    r.feature = *feature;
    r.strategy = f[3];
    r.perturbation = parse_real(f[4], n + 1);
    {
      const auto [p, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), r.seed);
      if (ec != std::errc{} || p != f[5].data() + f[5].size()) {
        throw parse_error(n + 1, "bad seed '" + f[5] + "'");
      }
    }
    if (!f[6].empty()) r.dice = parse_real(f[6], n + 1);
    if (!f[7].empty()) r.iou = parse_real(f[7], n + 1);
    if (!f[8].empty()) r.hausdorff = parse_real(f[8], n + 1);
    r.skipped = parse_bool(f[9], n + 1);
    if (!f[10].empty()) {
      r.skip_reason = parse_skip_reason(f[10]);
      if (!r.skip_reason) throw parse_error(n + 1, "bad skip reason '" + f[10] + "'");
    }
    r.degenerate = parse_bool(f[11], n + 1);
    r.error = f[12];
    r.backend = f[13];
    out.push_back(std::move(r));
  }
  return out;
}

void write_records_csv(const std::filesystem::path& path,
                       std::span<const EvalRecord> records) {
  write_text(path, format_records_csv(records));
}

std::vector<EvalRecord> read_records_csv(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_records_csv(std::string(bytes.begin(), bytes.end()));
}

}  // namespace eyesam
