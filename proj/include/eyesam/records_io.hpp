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

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "eyesam/eval_record.hpp"

namespace eyesam {

// Records file: UTF-8, comma-separated, one header line then one row per
// cell, '\n' line endings. Columns, in order:
//   dataset,image_id,feature,strategy,perturbation,seed,dice,iou,hausdorff,
//   skipped,skip_reason,degenerate,error,backend
// Reals use the shortest round-trip decimal form; absent metrics and absent
// skip reasons are empty fields; booleans are "true"/"false". Fields holding
// a comma, quote or newline are double-quoted with quotes doubled.
inline constexpr const char* kRecordColumns =
    "dataset,image_id,feature,strategy,perturbation,seed,dice,iou,hausdorff,"
    "skipped,skip_reason,degenerate,error,backend";

std::string format_real(double v);
std::string format_record_row(const EvalRecord& r);
std::string format_records_csv(std::span<const EvalRecord> records);
std::vector<EvalRecord> parse_records_csv(const std::string& text);

void write_records_csv(const std::filesystem::path& path,
                       std::span<const EvalRecord> records);
std::vector<EvalRecord> read_records_csv(const std::filesystem::path& path);

}  // namespace eyesam
