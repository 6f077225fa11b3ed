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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <opencv2/core.hpp>

#include "eyesam/label_map.hpp"

namespace eyesam {

// On-disk conventions, relative to the dataset root:
//
//   openeds2019     <root>/<split>/images/<stem>.png
//                   <root>/<split>/labels/<stem>.npy
//                   (or images/ + labels/ directly under <root>). Item id is
//                   "<split>/<stem>". Splits without labels/ are indexed as
//                   unlabeled; at least one labels/ directory must exist.
//   openeds2020     <root>/[participant/]<sequence>/<frame>.png
//                   <root>/[participant/]<sequence>/label_<frame>.npy
//                   Item id is "<sequence>/<frame>"; frames without a label
//                   file are indexed as unlabeled.
//   generic-folder  <root>/images/<stem>.<png|jpg|bmp|tif>
//                   <root>/labels/<stem>.<png|npy>
//                   8-bit single-channel label images or integer .npy arrays,
//                   codes 0 background, 1 sclera, 2 iris, 3 pupil.
enum class DatasetLayout { kOpenEds2019, kOpenEds2020, kGenericFolder };

std::string_view layout_name(DatasetLayout layout);
std::optional<DatasetLayout> parse_layout(std::string_view name);

struct ManifestEntry {
  std::string id;
  std::filesystem::path image_path;
  std::optional<std::filesystem::path> label_path;
  ImageSize size;
};

struct DatasetManifest {
  std::string name;
  std::filesystem::path root;
  DatasetLayout layout = DatasetLayout::kGenericFolder;
  // Resolution shared by every item.
  ImageSize resolution;
  // Published resolution for the layout, when it has one.
  std::optional<ImageSize> nominal_resolution;
  std::vector<ManifestEntry> items;  // sorted by id
  std::vector<std::string> warnings;

  std::size_t labeled_count() const;
};

struct DatasetItem {
  std::string id;
  cv::Mat image;
  std::optional<LabelMap> labels;
};

// Indexes a dataset without decoding pixels. Throws kManifestError listing
// every offending file (missing label directories, image/label size
// mismatches, inconsistent resolutions, empty datasets).
DatasetManifest load_dataset(const std::filesystem::path& root,
                             DatasetLayout layout);

// Decodes one item. Labels are validated against the image size.
DatasetItem load_item(const DatasetManifest& manifest, std::size_t index);

}  // namespace eyesam
