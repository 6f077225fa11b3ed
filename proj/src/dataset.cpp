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

#include "eyesam/dataset.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "eyesam/error.hpp"
#include "eyesam/image_io.hpp"

namespace fs = std::filesystem;

namespace eyesam {
namespace {

const std::set<std::string> kImageExtensions = {".png", ".jpg", ".jpeg",
                                                ".bmp", ".tif", ".tiff"};

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return kImageExtensions.count(ext) > 0;
}

std::vector<fs::path> sorted_entries(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string size_text(ImageSize s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height);
}

// Collects problems so a single error can list every offending file.
struct Problems {
  std::vector<std::string> lines;
  void add(std::string line) { lines.push_back(std::move(line)); }
  void raise_if_any(const fs::path& root) const {
    if (lines.empty()) return;
    std::string msg = "invalid dataset at " + root.string() + ":";
    for (const auto& l : lines) msg += "\n  " + l;
    throw Error(ErrorCode::kManifestError, msg);
  }
};

std::optional<fs::path> find_label(const fs::path& dir, const std::string& stem,
                                   std::initializer_list<const char*> exts) {
  for (const char* ext : exts) {
    fs::path p = dir / (stem + ext);
    if (fs::exists(p)) return p;
  }
  return std::nullopt;
}

void index_image_label_dirs(const fs::path& images, const fs::path& labels,
                            const std::string& id_prefix,
                            std::initializer_list<const char*> label_exts,
                            std::vector<ManifestEntry>& out) {
  const bool has_labels = fs::is_directory(labels);
  for (const auto& p : sorted_entries(images)) {
    if (!fs::is_regular_file(p) || !is_image(p)) continue;
    ManifestEntry e;
    e.id = id_prefix + p.stem().string();
    e.image_path = p;
    if (has_labels) e.label_path = find_label(labels, p.stem().string(), label_exts);
    out.push_back(std::move(e));
  }
}

void index_openeds2019(const fs::path& root, DatasetManifest& m, Problems& problems) {
  std::vector<std::pair<std::string, fs::path>> splits;
  if (fs::is_directory(root / "images")) {
    splits.emplace_back("", root);
  } else {
    for (const auto& p : sorted_entries(root)) {
      if (fs::is_directory(p / "images")) {
        splits.emplace_back(p.filename().string() + "/", p);
      }
    }
  }
  bool any_labels = false;
  for (const auto& [prefix, dir] : splits) {
    if (fs::is_directory(dir / "labels")) {
      any_labels = true;
    } else {
      m.warnings.push_back("split '" + dir.string() +
                           "' has no labels/ directory; items are unlabeled");
    }
    index_image_label_dirs(dir / "images", dir / "labels", prefix, {".npy", ".png"},
                           m.items);
  }
  if (!splits.empty() && !any_labels) {
    problems.add("missing labels directory (expected <split>/labels/)");
  }
}

void index_openeds2020(const fs::path& root, DatasetManifest& m) {
  const fs::path base = fs::is_directory(root / "participant") ? root / "participant" : root;
  static const std::regex kFrame(R"(\d+)");
  for (const auto& seq : sorted_entries(base)) {
    if (!fs::is_directory(seq)) continue;
    for (const auto& p : sorted_entries(seq)) {
      if (!fs::is_regular_file(p) || !is_image(p)) continue;
      const std::string frame = p.stem().string();
      if (!std::regex_match(frame, kFrame)) continue;
      ManifestEntry e;
      e.id = seq.filename().string() + "/" + frame;
      e.image_path = p;
      e.label_path = find_label(seq, "label_" + frame, {".npy", ".png"});
      if (!e.label_path) e.label_path = find_label(seq, frame, {".npy"});
      m.items.push_back(std::move(e));
    }
  }
}

void index_generic(const fs::path& root, DatasetManifest& m, Problems& problems) {
  if (!fs::is_directory(root / "images")) {
    problems.add("missing images/ directory");
    return;
  }
  if (!fs::is_directory(root / "labels")) {
    problems.add("missing labels directory (expected labels/)");
  }
  index_image_label_dirs(root / "images", root / "labels", "", {".png", ".npy"},
                         m.items);
}

}  // namespace

std::string_view layout_name(DatasetLayout layout) {
  switch (layout) {
    case DatasetLayout::kOpenEds2019: return "openeds2019";
    case DatasetLayout::kOpenEds2020: return "openeds2020";
    case DatasetLayout::kGenericFolder: return "generic-folder";
  }
  return "?";
}

std::optional<DatasetLayout> parse_layout(std::string_view name) {
  for (auto l : {DatasetLayout::kOpenEds2019, DatasetLayout::kOpenEds2020,
                 DatasetLayout::kGenericFolder}) {
    if (layout_name(l) == name) return l;
  }
  return std::nullopt;
}

std::size_t DatasetManifest::labeled_count() const {
  return static_cast<std::size_t>(std::count_if(
      items.begin(), items.end(), [](const ManifestEntry& e) { return e.label_path.has_value(); }));
}

DatasetManifest load_dataset(const fs::path& root, DatasetLayout layout) {
  if (!fs::is_directory(root)) {
    throw Error(ErrorCode::kManifestError,
                "dataset root " + root.string() + " is not a directory");
  }
  DatasetManifest m;
  m.root = root;
  m.layout = layout;
  m.name = root.filename().empty() ? root.parent_path().filename().string()
                                   : root.filename().string();
  Problems problems;
  switch (layout) {
    case DatasetLayout::kOpenEds2019:
      // Both OpenEDS releases store 640 columns x 400 rows.
      m.nominal_resolution = ImageSize{640, 400};
      index_openeds2019(root, m, problems);
      break;
    case DatasetLayout::kOpenEds2020:
      m.nominal_resolution = ImageSize{640, 400};
      index_openeds2020(root, m);
      break;
    case DatasetLayout::kGenericFolder:
      index_generic(root, m, problems);
      break;
  }
  problems.raise_if_any(root);
  if (m.items.empty()) {
    throw Error(ErrorCode::kManifestError,
                "invalid dataset at " + root.string() + ": no images found for layout " +
                    std::string(layout_name(layout)));
  }

  std::sort(m.items.begin(), m.items.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < m.items.size(); ++i) {
    if (m.items[i].id == m.items[i - 1].id) {
      problems.add("duplicate item id '" + m.items[i].id + "'");
    }
  }

  std::map<std::pair<int, int>, std::size_t> resolutions;
  for (auto& e : m.items) {
    try {
      e.size = probe_image_size(e.image_path);
    } catch (const Error& err) {
      problems.add(e.image_path.string() + ": unreadable image (" + err.what() + ")");
      continue;
    }
    ++resolutions[{e.size.width, e.size.height}];
    if (!e.label_path) continue;
    try {
      const ImageSize ls = probe_label_size(*e.label_path);
      if (ls != e.size) {
        problems.add(e.label_path->string() + ": label size " + size_text(ls) +
                     " does not match image " + e.image_path.string() + " (" +
                     size_text(e.size) + ")");
      }
    } catch (const Error& err) {
      problems.add(e.label_path->string() + ": unreadable label (" + err.what() + ")");
    }
  }
  if (resolutions.size() > 1) {
    // Majority resolution wins; list the others.
    auto best = std::max_element(resolutions.begin(), resolutions.end(),
                                 [](auto& a, auto& b) { return a.second < b.second; });
    const ImageSize major{best->first.first, best->first.second};
    for (const auto& e : m.items) {
      if (e.size != major && e.size.width > 0) {
        problems.add(e.image_path.string() + ": resolution " + size_text(e.size) +
                     " differs from dataset resolution " + size_text(major));
      }
    }
  }
  problems.raise_if_any(root);
  if (m.labeled_count() == 0) {
    m.warnings.push_back("no labeled items; nothing can be evaluated");
  }
  m.resolution = m.items.front().size;
  if (m.nominal_resolution && *m.nominal_resolution != m.resolution) {
    m.warnings.push_back("resolution " + size_text(m.resolution) +
                         " differs from the published " +
                         size_text(*m.nominal_resolution) + " for " +
                         std::string(layout_name(layout)));
  }
  return m;
}

DatasetItem load_item(const DatasetManifest& manifest, std::size_t index) {
  if (index >= manifest.items.size()) {
    throw Error(ErrorCode::kInvalidArgument, "dataset item index out of range");
  }
  const ManifestEntry& e = manifest.items[index];
  DatasetItem item;
  item.id = e.id;
  item.image = read_image(e.image_path);
  if (e.label_path) {
    item.labels = read_label_file(*e.label_path);
    if (item.labels->width() != item.image.cols ||
        item.labels->height() != item.image.rows) {
      throw Error(ErrorCode::kShapeMismatch,
                  "label " + e.label_path->string() + " does not match image size");
    }
  }
  return item;
}

}  // namespace eyesam
