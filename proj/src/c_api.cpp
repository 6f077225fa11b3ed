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

#include "eyesam.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "eyesam/annotate.hpp"
#include "eyesam/backends.hpp"
#include "eyesam/error.hpp"
#include "eyesam/harness.hpp"
#include "eyesam/metrics.hpp"
#include "eyesam/report.hpp"
#include "eyesam/synthetic.hpp"

struct eyesam_experiment {
  eyesam::ExperimentConfig config;
};

struct eyesam_manifest {
  eyesam::DatasetManifest manifest;
};

struct eyesam_mask {
  eyesam::BinaryMask mask;
};

struct eyesam_server {
  std::unique_ptr<eyesam::AnnotationService> service;
  std::unique_ptr<eyesam::AnnotationServer> server;
};

namespace {

thread_local std::string g_last_error;

eyesam_status to_status(eyesam::ErrorCode code) {
  return static_cast<eyesam_status>(static_cast<int>(code) + 1);
}

template <typename F>
eyesam_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return EYESAM_OK;
  } catch (const eyesam::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EYESAM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return EYESAM_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw eyesam::Error(eyesam::ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

eyesam::BackendConfig parse_backend(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw eyesam::Error(eyesam::ErrorCode::kConfigError, "bad backend JSON");
    return eyesam::backend_config_from_json(j);
  }
  eyesam::BackendConfig c;
  c.kind = text;
  return c;
}

eyesam::DatasetLayout parse_layout_or_throw(const char* layout) {
  const std::string name = layout ? layout : "generic-folder";
  const auto l = eyesam::parse_layout(name);
  if (!l) throw eyesam::Error(eyesam::ErrorCode::kConfigError, "unknown layout '" + name + "'");
  return *l;
}

std::uint64_t parse_u64(const std::string& v, const char* key) {
  std::size_t pos = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(v, &pos, 0);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size() || v.front() == '-') {
    throw eyesam::Error(eyesam::ErrorCode::kConfigError,
                        std::string("bad value for ") + key + ": '" + v + "'");
  }
  return out;
}

}  // namespace

extern "C" {

const char* eyesam_last_error(void) { return g_last_error.c_str(); }

const char* eyesam_status_string(eyesam_status status) {
  switch (status) {
    case EYESAM_OK: return "OK";
    case EYESAM_ERR_INTERNAL: return "Internal";
    default: break;
  }
  const int v = static_cast<int>(status) - 1;
  if (v >= 0 && v <= static_cast<int>(eyesam::ErrorCode::kConfigError)) {
    return eyesam::error_code_name(static_cast<eyesam::ErrorCode>(v)).data();
  }
  return "Unknown";
}

const char* eyesam_version(void) { return "0.1.0"; }

void eyesam_free_string(char* s) { std::free(s); }

eyesam_status eyesam_experiment_from_file(const char* path, eyesam_experiment** out) {
  return guard([&] {
    require(path && out, "path and out are required");
    *out = new eyesam_experiment{eyesam::load_experiment_config(path)};
  });
}

eyesam_status eyesam_experiment_from_json(const char* json, const char* base_dir,
                                          eyesam_experiment** out) {
  return guard([&] {
    require(json && out, "json and out are required");
    const auto j = nlohmann::json::parse(json, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw eyesam::Error(eyesam::ErrorCode::kConfigError, "config is not a JSON object");
    }
    *out = new eyesam_experiment{
        eyesam::experiment_config_from_json(j, base_dir ? base_dir : "")};
  });
}

eyesam_status eyesam_experiment_set(eyesam_experiment* exp, const char* key, const char* value) {
  return guard([&] {
    require(exp && key && value, "experiment, key and value are required");
    auto& c = exp->config;
    const std::string k = key;
    const std::string v = value;
    if (k == "dataset_root") {
      c.dataset_root = v;
    } else if (k == "layout") {
      c.layout = parse_layout_or_throw(value);
    } else if (k == "backend") {
      c.backend = parse_backend(v);
    } else if (k == "strategies") {
      c.strategies.clear();
      for (const auto& s : split_list(v)) c.strategies.push_back(eyesam::parse_strategy(s));
    } else if (k == "features") {
      c.features.clear();
      for (const auto& s : split_list(v)) {
        const auto f = eyesam::parse_feature(s);
        if (!f) throw eyesam::Error(eyesam::ErrorCode::kConfigError, "unknown feature '" + s + "'");
        c.features.push_back(*f);
      }
    } else if (k == "seed") {
      c.seed = parse_u64(v, key);
    } else if (k == "workers") {
      c.workers = static_cast<int>(parse_u64(v, key));
    } else if (k == "output_dir") {
      c.output_dir = v;
    } else if (k == "multimask_policy") {
      const auto p = eyesam::parse_multimask_policy(v);
      if (!p) throw eyesam::Error(eyesam::ErrorCode::kConfigError, "unknown multimask policy");
      c.multimask = *p;
    } else if (k == "limit") {
      c.limit = parse_u64(v, key);
    } else if (k == "overlays") {
      c.overlays = parse_u64(v, key);
    } else {
      throw eyesam::Error(eyesam::ErrorCode::kConfigError, "unknown setting '" + k + "'");
    }
  });
}

eyesam_status eyesam_experiment_config_json(const eyesam_experiment* exp, char** out) {
  return guard([&] {
    require(exp && out, "experiment and out are required");
    *out = dup_string(eyesam::experiment_config_to_json(exp->config).dump(2));
  });
}

eyesam_status eyesam_experiment_run(eyesam_experiment* exp, eyesam_run_result* result) {
  return guard([&] {
    require(exp != nullptr, "experiment is required");
    const auto r = eyesam::run_experiment(exp->config);
    if (result) *result = {r.records, r.scored, r.skipped, r.errors};
  });
}

void eyesam_experiment_destroy(eyesam_experiment* exp) { delete exp; }

eyesam_status eyesam_emit_reports(const char* results_dir, const char* formats,
                                  size_t* written) {
  return guard([&] {
    require(results_dir != nullptr, "results_dir is required");
    const auto list = split_list(formats ? formats : "csv,json,png");
    const auto paths = eyesam::emit_reports(results_dir, {list.begin(), list.end()});
    if (written) *written = paths.size();
  });
}

eyesam_status eyesam_manifest_load(const char* root, const char* layout, eyesam_manifest** out) {
  return guard([&] {
    require(root && out, "root and out are required");
    *out = new eyesam_manifest{eyesam::load_dataset(root, parse_layout_or_throw(layout))};
  });
}

size_t eyesam_manifest_count(const eyesam_manifest* m) { return m ? m->manifest.items.size() : 0; }

size_t eyesam_manifest_labeled_count(const eyesam_manifest* m) {
  return m ? m->manifest.labeled_count() : 0;
}

eyesam_status eyesam_manifest_summary_json(const eyesam_manifest* m, char** out) {
  return guard([&] {
    require(m && out, "manifest and out are required");
    const auto& d = m->manifest;
    nlohmann::json j{{"name", d.name},
                     {"root", d.root.string()},
                     {"layout", eyesam::layout_name(d.layout)},
                     {"width", d.resolution.width},
                     {"height", d.resolution.height},
                     {"items", d.items.size()},
                     {"labeled", d.labeled_count()},
                     {"warnings", d.warnings}};
    *out = dup_string(j.dump(2));
  });
}

void eyesam_manifest_destroy(eyesam_manifest* m) { delete m; }

eyesam_status eyesam_synthesize_dataset(const char* dir, int count, uint64_t seed, int width,
                                        int height) {
  return guard([&] {
    require(dir != nullptr && count > 0 && width > 0 && height > 0,
            "dir, positive count and positive size are required");
    eyesam::write_synthetic_dataset(dir, count, seed, {width, height});
  });
}

eyesam_status eyesam_mask_create(int width, int height, const uint8_t* data, eyesam_mask** out) {
  return guard([&] {
    require(out && width >= 0 && height >= 0, "out and non-negative size are required");
    require(data || width * height == 0, "data is required");
    const std::size_t n = static_cast<std::size_t>(width) * height;
    std::vector<std::uint8_t> v(data, data + n);
    for (auto& b : v) b = b ? 1 : 0;
    *out = new eyesam_mask{eyesam::BinaryMask(width, height, v)};
  });
}

void eyesam_mask_destroy(eyesam_mask* mask) { delete mask; }

eyesam_status eyesam_score_masks(const eyesam_mask* predicted, const eyesam_mask* truth,
                                 eyesam_metric_triple* out) {
  return guard([&] {
    require(predicted && truth && out, "masks and out are required");
    const auto m = eyesam::score_masks(predicted->mask, truth->mask);
    *out = {m.dice, m.iou, m.hausdorff, m.degenerate ? 1 : 0};
  });
}

eyesam_status eyesam_server_create(const char* backend, const char* dataset_root,
                                   const char* layout, const char* static_dir,
                                   eyesam_server** out) {
  return guard([&] {
    require(backend && out, "backend and out are required");
    std::optional<eyesam::DatasetManifest> dataset;
    if (dataset_root) dataset = eyesam::load_dataset(dataset_root, parse_layout_or_throw(layout));
    auto s = std::make_unique<eyesam_server>();
    s->service = std::make_unique<eyesam::AnnotationService>(
        eyesam::make_backend(parse_backend(backend)), std::move(dataset));
    std::optional<std::filesystem::path> dir;
    if (static_dir) dir = static_dir;
    s->server = std::make_unique<eyesam::AnnotationServer>(*s->service, dir);
    *out = s.release();
  });
}

eyesam_status eyesam_server_bind(eyesam_server* s, const char* host, int port, int* bound_port) {
  return guard([&] {
    require(s != nullptr, "server is required");
    const int p = s->server->bind(host ? host : "127.0.0.1", port);
    if (bound_port) *bound_port = p;
  });
}

eyesam_status eyesam_server_listen(eyesam_server* s) {
  return guard([&] {
    require(s != nullptr, "server is required");
    s->server->listen();
  });
}

void eyesam_server_stop(eyesam_server* s) {
  if (s) s->server->stop();
}

void eyesam_server_destroy(eyesam_server* s) {
  if (!s) return;
  s->server.reset();
  s->service.reset();
  delete s;
}

}  // extern "C"
