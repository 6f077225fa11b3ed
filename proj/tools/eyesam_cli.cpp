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

#include <csignal>
#include <cstdio>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "eyesam.h"

namespace {

eyesam_server* g_server = nullptr;

void on_signal(int) {
  if (g_server) eyesam_server_stop(g_server);
}

int fail(eyesam_status st) {
  std::fprintf(stderr, "error: %s: %s\n", eyesam_status_string(st), eyesam_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eyesam: zero-shot eye segmentation benchmark and annotation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(eyesam_version()));

  std::string config, backend, strategies, features, seed, out, workers;
  auto* run = app.add_subcommand("run", "run an experiment sweep");
  run->add_option("--config", config, "experiment JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--backend", backend, "backend kind or JSON object");
  run->add_option("--strategies", strategies, "comma list, e.g. E,P1,BBOX@0.05");
  run->add_option("--features", features, "comma list of pupil,iris,sclera");
  run->add_option("--seed", seed, "global 64-bit seed");
  run->add_option("--workers", workers, "worker threads");
  run->add_option("--out", out, "output directory");

  std::string results, formats = "csv,json,png";
  auto* report = app.add_subcommand("report", "emit tables and plots from a results directory");
  report->add_option("--results", results, "results directory")->required();
  report->add_option("--format", formats, "comma list of csv,json,png");

  std::string root, layout = "generic-folder";
  auto* validate = app.add_subcommand("validate-data", "index a dataset and report problems");
  validate->add_option("--root", root, "dataset root")->required();
  validate->add_option("--layout", layout, "openeds2019 | openeds2020 | generic-folder");

  std::string serve_backend = "mock-disk", host = "127.0.0.1", data_root, static_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "run the annotation HTTP service");
  serve->add_option("--backend", serve_backend, "backend kind or JSON object");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--data-root", data_root, "dataset served by item id");
  serve->add_option("--layout", layout);
  serve->add_option("--static", static_dir, "directory with the browser client");

  std::string synth_out;
  int count = 50, width = 160, height = 100;
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "write a procedural labeled dataset");
  synth->add_option("--out", synth_out)->required();
  synth->add_option("--count", count);
  synth->add_option("--seed", synth_seed);
  synth->add_option("--width", width);
  synth->add_option("--height", height);

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    eyesam_experiment* exp = nullptr;
    eyesam_status st = eyesam_experiment_from_file(config.c_str(), &exp);
    if (st != EYESAM_OK) return fail(st);
    const std::pair<const char*, std::string*> overrides[] = {
        {"backend", &backend}, {"strategies", &strategies}, {"features", &features},
        {"seed", &seed},       {"workers", &workers},       {"output_dir", &out}};
    for (const auto& [key, value] : overrides) {
      if (value->empty()) continue;
      st = eyesam_experiment_set(exp, key, value->c_str());
      if (st != EYESAM_OK) {
        eyesam_experiment_destroy(exp);
        return fail(st);
      }
    }
    eyesam_run_result r{};
    st = eyesam_experiment_run(exp, &r);
    eyesam_experiment_destroy(exp);
    if (st != EYESAM_OK) return fail(st);
    std::printf("records=%zu scored=%zu skipped=%zu errors=%zu\n", r.records, r.scored,
                r.skipped, r.errors);
    return r.errors ? 3 : 0;
  }

  if (*report) {
    size_t n = 0;
    const eyesam_status st = eyesam_emit_reports(results.c_str(), formats.c_str(), &n);
    if (st != EYESAM_OK) return fail(st);
    std::printf("wrote %zu files to %s\n", n, results.c_str());
    return 0;
  }

  if (*validate) {
    eyesam_manifest* m = nullptr;
    eyesam_status st = eyesam_manifest_load(root.c_str(), layout.c_str(), &m);
    if (st != EYESAM_OK) return fail(st);
    char* text = nullptr;
    st = eyesam_manifest_summary_json(m, &text);
    eyesam_manifest_destroy(m);
    if (st != EYESAM_OK) return fail(st);
    std::printf("%s\n", text);
    eyesam_free_string(text);
    return 0;
  }

  if (*serve) {
    eyesam_status st = eyesam_server_create(
        serve_backend.c_str(), data_root.empty() ? nullptr : data_root.c_str(), layout.c_str(),
        static_dir.empty() ? nullptr : static_dir.c_str(), &g_server);
    if (st != EYESAM_OK) return fail(st);
    int bound = 0;
    st = eyesam_server_bind(g_server, host.c_str(), port, &bound);
    if (st != EYESAM_OK) {
      eyesam_server_destroy(g_server);
      return fail(st);
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::printf("listening on http://%s:%d\n", host.c_str(), bound);
    std::fflush(stdout);
    st = eyesam_server_listen(g_server);
    eyesam_server_destroy(g_server);
    g_server = nullptr;
    return st == EYESAM_OK ? 0 : fail(st);
  }

  if (*synth) {
    const eyesam_status st =
        eyesam_synthesize_dataset(synth_out.c_str(), count, synth_seed, width, height);
    if (st != EYESAM_OK) return fail(st);
    std::printf("wrote %d items to %s\n", count, synth_out.c_str());
    return 0;
  }
  return 0;
}
