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

#include "eyesam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <opencv2/imgcodecs.hpp>

#include "eyesam/error.hpp"
#include "eyesam/image_io.hpp"
#include "eyesam/metrics.hpp"
#include "eyesam/records_io.hpp"
#include "eyesam/report.hpp"

namespace fs = std::filesystem;

namespace eyesam {
namespace {

std::string describe(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return std::string(error_code_name(err->code())) + ": " + err->what();
  }
  return std::string("exception: ") + e.what();
}

EvalRecord base_record(const std::string& dataset, const std::string& image_id,
                       Feature feature, const StrategySpec& strategy,
                       std::uint64_t seed, const std::string& backend) {
  EvalRecord r;
  r.dataset = dataset;
  r.image_id = image_id;
  r.feature = feature;
  r.strategy = std::string(strategy.name());
  r.perturbation = strategy.box_perturbation;
  r.seed = seed;
  r.backend = backend;
  return r;
}

std::string strategy_label(const EvalRecord& r) {
  if (const auto kind = parse_strategy_kind(r.strategy)) {
    return StrategySpec{*kind, r.perturbation}.label();
  }
  return r.perturbation > 0 ? r.strategy + "@" + format_real(r.perturbation) : r.strategy;
}

struct Stats {
  double mean = 0, median = 0, std = 0;
};

Stats stats_of(std::vector<double> v) {
  Stats s;
  if (v.empty()) return s;
  double sum = 0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double sq = 0;
  for (double x : v) sq += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(v.size()));
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  return s;
}

nlohmann::json stats_json(const std::vector<double>& v) {
  if (v.empty()) return nullptr;
  const Stats s = stats_of(v);
  return {{"mean", s.mean}, {"median", s.median}, {"std", s.std}};
}

fs::path resolve(const fs::path& p, const fs::path& base) {
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (strategies.empty()) throw Error(ErrorCode::kConfigError, "no strategies selected");
  if (features.empty()) throw Error(ErrorCode::kConfigError, "no features selected");
  if (!seed) throw Error(ErrorCode::kConfigError, "a seed is required");
  if (workers < 1) throw Error(ErrorCode::kConfigError, "workers must be >= 1");
  if (dataset_root.empty()) throw Error(ErrorCode::kConfigError, "dataset root is required");
  if (output_dir.empty()) throw Error(ErrorCode::kConfigError, "output directory is required");
  for (const auto& s : strategies) {
    try {
      s.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kConfigError, e.what());
    }
  }
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  try {
    if (j.contains("dataset")) {
      const auto& d = j.at("dataset");
      c.dataset_root = resolve(d.at("root").get<std::string>(), base_dir);
      const std::string layout = d.value("layout", "generic-folder");
      const auto parsed = parse_layout(layout);
      if (!parsed) throw Error(ErrorCode::kConfigError, "unknown layout '" + layout + "'");
      c.layout = *parsed;
    }
    if (j.contains("backend")) c.backend = backend_config_from_json(j.at("backend"));
    if (j.contains("strategies")) {
      c.strategies.clear();
      for (const auto& s : j.at("strategies")) {
        c.strategies.push_back(parse_strategy(s.get<std::string>()));
      }
    }
    if (j.contains("features")) {
      c.features.clear();
      for (const auto& f : j.at("features")) {
        const auto parsed = parse_feature(f.get<std::string>());
        if (!parsed) {
          throw Error(ErrorCode::kConfigError, "unknown feature '" + f.get<std::string>() + "'");
        }
        c.features.push_back(*parsed);
      }
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.workers = j.value("workers", c.workers);
    if (j.contains("output_dir")) {
      c.output_dir = resolve(j.at("output_dir").get<std::string>(), base_dir);
    }
    if (j.contains("multimask_policy")) {
      const auto p = parse_multimask_policy(j.at("multimask_policy").get<std::string>());
      if (!p) throw Error(ErrorCode::kConfigError, "unknown multimask policy");
      c.multimask = *p;
    }
    c.limit = j.value("limit", c.limit);
    c.overlays = j.value("overlays", c.overlays);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("bad experiment config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
  return experiment_config_from_json(j, path.parent_path());
}

nlohmann::json experiment_config_to_json(const ExperimentConfig& c) {
  nlohmann::json strategies = nlohmann::json::array();
  for (const auto& s : c.strategies) strategies.push_back(s.label());
  nlohmann::json features = nlohmann::json::array();
  for (Feature f : c.features) features.push_back(feature_name(f));
  nlohmann::json j{
      {"dataset", {{"root", c.dataset_root.string()}, {"layout", layout_name(c.layout)}}},
      {"backend", backend_config_to_json(c.backend)},
      {"strategies", strategies},
      {"features", features},
      {"workers", c.workers},
      {"output_dir", c.output_dir.string()},
      {"multimask_policy", multimask_policy_name(c.multimask)},
      {"limit", c.limit},
      {"overlays", c.overlays},
  };
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

std::size_t match_best_mask_index(const PredictionSet& candidates, const BinaryMask& truth) {
  if (candidates.masks.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no candidate masks to match");
  }
  std::size_t best = 0;
  double best_dice = dice(candidates.masks[0], truth);
  for (std::size_t i = 1; i < candidates.masks.size(); ++i) {
    const double d = dice(candidates.masks[i], truth);
    if (d > best_dice) {
      best_dice = d;
      best = i;
    }
  }
  return best;
}

const BinaryMask& match_best_mask(const PredictionSet& candidates, const BinaryMask& truth) {
  return candidates.masks[match_best_mask_index(candidates, truth)];
}

ImageEvaluator::ImageEvaluator(const DatasetItem& item, SegmenterBackend& backend,
                               std::string dataset, MultimaskPolicy policy)
    : item_(item), backend_(backend), dataset_(std::move(dataset)), policy_(policy) {
  if (!item_.labels) {
    throw Error(ErrorCode::kInvalidArgument, "item '" + item_.id + "' has no labels");
  }
}

ImageEvaluator::~ImageEvaluator() {
  if (handle_) {
    try {
      backend_.release(*handle_);
    } catch (...) {
    }
  }
}

const EmbeddingHandle& ImageEvaluator::handle() {
  if (!handle_) {
    handle_ = backend_.embed(item_.image);
    backend_.attach_ground_truth(*handle_, *item_.labels, std::nullopt);
  }
  return *handle_;
}

const PredictionSet& ImageEvaluator::everything() {
  if (!everything_) {
    handle();
    everything_ = backend_.segment_everything(item_.image);
  }
  return *everything_;
}

CellResult ImageEvaluator::evaluate(Feature feature, const StrategySpec& strategy,
                                    SeededRng& rng) {
  CellResult out;
  out.record = base_record(dataset_, item_.id, feature, strategy, rng.seed(),
                           backend_.identity());
  EvalRecord& r = out.record;
  try {
    const BinaryMask truth = feature_mask(*item_.labels, feature);
    BinaryMask predicted;
    if (strategy.kind == StrategyKind::kE) {
      if (truth.empty()) {
        r.skipped = true;
        r.skip_reason = SkipReason::kFeatureAbsent;
        return out;
      }
      predicted = match_best_mask(everything(), truth);
    } else {
      const PromptOutcome outcome = build_prompts(strategy, feature, *item_.labels, rng);
      if (outcome.skipped()) {
        r.skipped = true;
        r.skip_reason = outcome.skip_reason();
        return out;
      }
      out.prompts = outcome.prompts();
      const EmbeddingHandle& h = handle();
      backend_.attach_ground_truth(h, *item_.labels, feature);
      predicted = select_mask(backend_.predict(h, out.prompts), policy_);
    }
    const MetricTriple m = score_masks(predicted, truth);
    r.dice = m.dice;
    r.iou = m.iou;
    r.hausdorff = m.hausdorff;
    r.degenerate = m.degenerate;
    out.prediction = std::move(predicted);
  } catch (const std::exception& e) {
    r.error = describe(e);
    r.dice.reset();
    r.iou.reset();
    r.hausdorff.reset();
  }
  return out;
}

EvalRecord evaluate_item(const DatasetItem& item, Feature feature,
                         const StrategySpec& strategy, SegmenterBackend& backend,
                         SeededRng& rng, const std::string& dataset,
                         MultimaskPolicy policy) {
  ImageEvaluator evaluator(item, backend, dataset, policy);
  return evaluator.evaluate(feature, strategy, rng).record;
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const DatasetManifest manifest = load_dataset(config.dataset_root, config.layout);
  std::vector<std::size_t> indices;
  for (std::size_t i = 0; i < manifest.items.size(); ++i) {
    if (manifest.items[i].label_path) indices.push_back(i);
    if (config.limit && indices.size() == config.limit) break;
  }
  if (indices.empty()) throw Error(ErrorCode::kNoData, "dataset has no labeled items");

  fs::create_directories(config.output_dir);
  const std::uint64_t seed = *config.seed;
  std::vector<std::vector<EvalRecord>> per_item(indices.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  auto worker = [&] {
    try {
      auto backend = make_backend(config.backend);
      for (std::size_t slot = next++; slot < indices.size(); slot = next++) {
        const ManifestEntry& entry = manifest.items[indices[slot]];
        auto& records = per_item[slot];
        std::optional<DatasetItem> item;
        std::string load_error;
        try {
          item = load_item(manifest, indices[slot]);
        } catch (const std::exception& e) {
          load_error = describe(e);
        }
        std::optional<ImageEvaluator> evaluator;
        if (item) evaluator.emplace(*item, *backend, manifest.name, config.multimask);
        for (Feature f : config.features) {
          for (const auto& s : config.strategies) {
            SeededRng rng(derive_cell_seed(seed, entry.id, feature_name(f), s.label()));
            if (!evaluator) {
              EvalRecord r = base_record(manifest.name, entry.id, f, s, rng.seed(),
                                         backend->identity());
              r.error = load_error;
              records.push_back(std::move(r));
              continue;
            }
            CellResult cell = evaluator->evaluate(f, s, rng);
            if (slot < config.overlays && cell.prediction) {
              const cv::Mat overlay = render_overlay(item->image,
                                                     feature_mask(*item->labels, f),
                                                     *cell.prediction, cell.prompts);
              std::string stem = entry.id + "_" + std::string(feature_name(f)) + "_" + s.label();
              std::replace(stem.begin(), stem.end(), '/', '_');
              fs::create_directories(config.output_dir / "overlays");
              cv::imwrite((config.output_dir / "overlays" / (stem + ".png")).string(), overlay);
            }
            records.push_back(std::move(cell.record));
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(fatal_mutex);
      if (!fatal) fatal = std::current_exception();
      next = indices.size();
    }
  };

  {
    std::vector<std::jthread> pool;
    const int n = std::min<int>(config.workers, static_cast<int>(indices.size()));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (fatal) std::rethrow_exception(fatal);

  std::vector<EvalRecord> all;
  for (auto& recs : per_item) {
    std::move(recs.begin(), recs.end(), std::back_inserter(all));
  }
  write_records_csv(config.output_dir / "records.csv", all);
  write_text(config.output_dir / "summary.json", summarize(all).dump(2) + "\n");
  write_text(config.output_dir / "config.json", experiment_config_to_json(config).dump(2) + "\n");

  RunResult result;
  result.results_dir = config.output_dir;
  result.records = all.size();
  for (const auto& r : all) {
    if (r.failed()) ++result.errors;
    else if (r.skipped) ++result.skipped;
    else ++result.scored;
  }
  return result;
}

nlohmann::json summarize(std::span<const EvalRecord> records) {
  struct Cell {
    Feature feature = Feature::kPupil;
    std::string label;
    std::string kind;
    double perturbation = 0;
    std::size_t n = 0, errors = 0, degenerate = 0;
    std::map<std::string, std::size_t> skipped;
    std::vector<double> dice, iou, hd;
  };
  std::vector<Cell> cells;
  std::map<std::pair<int, std::string>, std::size_t> index;
  std::vector<std::string> strategy_order;
  std::size_t scored = 0, skipped = 0, errors = 0;
  std::set<std::string> datasets, backends;

  for (const auto& r : records) {
    const std::string label = strategy_label(r);
    if (std::find(strategy_order.begin(), strategy_order.end(), label) == strategy_order.end()) {
      strategy_order.push_back(label);
    }
    const auto key = std::make_pair(static_cast<int>(r.feature), label);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, cells.size()).first;
      Cell fresh;
      fresh.feature = r.feature;
      fresh.label = label;
      fresh.kind = r.strategy;
      fresh.perturbation = r.perturbation;
      cells.push_back(std::move(fresh));
    }
    Cell& c = cells[it->second];
    datasets.insert(r.dataset);
    backends.insert(r.backend);
    if (r.failed()) {
      ++c.errors;
      ++errors;
    } else if (r.skipped) {
      ++c.skipped[r.skip_reason ? std::string(skip_reason_name(*r.skip_reason)) : "unknown"];
      ++skipped;
    } else {
      ++c.n;
      ++scored;
      if (r.degenerate) ++c.degenerate;
      if (r.dice) c.dice.push_back(*r.dice);
      if (r.iou) c.iou.push_back(*r.iou);
      if (r.hausdorff) c.hd.push_back(*r.hausdorff);
    }
  }

  auto strategy_rank = [&](const std::string& label) {
    return std::find(strategy_order.begin(), strategy_order.end(), label) -
           strategy_order.begin();
  };
  std::stable_sort(cells.begin(), cells.end(), [&](const Cell& a, const Cell& b) {
    if (a.feature != b.feature) return a.feature < b.feature;
    return strategy_rank(a.label) < strategy_rank(b.label);
  });

  nlohmann::json jcells = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json skips = nlohmann::json::object();
    for (SkipReason reason : {SkipReason::kFeatureAbsent, SkipReason::kHoleAbsent,
                              SkipReason::kStrategyInapplicable}) {
      const std::string name(skip_reason_name(reason));
      skips[name] = c.skipped.count(name) ? c.skipped.at(name) : 0;
    }
    jcells.push_back({{"feature", feature_name(c.feature)},
                      {"strategy", c.label},
                      {"kind", c.kind},
                      {"perturbation", c.perturbation},
                      {"n", c.n},
                      {"skipped", skips},
                      {"errors", c.errors},
                      {"degenerate", c.degenerate},
                      {"dice", stats_json(c.dice)},
                      {"iou", stats_json(c.iou)},
                      {"hausdorff", stats_json(c.hd)}});
  }

  // Best unperturbed strategy per feature by mean IoU.
  nlohmann::json best = nlohmann::json::object();
  std::map<Feature, double> best_iou;
  for (Feature f : kAllFeatures) {
    const Cell* winner = nullptr;
    double winner_iou = -1;
    for (const auto& c : cells) {
      if (c.feature != f || c.perturbation > 0 || c.iou.empty()) continue;
      const double m = stats_of(c.iou).mean;
      if (m > winner_iou) {
        winner_iou = m;
        winner = &c;
      }
    }
    if (winner) {
      best[std::string(feature_name(f))] = {{"strategy", winner->label}, {"mean_iou", winner_iou}};
      best_iou[f] = winner_iou;
    }
  }
  nlohmann::json miou = nlohmann::json::object();
  if (!best_iou.empty()) {
    double sum = 0, sum_ns = 0;
    std::size_t n_ns = 0;
    for (const auto& [f, v] : best_iou) {
      sum += v;
      if (f != Feature::kSclera) {
        sum_ns += v;
        ++n_ns;
      }
    }
    miou["best_per_feature"] = sum / static_cast<double>(best_iou.size());
    miou["best_per_feature_excluding_sclera"] =
        n_ns ? nlohmann::json(sum_ns / static_cast<double>(n_ns)) : nlohmann::json(nullptr);
  }

  return {{"datasets", std::vector<std::string>(datasets.begin(), datasets.end())},
          {"backends", std::vector<std::string>(backends.begin(), backends.end())},
          {"totals", {{"records", records.size()},
                      {"scored", scored},
                      {"skipped", skipped},
                      {"errors", errors}}},
          {"cells", jcells},
          {"best_strategy", best},
          {"miou", miou}};
}

}  // namespace eyesam
