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

#include "eyesam/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "eyesam/error.hpp"
#include "eyesam/harness.hpp"
#include "eyesam/image_io.hpp"
#include "eyesam/records_io.hpp"

namespace fs = std::filesystem;

namespace eyesam {
namespace {

std::optional<double> metric_of(const EvalRecord& r, Metric m) {
  switch (m) {
    case Metric::kDice: return r.dice;
    case Metric::kIou: return r.iou;
    case Metric::kHausdorff: return r.hausdorff;
  }
  return std::nullopt;
}

std::optional<double> mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string fixed4(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

std::string percent(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g%%", f * 100.0);
  return buf;
}

double quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string title_case(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kDice: return "dice";
    case Metric::kIou: return "iou";
    case Metric::kHausdorff: return "hausdorff";
  }
  return "?";
}

bool higher_is_better(Metric m) { return m != Metric::kHausdorff; }

PerturbationTable perturbation_table(std::span<const EvalRecord> records) {
  std::map<double, std::vector<std::array<std::vector<double>, 3>>> acc;
  for (const auto& r : records) {
    if (r.perturbation <= 0) continue;
    auto& row = acc[r.perturbation];
    if (row.empty()) row.resize(kAllFeatures.size());
    if (!r.scored()) continue;
    auto& cell = row[static_cast<std::size_t>(r.feature)];
    if (r.dice) cell[0].push_back(*r.dice);
    if (r.iou) cell[1].push_back(*r.iou);
    if (r.hausdorff) cell[2].push_back(*r.hausdorff);
  }
  PerturbationTable t;
  for (const auto& [fraction, cells] : acc) {
    PerturbationRow row;
    row.fraction = fraction;
    for (const auto& c : cells) {
      PerturbationRow::Entry e{mean_of(c[0]), mean_of(c[1]), mean_of(c[2])};
      t.missing += !e.dice + !e.iou + !e.hausdorff;
      row.features.push_back(e);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string perturbation_table_csv(const PerturbationTable& t) {
  std::string out = "perturbation";
  for (Feature f : kAllFeatures) {
    const std::string n(feature_name(f));
    out += "," + n + "_dice," + n + "_iou," + n + "_hausdorff";
  }
  out += '\n';
  for (const auto& row : t.rows) {
    out += format_real(row.fraction);
    for (const auto& e : row.features) {
      out += "," + fixed4(e.dice) + "," + fixed4(e.iou) + "," + fixed4(e.hausdorff);
    }
    out += '\n';
  }
  return out;
}

std::string perturbation_table_markdown(const PerturbationTable& t) {
  std::string head = "| Perturbation |";
  std::string rule = "|---|";
  for (Feature f : kAllFeatures) {
    const std::string n = title_case(feature_name(f));
    head += " " + n + " Dice ↑ | " + n + " IoU ↑ | " + n + " HD ↓ |";
    rule += "---:|---:|---:|";
  }
  std::string out = head + "\n" + rule + "\n";
  for (const auto& row : t.rows) {
    out += "| " + percent(row.fraction) + " |";
    for (const auto& e : row.features) {
      out += " " + fixed4(e.dice) + " | " + fixed4(e.iou) + " | " + fixed4(e.hausdorff) + " |";
    }
    out += '\n';
  }
  if (t.missing > 0) {
    out += "\nBlank entries: " + std::to_string(t.missing) + " (no scored records).\n";
  }
  return out;
}

std::vector<StrategySeries> strategy_series(std::span<const EvalRecord> records,
                                            Feature feature, Metric metric) {
  std::vector<StrategySeries> out;
  for (const auto& r : records) {
    if (r.perturbation > 0) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const StrategySeries& s) { return s.strategy == r.strategy; });
    if (it == out.end()) {
      out.push_back({r.strategy, {}});
      it = out.end() - 1;
    }
    if (r.feature != feature || !r.scored()) continue;
    if (const auto v = metric_of(r, metric)) it->values.push_back(*v);
  }
  return out;
}

std::optional<std::size_t> best_strategy(const std::vector<StrategySeries>& series,
                                         Metric metric) {
  std::optional<std::size_t> best;
  double best_mean = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto m = mean_of(series[i].values);
    if (!m) continue;
    const bool better = !best || (higher_is_better(metric) ? *m > best_mean : *m < best_mean);
    if (better) {
      best = i;
      best_mean = *m;
    }
  }
  return best;
}

cv::Mat render_box_plot(const std::vector<StrategySeries>& series, Metric metric,
                        const std::string& title) {
  const int left = 60, top = 40, plot_h = 300, step = 70;
  const int width = left + step * std::max<int>(1, static_cast<int>(series.size())) + 20;
  const int height = top + plot_h + 60;
  cv::Mat img(height, width, CV_8UC3, cv::Scalar(255, 255, 255));

  double y_max = 1.0;
  if (metric == Metric::kHausdorff) {
    double m = 0;
    for (const auto& s : series) {
      for (double v : s.values) m = std::max(m, v);
    }
    y_max = m > 0 ? m * 1.05 : 1.0;
  }
  auto to_y = [&](double v) {
    return top + plot_h - static_cast<int>(std::lround(v / y_max * plot_h));
  };

  const cv::Scalar axis(0, 0, 0), grid(220, 220, 220), normal(160, 110, 40),
      best_color(0, 0, 255);
  for (int k = 0; k <= 4; ++k) {
    const double v = y_max * k / 4.0;
    const int y = to_y(v);
    cv::line(img, {left, y}, {width - 10, y}, grid, 1);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    cv::putText(img, buf, {4, y + 4}, cv::FONT_HERSHEY_SIMPLEX, 0.35, axis, 1, cv::LINE_AA);
  }
  cv::line(img, {left, top}, {left, top + plot_h}, axis, 1);
  cv::line(img, {left, top + plot_h}, {width - 10, top + plot_h}, axis, 1);
  cv::putText(img, title, {left, 24}, cv::FONT_HERSHEY_SIMPLEX, 0.5, axis, 1, cv::LINE_AA);

  const auto best = best_strategy(series, metric);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const int cx = left + step * static_cast<int>(i) + step / 2;
    cv::putText(img, series[i].strategy, {cx - step / 2 + 4, top + plot_h + 20},
                cv::FONT_HERSHEY_SIMPLEX, 0.35, axis, 1, cv::LINE_AA);
    if (series[i].values.empty()) continue;
    std::vector<double> v = series[i].values;
    std::sort(v.begin(), v.end());
    const cv::Scalar color = best && *best == i ? best_color : normal;
    const int q1 = to_y(quantile(v, 0.25)), q3 = to_y(quantile(v, 0.75));
    const int med = to_y(quantile(v, 0.5));
    const int lo = to_y(v.front()), hi = to_y(v.back());
    cv::line(img, {cx, hi}, {cx, q3}, color, 1);
    cv::line(img, {cx, q1}, {cx, lo}, color, 1);
    cv::line(img, {cx - 8, hi}, {cx + 8, hi}, color, 1);
    cv::line(img, {cx - 8, lo}, {cx + 8, lo}, color, 1);
    cv::rectangle(img, {cx - 20, q3}, {cx + 20, q1}, color, 2);
    cv::line(img, {cx - 20, med}, {cx + 20, med}, color, 2);
  }
  return img;
}

cv::Mat render_overlay(const cv::Mat& image, const BinaryMask& truth,
                       const BinaryMask& predicted, const PromptSet& prompts) {
  cv::Mat out;
  cv::cvtColor(to_rgb8(image), out, cv::COLOR_RGB2BGR);
  if (truth.width() != out.cols || truth.height() != out.rows ||
      predicted.width() != out.cols || predicted.height() != out.rows) {
    throw Error(ErrorCode::kShapeMismatch, "overlay masks do not match the image");
  }
  const cv::Vec3b fill(0, 215, 255);
  for (const auto& [x, y] : predicted.foreground()) {
    cv::Vec3b& px = out.at<cv::Vec3b>(y, x);
    for (int c = 0; c < 3; ++c) {
      px[c] = cv::saturate_cast<std::uint8_t>(0.55 * px[c] + 0.45 * fill[c]);
    }
  }
  std::vector<std::vector<cv::Point>> contours;
  cv::findContours(mask_to_mat(truth), contours, cv::RETR_LIST, cv::CHAIN_APPROX_NONE);
  cv::drawContours(out, contours, -1, cv::Scalar(255, 0, 255), 1);
  if (prompts.box) {
    const Box& b = *prompts.box;
    cv::rectangle(out, {b.x_min, b.y_min}, {b.x_max, b.y_max}, cv::Scalar(230, 216, 173), 1);
  }
  const int r = std::max(2, std::min(out.cols, out.rows) / 60);
  for (const auto& p : prompts.points) {
    const cv::Scalar c = p.foreground() ? cv::Scalar(0, 255, 0) : cv::Scalar(0, 0, 255);
    cv::circle(out, {p.x, p.y}, r, c, cv::FILLED);
    cv::circle(out, {p.x, p.y}, r, cv::Scalar(0, 0, 0), 1);
  }
  return out;
}

std::vector<fs::path> emit_reports(const fs::path& results_dir,
                                   const std::set<std::string>& formats) {
  for (const auto& f : formats) {
    if (f != "csv" && f != "json" && f != "png") {
      throw Error(ErrorCode::kInvalidArgument, "unknown report format '" + f + "'");
    }
  }
  const fs::path records_path = results_dir / "records.csv";
  if (!fs::exists(records_path)) {
    throw Error(ErrorCode::kIoError, "no records file at " + records_path.string());
  }
  const std::vector<EvalRecord> records = read_records_csv(records_path);
  if (records.empty()) throw Error(ErrorCode::kNoData, "records file has no rows");

  std::vector<fs::path> written;
  const nlohmann::json summary = summarize(records);
  const PerturbationTable table = perturbation_table(records);

  if (formats.count("csv")) {
    std::string s =
        "feature,strategy,perturbation,n,skipped,errors,degenerate,"
        "dice_mean,dice_median,dice_std,iou_mean,iou_median,iou_std,"
        "hausdorff_mean,hausdorff_median,hausdorff_std\n";
    for (const auto& c : summary["cells"]) {
      std::size_t skipped = 0;
      for (const auto& [_, n] : c["skipped"].items()) skipped += n.get<std::size_t>();
      s += c["feature"].get<std::string>() + "," + c["strategy"].get<std::string>() + "," +
           format_real(c["perturbation"].get<double>()) + "," +
           std::to_string(c["n"].get<std::size_t>()) + "," + std::to_string(skipped) + "," +
           std::to_string(c["errors"].get<std::size_t>()) + "," +
           std::to_string(c["degenerate"].get<std::size_t>());
      for (const char* m : {"dice", "iou", "hausdorff"}) {
        for (const char* k : {"mean", "median", "std"}) {
          s += ",";
          if (!c[m].is_null()) s += format_real(c[m][k].get<double>());
        }
      }
      s += '\n';
    }
    written.push_back(results_dir / "strategy_summary.csv");
    write_text(written.back(), s);
    written.push_back(results_dir / "perturbation_table.csv");
    write_text(written.back(), perturbation_table_csv(table));
    written.push_back(results_dir / "perturbation_table.md");
    write_text(written.back(), perturbation_table_markdown(table));
  }

  if (formats.count("json")) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json jr{{"perturbation", row.fraction}};
      for (std::size_t i = 0; i < row.features.size(); ++i) {
        const auto& e = row.features[i];
        auto opt = [](const std::optional<double>& v) {
          return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
        };
        jr[std::string(feature_name(kAllFeatures[i]))] = {
            {"dice", opt(e.dice)}, {"iou", opt(e.iou)}, {"hausdorff", opt(e.hausdorff)}};
      }
      rows.push_back(jr);
    }
    nlohmann::json panels = nlohmann::json::object();
    for (Feature f : kAllFeatures) {
      for (Metric m : {Metric::kDice, Metric::kIou, Metric::kHausdorff}) {
        const auto series = strategy_series(records, f, m);
        const auto b = best_strategy(series, m);
        panels[std::string(feature_name(f))][std::string(metric_name(m))] =
            b ? nlohmann::json(series[*b].strategy) : nlohmann::json(nullptr);
      }
    }
    nlohmann::json report{{"summary", summary},
                          {"perturbation_table", {{"rows", rows}, {"missing", table.missing}}},
                          {"best_strategy_by_panel", panels}};
    written.push_back(results_dir / "report.json");
    write_text(written.back(), report.dump(2) + "\n");
  }

  if (formats.count("png")) {
    fs::create_directories(results_dir / "plots");
    for (Feature f : kAllFeatures) {
      for (Metric m : {Metric::kDice, Metric::kIou, Metric::kHausdorff}) {
        const auto series = strategy_series(records, f, m);
        const std::string stem = std::string(metric_name(m)) + "_" + std::string(feature_name(f));
        const cv::Mat plot = render_box_plot(series, m, title_case(feature_name(f)) + " " +
                                                            std::string(metric_name(m)));
        written.push_back(results_dir / "plots" / (stem + ".png"));
        if (!cv::imwrite(written.back().string(), plot)) {
          throw Error(ErrorCode::kIoError, "cannot write " + written.back().string());
        }
      }
    }
  }
  return written;
}

}  // namespace eyesam
