// Copyright 2026 The Junction Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "junction/io.hpp"

#include "junction/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace junction
{
namespace
{

std::string num(double v) { return fmt::format("{:.6f}", v); }

nlohmann::ordered_json finite_or_null(double v)
{
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

struct Series
{
  std::vector<double> t;
  std::vector<double> y;
};

std::string line_chart(
  const Series & s, const std::string & title, const std::string & y_label, double t_max, double y_max)
{
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 360.0;
  constexpr double kLeft = 60.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 40.0;
  constexpr double kBottom = 50.0;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double t) { return kLeft + plot_w * t / t_max; };
  auto py = [&](double y) { return kTop + plot_h * (1.0 - std::clamp(y, 0.0, y_max) / y_max); };

  std::string out = fmt::format(
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n",
    kWidth, kHeight);
  out += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  out += fmt::format(
    "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
    kWidth / 2.0, title);
  out += fmt::format(
    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", kLeft, kTop, plot_w,
    plot_h);
  const int x_ticks = 6;
  for (int i = 0; i <= x_ticks; ++i) {
    const double t = t_max * i / x_ticks;
    out += fmt::format(
      "<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"#ddd\"/>\n"
      "<text x=\"{0:.2f}\" y=\"{3}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{4:g}</text>\n",
      px(t), kTop, kTop + plot_h, kTop + plot_h + 18.0, t);
  }
  const int y_ticks = 5;
  for (int i = 0; i <= y_ticks; ++i) {
    const double y = y_max * i / y_ticks;
    out += fmt::format(
      "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#ddd\"/>\n"
      "<text x=\"{3}\" y=\"{4:.2f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{5:g}</text>\n",
      kLeft, py(y), kLeft + plot_w, kLeft - 6.0, py(y) + 4.0, y);
  }
  out += fmt::format(
    "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">t [s]</text>\n",
    kLeft + plot_w / 2.0, kHeight - 12.0);
  out += fmt::format(
    "<text x=\"16\" y=\"{0}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
    "transform=\"rotate(-90 16 {0})\">{1}</text>\n",
    kTop + plot_h / 2.0, y_label);
  out += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"2\" points=\"";
  bool first = true;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] > t_max + 1e-9 || !std::isfinite(s.y[i])) {
      continue;
    }
    out += fmt::format("{}{:.2f},{:.2f}", first ? "" : " ", px(s.t[i]), py(s.y[i]));
    first = false;
  }
  out += "\"/>\n</svg>\n";
  return out;
}

double nice_ceiling(double v)
{
  if (!(v > 0.0) || !std::isfinite(v)) {
    return 1.0;
  }
  const double step = std::pow(10.0, std::floor(std::log10(v)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * step >= v) {
      return m * step;
    }
  }
  return 10.0 * step;
}

std::vector<std::string> split(const std::string & line, char sep)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) {
    out.push_back(field);
  }
  return out;
}

}  // namespace

std::string trace_to_csv(const Trace & trace)
{
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRow & r : trace.rows) {
    out += fmt::format(
      "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(r.t), num(r.target.x), num(r.target.y),
      num(r.target.speed()), num(r.a_target), num(r.ego.x), num(r.ego.y), num(r.ego.speed()), num(r.a_ego),
      num(r.ttc), num(r.distance), num(r.w_s), num(r.r_tom), num(r.r_game), num(r.r_total));
  }
  return out;
}

std::string metrics_to_json(const MetricsReport & m)
{
  nlohmann::ordered_json j;
  j["crossing_time"] = m.crossing_time ? nlohmann::ordered_json(*m.crossing_time) : nlohmann::ordered_json(nullptr);
  j["min_speed"] = m.min_speed;
  j["comfort_index"] = m.comfort_index;
  j["mean_abs_jerk"] = m.mean_abs_jerk;
  j["min_distance"] = finite_or_null(m.min_distance);
  j["collided"] = m.collided;
  j["partial"] = m.partial;
  return j.dump(2) + "\n";
}

std::string learning_curve_csv(const std::vector<double> & curve, const std::vector<double> & epsilons)
{
  std::string out = "episode,mean_reward,epsilon\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out += fmt::format("{},{},{}\n", i + 1, num(curve[i]), num(i < epsilons.size() ? epsilons[i] : 0.0));
  }
  return out;
}

std::string speed_curve_svg(const Trace & trace, const std::string & title)
{
  Series s;
  double top = 0.0;
  for (const TraceRow & r : trace.rows) {
    s.t.push_back(r.t);
    s.y.push_back(r.ego.speed());
    top = std::max(top, r.ego.speed());
  }
  return line_chart(s, title, "ego speed [m/s]", 6.0, nice_ceiling(top));
}

std::string distance_curve_svg(const Trace & trace, const std::string & title)
{
  Series s;
  double top = 0.0;
  double t_end = 0.0;
  for (const TraceRow & r : trace.rows) {
    s.t.push_back(r.t);
    s.y.push_back(r.distance);
    if (std::isfinite(r.distance)) {
      top = std::max(top, r.distance);
    }
    t_end = r.t;
  }
  return line_chart(s, title, "distance [m]", nice_ceiling(std::max(t_end, 1.0)), nice_ceiling(top));
}

std::string comparison_csv(const std::vector<std::pair<std::string, MetricsReport>> & rows)
{
  std::string out = "run,crossing_time,min_speed,comfort_index,mean_abs_jerk,min_distance,collided,partial\n";
  for (const auto & [name, m] : rows) {
    out += fmt::format(
      "{},{},{},{},{},{},{},{}\n", name, m.crossing_time ? num(*m.crossing_time) : std::string(),
      num(m.min_speed), num(m.comfort_index), num(m.mean_abs_jerk), num(m.min_distance), m.collided ? 1 : 0,
      m.partial ? 1 : 0);
  }
  return out;
}

std::string comparison_table(const std::vector<std::pair<std::string, MetricsReport>> & rows)
{
  std::string out = fmt::format(
    "{:<12} {:>12} {:>10} {:>9} {:>10} {:>9}\n", "run", "crossing[s]", "vmin[m/s]", "comfort", "dmin[m]",
    "collided");
  for (const auto & [name, m] : rows) {
    out += fmt::format(
      "{:<12} {:>12} {:>10.3f} {:>9.3f} {:>10} {:>9}\n", name,
      m.crossing_time ? fmt::format("{:.3f}", *m.crossing_time) : std::string("-"), m.min_speed, m.comfort_index,
      std::isfinite(m.min_distance) ? fmt::format("{:.3f}", m.min_distance) : std::string("-"),
      m.collided ? "yes" : "no");
  }
  return out;
}

void write_corpus_episode(
  const std::filesystem::path & dir, const std::string & name, const Trace & trace, bool malicious,
  const Scene & scene, double v_max)
{
  if (!scene.conflict) {
    throw Error(ErrorCode::kInvalidArgument, "corpus episodes need a conflict point");
  }
  std::size_t observable = 0;
  std::size_t passed = trace.rows.size();
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    const TraceRow & r = trace.rows[k];
    if (!r.terminal && !r.target.exited) {
      observable = k + 1;
    }
    if (passed == trace.rows.size() && r.target.s_along >= scene.conflict->s_first) {
      passed = k;
    }
  }
  nlohmann::ordered_json meta;
  meta["format"] = "junction-corpus-episode";
  meta["version"] = 1;
  meta["label"] = malicious ? "malicious" : "benign";
  meta["v_max"] = v_max;
  meta["conflict_point"] = {scene.conflict->point.x, scene.conflict->point.y};
  meta["observable_rows"] = observable;
  meta["passed_row"] = passed;
  std::filesystem::create_directories(dir);
  write_text_file(dir / (name + ".csv"), trace_to_csv(trace));
  write_text_file(dir / (name + ".meta.json"), meta.dump(2) + "\n");
}

std::vector<LabeledEpisode> read_corpus(const std::filesystem::path & dir)
{
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kIo, fmt::format("corpus directory '{}' does not exist", dir.string()));
  }
  std::vector<std::filesystem::path> metas;
  for (const auto & entry : std::filesystem::directory_iterator(dir)) {
    const std::string file = entry.path().filename().string();
    if (entry.is_regular_file() && file.ends_with(".meta.json")) {
      metas.push_back(entry.path());
    }
  }
  std::sort(metas.begin(), metas.end());
  if (metas.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, fmt::format("no episodes found in '{}'", dir.string()));
  }

  std::vector<LabeledEpisode> corpus;
  for (const auto & meta_path : metas) {
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(read_text_file(meta_path));
    } catch (const nlohmann::json::exception & e) {
      throw Error(ErrorCode::kIo, fmt::format("{}: {}", meta_path.string(), e.what()));
    }
    const std::string stem = meta_path.filename().string();
    const auto csv_path = meta_path.parent_path() / (stem.substr(0, stem.size() - std::string(".meta.json").size()) + ".csv");
    LabeledEpisode ep;
    Vec2 conflict;
    std::size_t observable = 0;
    std::size_t passed = 0;
    double v_max = 0.0;
    try {
      ep.malicious = meta.at("label").get<std::string>() == "malicious";
      v_max = meta.at("v_max").get<double>();
      conflict = {meta.at("conflict_point").at(0).get<double>(), meta.at("conflict_point").at(1).get<double>()};
      observable = meta.at("observable_rows").get<std::size_t>();
      passed = meta.at("passed_row").get<std::size_t>();
    } catch (const nlohmann::json::exception & e) {
      throw Error(ErrorCode::kIo, fmt::format("{}: {}", meta_path.string(), e.what()));
    }

    std::istringstream csv(read_text_file(csv_path));
    std::string line;
    std::getline(csv, line);
    if (line != kTraceHeader) {
      throw Error(ErrorCode::kIo, fmt::format("{}: unexpected trace header", csv_path.string()));
    }
    ObservationTracker tracker(v_max);
    double a_prev = 0.0;
    for (std::size_t k = 0; k < observable && std::getline(csv, line); ++k) {
      const auto fields = split(line, ',');
      if (fields.size() != 15) {
        throw Error(ErrorCode::kIo, fmt::format("{}:{}: expected 15 columns", csv_path.string(), k + 2));
      }
      double x = 0.0;
      double y = 0.0;
      double v = 0.0;
      double a = 0.0;
      try {
        x = std::stod(fields[1]);
        y = std::stod(fields[2]);
        v = std::stod(fields[3]);
        a = std::stod(fields[4]);
      } catch (const std::exception &) {
        throw Error(ErrorCode::kIo, fmt::format("{}:{}: malformed number", csv_path.string(), k + 2));
      }
      ep.observations.push_back(tracker.observe(v, a_prev, euclidean_distance({x, y}, conflict), k < passed));
      a_prev = a;
    }
    corpus.push_back(std::move(ep));
  }
  return corpus;
}

std::string read_text_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path & path, const std::string & text)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path.string()));
    }
    out << text;
    if (!out) {
      throw Error(ErrorCode::kIo, fmt::format("write to '{}' failed", path.string()));
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace junction
