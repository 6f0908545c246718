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

// Command-line front end. Everything goes through the C interface of libjunction.
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error or unknown case,
// 3 collision during evaluation, 4 Q-table metadata mismatch. Usage errors follow CLI11.

#include "junction/junction.h"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCollision = 3;
constexpr int kExitMismatch = 4;

int exit_code_for(jn_status status)
{
  switch (status) {
    case JN_OK:
      return kExitOk;
    case JN_CONFIG_ERROR:
    case JN_UNKNOWN_CASE:
      return kExitConfig;
    case JN_METADATA_MISMATCH:
      return kExitMismatch;
    default:
      return kExitFailure;
  }
}

class Failure : public std::runtime_error
{
public:
  Failure(int exit_code, const std::string & message) : std::runtime_error(message), exit_code_(exit_code) {}
  [[nodiscard]] int exit_code() const { return exit_code_; }

private:
  int exit_code_;
};

void check(jn_status status, const std::string & context)
{
  if (status != JN_OK) {
    throw Failure(exit_code_for(status), fmt::format("{}: {} ({})", context, jn_last_error(), jn_status_name(status)));
  }
}

template <typename T, void (*Free)(T *)>
struct Deleter
{
  void operator()(T * p) const { Free(p); }
};
using ConfigPtr = std::unique_ptr<jn_config, Deleter<jn_config, jn_config_free>>;
using TablePtr = std::unique_ptr<jn_qtable, Deleter<jn_qtable, jn_qtable_free>>;
using NetworkPtr = std::unique_ptr<jn_network, Deleter<jn_network, jn_network_free>>;
using TracePtr = std::unique_ptr<jn_trace, Deleter<jn_trace, jn_trace_free>>;
using CurvePtr = std::unique_ptr<jn_curve, Deleter<jn_curve, jn_curve_free>>;

std::string utc_now()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// One manifest per output directory describing how its content was produced.
class Manifest
{
public:
  Manifest(std::string command, const fs::path & out) : out_(out)
  {
    j_["command"] = std::move(command);
    j_["version"] = jn_version();
    j_["output_dir"] = out.string();
    j_["started"] = utc_now();
  }

  nlohmann::ordered_json & operator[](const char * key) { return j_[key]; }

  void write()
  {
    j_["finished"] = utc_now();
    fs::create_directories(out_);
    std::ofstream(out_ / "manifest.json") << j_.dump(2) << "\n";
  }

private:
  fs::path out_;
  nlohmann::ordered_json j_;
};

ConfigPtr load_config(const std::string & path)
{
  jn_config * raw = nullptr;
  check(jn_config_load(path.empty() ? nullptr : path.c_str(), &raw), "loading config");
  return ConfigPtr(raw);
}

ConfigPtr case_config(const std::string & case_id, const std::string & overrides)
{
  jn_config * raw = nullptr;
  check(jn_config_for_case(case_id.c_str(), overrides.empty() ? nullptr : overrides.c_str(), &raw), "case " + case_id);
  return ConfigPtr(raw);
}

NetworkPtr optional_network(const std::string & path)
{
  if (path.empty()) {
    return NetworkPtr();
  }
  jn_network * raw = nullptr;
  check(jn_network_load(path.c_str(), &raw), "loading network " + path);
  return NetworkPtr(raw);
}

TablePtr load_table(const std::string & path)
{
  jn_qtable * raw = nullptr;
  check(jn_qtable_load(path.c_str(), &raw), "loading Q-table " + path);
  return TablePtr(raw);
}

bool is_distance_case(const std::string & case_id) { return case_id == "D25" || case_id == "D50"; }

struct CaseRun
{
  std::string case_id;
  std::string qtable;
  std::string tom;
  std::string config;
  std::uint64_t seed{0};
  fs::path out;
};

struct CaseResult
{
  jn_metrics metrics{};
};

CaseResult run_case(const CaseRun & run, const std::string & command)
{
  Manifest manifest(command, run.out);
  manifest["case"] = run.case_id;
  manifest["config"] = run.config;
  manifest["qtable"] = run.qtable;
  manifest["tom_network"] = run.tom;
  manifest["seed"] = run.seed;

  const ConfigPtr cfg = case_config(run.case_id, run.config);
  const TablePtr table = load_table(run.qtable);
  check(jn_qtable_check(table.get(), cfg.get()), "Q-table " + run.qtable);
  const NetworkPtr network = optional_network(run.tom);
  jn_trace * raw = nullptr;
  check(jn_run_episode(cfg.get(), table.get(), network.get(), run.seed, &raw), "running case " + run.case_id);
  const TracePtr trace(raw);

  fs::create_directories(run.out);
  check(jn_trace_write_csv(trace.get(), (run.out / "trace.csv").c_str()), "writing trace");
  check(jn_trace_write_metrics_json(trace.get(), (run.out / "metrics.json").c_str()), "writing metrics");
  const std::string title = fmt::format("Case {} ego speed", run.case_id);
  check(jn_trace_write_speed_svg(trace.get(), (run.out / "speed.svg").c_str(), title.c_str()), "writing plot");
  if (is_distance_case(run.case_id)) {
    const std::string dtitle = fmt::format("Case {} distance between vehicles", run.case_id);
    check(
      jn_trace_write_distance_svg(trace.get(), (run.out / "distance.svg").c_str(), dtitle.c_str()),
      "writing plot");
  }
  CaseResult result;
  check(jn_trace_metrics(trace.get(), &result.metrics), "computing metrics");
  manifest["collided"] = result.metrics.collided != 0;
  manifest.write();
  return result;
}

std::string fmt_opt(bool has, double v) { return has && std::isfinite(v) ? fmt::format("{:.3f}", v) : "-"; }

void print_metrics(const std::string & label, const jn_metrics & m)
{
  fmt::print(
    "{}: crossing {} s, min speed {:.3f} m/s, comfort {:.3f}, min distance {} m, collided {}\n", label,
    fmt_opt(m.has_crossing_time, m.crossing_time), m.min_speed, m.comfort_index,
    fmt_opt(true, m.min_distance), m.collided ? "yes" : "no");
}

int cmd_train(
  const std::string & config, const std::string & case_id, std::uint64_t seed, const fs::path & out,
  std::optional<std::uint32_t> episodes, const std::string & tom, const std::string & init)
{
  Manifest manifest("train", out);
  manifest["config"] = config;
  manifest["case"] = case_id;
  manifest["seed"] = seed;
  manifest["tom_network"] = tom;
  manifest["initial_qtable"] = init;

  const ConfigPtr cfg = case_id.empty() ? load_config(config) : case_config(case_id, config);
  if (episodes) {
    check(jn_config_set_episodes(cfg.get(), *episodes), "episodes");
  }
  const NetworkPtr network = optional_network(tom);
  const TablePtr initial = init.empty() ? TablePtr() : load_table(init);
  jn_qtable * table_raw = nullptr;
  jn_curve * curve_raw = nullptr;
  check(jn_train(cfg.get(), network.get(), initial.get(), seed, &table_raw, &curve_raw), "training");
  const TablePtr table(table_raw);
  const CurvePtr curve(curve_raw);
  const std::size_t n = jn_curve_size(curve.get());
  if (n == 0) {
    std::cerr << "warning: zero episodes requested, the Q-table is unchanged\n";
  }

  fs::create_directories(out);
  check(jn_qtable_save(table.get(), (out / "qtable.json").c_str()), "saving Q-table");
  check(jn_curve_write_csv(curve.get(), (out / "learning_curve.csv").c_str()), "saving learning curve");
  manifest["episodes"] = n;
  manifest["states"] = jn_qtable_state_count(table.get());
  manifest.write();
  if (n > 0) {
    fmt::print(
      "trained {} episodes, {} states, final mean reward {:.4f}\n", n, jn_qtable_state_count(table.get()),
      jn_curve_value(curve.get(), n - 1));
  }
  return kExitOk;
}

int cmd_fit_tom(const fs::path & corpus, const fs::path & out)
{
  jn_network * raw = nullptr;
  check(jn_network_fit_corpus(corpus.c_str(), &raw), "fitting " + corpus.string());
  const NetworkPtr network(raw);
  if (out.has_parent_path()) {
    fs::create_directories(out.parent_path());
  }
  check(jn_network_save(network.get(), out.c_str()), "saving network");
  std::cout << jn_network_summary(network.get());
  return kExitOk;
}

int cmd_inspect_tom(const std::string & path)
{
  jn_network * raw = nullptr;
  if (path.empty()) {
    check(jn_network_default(&raw), "default network");
  } else {
    check(jn_network_load(path.c_str(), &raw), "loading " + path);
  }
  const NetworkPtr network(raw);
  std::cout << jn_network_summary(network.get());
  return kExitOk;
}

int cmd_gen_corpus(const std::string & config, std::uint32_t episodes, std::uint64_t seed, const fs::path & out)
{
  Manifest manifest("gen-corpus", out);
  manifest["config"] = config;
  manifest["seed"] = seed;
  manifest["episodes"] = episodes;
  const ConfigPtr cfg = load_config(config);
  check(jn_corpus_generate(cfg.get(), episodes, seed, out.c_str()), "generating corpus");
  manifest.write();
  fmt::print("wrote {} episodes to {}\n", episodes, out.string());
  return kExitOk;
}

std::string comparison_csv(const std::vector<std::pair<std::string, jn_metrics>> & rows)
{
  std::string out = "run,crossing_time,min_speed,comfort_index,mean_abs_jerk,min_distance,collided,partial\n";
  for (const auto & [name, m] : rows) {
    out += fmt::format(
      "{},{},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", name,
      m.has_crossing_time ? fmt::format("{:.6f}", m.crossing_time) : std::string(), m.min_speed, m.comfort_index,
      m.mean_abs_jerk, m.min_distance, m.collided, m.partial);
  }
  return out;
}

std::string comparison_text(const std::vector<std::pair<std::string, jn_metrics>> & rows)
{
  std::string out = fmt::format(
    "{:<16} {:>12} {:>10} {:>9} {:>9} {:>9}\n", "run", "crossing[s]", "vmin[m/s]", "comfort", "dmin[m]", "collided");
  for (const auto & [name, m] : rows) {
    out += fmt::format(
      "{:<16} {:>12} {:>10.3f} {:>9.3f} {:>9} {:>9}\n", name, fmt_opt(m.has_crossing_time, m.crossing_time),
      m.min_speed, m.comfort_index, fmt_opt(true, m.min_distance), m.collided ? "yes" : "no");
  }
  return out;
}

int cmd_batch(const fs::path & manifest_path)
{
  std::ifstream in(manifest_path);
  if (!in) {
    throw Failure(kExitConfig, fmt::format("cannot open batch manifest '{}'", manifest_path.string()));
  }
  nlohmann::json spec;
  std::vector<CaseRun> runs;
  std::size_t threads = 1;
  fs::path summary;
  try {
    in >> spec;
    const fs::path base = manifest_path.parent_path();
    auto resolve = [&](const std::string & p) { return p.empty() || fs::path(p).is_absolute() ? p : (base / p).string(); };
    threads = spec.value("threads", std::size_t{1});
    if (spec.contains("summary")) {
      summary = resolve(spec.at("summary").get<std::string>());
    }
    for (const auto & job : spec.at("jobs")) {
      CaseRun run;
      run.case_id = job.at("case").get<std::string>();
      run.qtable = resolve(job.at("qtable").get<std::string>());
      run.tom = resolve(job.value("tom", std::string()));
      run.config = resolve(job.value("config", std::string()));
      run.seed = job.value("seed", std::uint64_t{0});
      run.out = resolve(job.at("out").get<std::string>());
      runs.push_back(std::move(run));
    }
  } catch (const nlohmann::json::exception & e) {
    throw Failure(kExitConfig, fmt::format("{}: {}", manifest_path.string(), e.what()));
  }

  std::vector<std::optional<CaseResult>> results(runs.size());
  std::vector<std::string> errors(runs.size());
  std::vector<int> codes(runs.size(), kExitOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      try {
        results[i] = run_case(runs[i], "batch");
      } catch (const Failure & f) {
        errors[i] = f.what();
        codes[i] = f.exit_code();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::max<std::size_t>(1, std::min(threads, runs.size())); ++t) {
    pool.emplace_back(worker);
  }
  for (auto & th : pool) {
    th.join();
  }

  int code = kExitOk;
  std::vector<std::pair<std::string, jn_metrics>> table;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string label = fmt::format("{}#{}", runs[i].case_id, runs[i].seed);
    if (!results[i]) {
      std::cerr << label << ": " << errors[i] << "\n";
      code = code == kExitOk ? codes[i] : code;
      continue;
    }
    table.emplace_back(label, results[i]->metrics);
    if (results[i]->metrics.collided && code == kExitOk) {
      code = kExitCollision;
    }
  }
  std::cout << comparison_text(table);
  if (!summary.empty()) {
    fs::create_directories(summary);
    std::ofstream(summary / "comparison.csv") << comparison_csv(table);
    std::ofstream(summary / "comparison.txt") << comparison_text(table);
  }
  return code;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Game-theoretic Q-learning decisions at unsignalized junctions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(jn_version()));

  std::string config;
  std::string case_id;
  std::string tom;
  std::string qtable;
  std::string init;
  std::string out;
  std::string corpus;
  std::string batch_manifest;
  // Defaults are written at option creation, so subcommands keep their own storage.
  std::uint64_t train_seed = 0;
  std::uint64_t run_seed = 0;
  std::uint64_t gen_seed = 0;
  std::uint32_t episode_count = 0;
  std::uint32_t corpus_size = 0;

  auto * train = app.add_subcommand("train", "train a Q-table and write its learning curve");
  train->add_option("--config", config, "YAML configuration (defaults when omitted)");
  train->add_option("--case", case_id, "start from a case preset; --config then overrides it");
  train->add_option("--seed", train_seed, "random seed")->default_val(42);
  train->add_option("--out", out, "output directory")->required();
  auto * train_episodes = train->add_option("--episodes", episode_count, "override the episode count");
  train->add_option("--tom", tom, "fitted malice network (JSON)");
  train->add_option("--init", init, "continue training from this Q-table");

  auto * run = app.add_subcommand("run-case", "evaluate a case with a frozen Q-table");
  run->add_option("--case", case_id, "A, A_mis, B, C, D25, D50 or roundabout")->required();
  run->add_option("--qtable", qtable, "trained Q-table")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory")->required();
  run->add_option("--seed", run_seed, "0 runs the nominal start, other seeds jitter it")->default_val(0);
  run->add_option("--tom", tom, "fitted malice network (JSON)");
  run->add_option("--config", config, "YAML overrides applied on top of the case");

  auto * fit = app.add_subcommand("fit-tom", "fit the malice network on a labelled corpus");
  fit->add_option("--corpus", corpus, "corpus directory")->required()->check(CLI::ExistingDirectory);
  fit->add_option("--out", out, "network file to write")->required();

  auto * inspect = app.add_subcommand("inspect-tom", "print the CPTs of a malice network");
  inspect->add_option("--network", tom, "network file (built-in CPTs when omitted)");

  auto * gen = app.add_subcommand("gen-corpus", "simulate labelled episodes for fit-tom");
  gen->add_option("--config", config, "YAML configuration");
  gen->add_option("--episodes", corpus_size, "episode count")->default_val(200);
  gen->add_option("--seed", gen_seed, "random seed")->default_val(7);
  gen->add_option("--out", out, "corpus directory")->required();

  auto * batch = app.add_subcommand("batch", "run case evaluations listed in a JSON manifest");
  batch->add_option("--manifest", batch_manifest, "batch manifest")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      std::optional<std::uint32_t> episodes;
      if (*train_episodes) {
        episodes = episode_count;
      }
      return cmd_train(config, case_id, train_seed, out, episodes, tom, init);
    }
    if (*run) {
      const CaseResult r = run_case({case_id, qtable, tom, config, run_seed, out}, "run-case");
      print_metrics("case " + case_id, r.metrics);
      return r.metrics.collided ? kExitCollision : kExitOk;
    }
    if (*fit) {
      return cmd_fit_tom(corpus, out);
    }
    if (*inspect) {
      return cmd_inspect_tom(tom);
    }
    if (*gen) {
      return cmd_gen_corpus(config, corpus_size, gen_seed, out);
    }
    if (*batch) {
      return cmd_batch(batch_manifest);
    }
  } catch (const Failure & f) {
    std::cerr << "error: " << f.what() << "\n";
    return f.exit_code();
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
