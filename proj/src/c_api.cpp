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

#include "junction/junction.h"

#include "junction/cases.hpp"
#include "junction/error.hpp"
#include "junction/io.hpp"
#include "junction/training.hpp"

#include <limits>
#include <string>

struct jn_config
{
  junction::Config value;
};

struct jn_qtable
{
  junction::QTable value;
};

struct jn_network
{
  junction::BeliefNetwork value;
  std::string summary;
};

struct jn_trace
{
  junction::Trace value;
};

struct jn_curve
{
  std::vector<double> rewards;
  std::vector<double> epsilons;
};

namespace
{

thread_local std::string g_last_error;

jn_status status_of(junction::ErrorCode code)
{
  using junction::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return JN_INVALID_ARGUMENT;
    case ErrorCode::kConfig:
      return JN_CONFIG_ERROR;
    case ErrorCode::kIo:
      return JN_IO_ERROR;
    case ErrorCode::kMetadataMismatch:
      return JN_METADATA_MISMATCH;
    case ErrorCode::kInconsistentEvidence:
      return JN_INCONSISTENT_EVIDENCE;
    case ErrorCode::kEmptyCorpus:
      return JN_EMPTY_CORPUS;
    case ErrorCode::kUnknownCase:
      return JN_UNKNOWN_CASE;
  }
  return JN_INTERNAL_ERROR;
}

// Runs `f`, translating exceptions into status codes and the thread-local message.
template <typename F>
jn_status guarded(F && f)
{
  g_last_error.clear();
  try {
    f();
    return JN_OK;
  } catch (const junction::Error & e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception & e) {
    g_last_error = e.what();
    return JN_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return JN_INTERNAL_ERROR;
  }
}

jn_status invalid(const char * message)
{
  g_last_error = message;
  return JN_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char * jn_version(void) { return "1.0.0"; }

int jn_abi_version(void) { return JN_ABI_VERSION; }

const char * jn_last_error(void) { return g_last_error.c_str(); }

const char * jn_status_name(jn_status status)
{
  switch (status) {
    case JN_OK:
      return "ok";
    case JN_INVALID_ARGUMENT:
      return "invalid argument";
    case JN_CONFIG_ERROR:
      return "config error";
    case JN_IO_ERROR:
      return "i/o error";
    case JN_METADATA_MISMATCH:
      return "metadata mismatch";
    case JN_INCONSISTENT_EVIDENCE:
      return "inconsistent evidence";
    case JN_EMPTY_CORPUS:
      return "empty corpus";
    case JN_UNKNOWN_CASE:
      return "unknown case";
    case JN_INTERNAL_ERROR:
      return "internal error";
  }
  return "unknown status";
}

jn_status jn_config_load(const char * path, jn_config ** out)
{
  if (out == nullptr) {
    return invalid("out must not be NULL");
  }
  return guarded([&] {
    auto cfg = std::make_unique<jn_config>();
    if (path != nullptr) {
      cfg->value = junction::load_config(path);
    }
    *out = cfg.release();
  });
}

jn_status jn_config_for_case(const char * case_id, const char * overrides_path, jn_config ** out)
{
  if (case_id == nullptr || out == nullptr) {
    return invalid("case_id and out must not be NULL");
  }
  return guarded([&] {
    auto cfg = std::make_unique<jn_config>();
    cfg->value = junction::make_case(junction::case_from_string(case_id));
    if (overrides_path != nullptr) {
      cfg->value = junction::load_config(overrides_path, cfg->value);
    }
    *out = cfg.release();
  });
}

jn_status jn_config_set_episodes(jn_config * cfg, uint32_t episodes)
{
  if (cfg == nullptr) {
    return invalid("cfg must not be NULL");
  }
  cfg->value.learner.episodes = episodes;
  return JN_OK;
}

jn_status jn_config_set_tom_network(jn_config * cfg, const char * path)
{
  if (cfg == nullptr) {
    return invalid("cfg must not be NULL");
  }
  cfg->value.tom_network = path == nullptr ? std::string() : std::string(path);
  return JN_OK;
}

void jn_config_free(jn_config * cfg) { delete cfg; }

jn_status jn_train(
  const jn_config * cfg, const jn_network * network, const jn_qtable * initial, uint64_t seed,
  jn_qtable ** table_out, jn_curve ** curve_out)
{
  if (cfg == nullptr || table_out == nullptr) {
    return invalid("cfg and table_out must not be NULL");
  }
  return guarded([&] {
    const junction::BeliefNetwork net = network ? network->value : junction::load_network(cfg->value);
    std::optional<junction::QTable> start;
    if (initial != nullptr) {
      start = initial->value;
    }
    junction::TrainingResult result = junction::train_agent(cfg->value, net, seed, std::move(start));
    auto table = std::make_unique<jn_qtable>();
    table->value = std::move(result.table);
    if (curve_out != nullptr) {
      auto curve = std::make_unique<jn_curve>();
      curve->rewards = std::move(result.curve);
      curve->epsilons = std::move(result.epsilons);
      *curve_out = curve.release();
    }
    *table_out = table.release();
  });
}

size_t jn_curve_size(const jn_curve * curve) { return curve ? curve->rewards.size() : 0; }

double jn_curve_value(const jn_curve * curve, size_t episode)
{
  if (curve == nullptr || episode >= curve->rewards.size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return curve->rewards[episode];
}

double jn_curve_epsilon(const jn_curve * curve, size_t episode)
{
  if (curve == nullptr || episode >= curve->epsilons.size()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return curve->epsilons[episode];
}

jn_status jn_curve_write_csv(const jn_curve * curve, const char * path)
{
  if (curve == nullptr || path == nullptr) {
    return invalid("curve and path must not be NULL");
  }
  return guarded([&] {
    junction::write_text_file(path, junction::learning_curve_csv(curve->rewards, curve->epsilons));
  });
}

void jn_curve_free(jn_curve * curve) { delete curve; }

jn_status jn_qtable_save(const jn_qtable * table, const char * path)
{
  if (table == nullptr || path == nullptr) {
    return invalid("table and path must not be NULL");
  }
  return guarded([&] { junction::write_text_file(path, table->value.to_json()); });
}

jn_status jn_qtable_load(const char * path, jn_qtable ** out)
{
  if (path == nullptr || out == nullptr) {
    return invalid("path and out must not be NULL");
  }
  return guarded([&] {
    auto table = std::make_unique<jn_qtable>();
    table->value = junction::QTable::from_json(junction::read_text_file(path));
    *out = table.release();
  });
}

jn_status jn_qtable_check(const jn_qtable * table, const jn_config * cfg)
{
  if (table == nullptr || cfg == nullptr) {
    return invalid("table and cfg must not be NULL");
  }
  return guarded([&] { table->value.check_compatible(cfg->value.bins, cfg->value.actions); });
}

size_t jn_qtable_state_count(const jn_qtable * table) { return table ? table->value.state_count() : 0; }

void jn_qtable_free(jn_qtable * table) { delete table; }

jn_status jn_network_default(jn_network ** out)
{
  if (out == nullptr) {
    return invalid("out must not be NULL");
  }
  return guarded([&] {
    auto net = std::make_unique<jn_network>();
    net->value = junction::default_malice_network();
    *out = net.release();
  });
}

jn_status jn_network_load(const char * path, jn_network ** out)
{
  if (path == nullptr || out == nullptr) {
    return invalid("path and out must not be NULL");
  }
  return guarded([&] {
    auto net = std::make_unique<jn_network>();
    net->value = junction::network_from_json(junction::read_text_file(path));
    *out = net.release();
  });
}

jn_status jn_network_save(const jn_network * network, const char * path)
{
  if (network == nullptr || path == nullptr) {
    return invalid("network and path must not be NULL");
  }
  return guarded([&] { junction::write_text_file(path, junction::network_to_json(network->value)); });
}

jn_status jn_network_fit_corpus(const char * corpus_dir, jn_network ** out)
{
  if (corpus_dir == nullptr || out == nullptr) {
    return invalid("corpus_dir and out must not be NULL");
  }
  return guarded([&] {
    const auto corpus = junction::read_corpus(corpus_dir);
    auto net = std::make_unique<jn_network>();
    net->value = junction::fit_cpts(corpus);
    *out = net.release();
  });
}

const char * jn_network_summary(jn_network * network)
{
  if (network == nullptr) {
    return "";
  }
  network->summary = junction::network_summary(network->value);
  return network->summary.c_str();
}

jn_status jn_network_infer(
  const jn_network * network, int speed_bin, int accel_bin, int yielding, double * p_malicious)
{
  if (network == nullptr || p_malicious == nullptr) {
    return invalid("network and p_malicious must not be NULL");
  }
  if (speed_bin < 0 || speed_bin > 2 || accel_bin < 0 || accel_bin > 2 || yielding < -1 || yielding > 1) {
    return invalid("observation bin out of range");
  }
  return guarded([&] {
    junction::Observation obs;
    obs.speed = static_cast<junction::SpeedBin>(speed_bin);
    obs.accel = static_cast<junction::AccelBin>(accel_bin);
    if (yielding >= 0) {
      obs.yielding = static_cast<junction::YieldBin>(yielding);
    }
    *p_malicious = junction::infer_malice(network->value, obs);
  });
}

void jn_network_free(jn_network * network) { delete network; }

jn_status jn_corpus_generate(const jn_config * cfg, uint32_t episodes, uint64_t seed, const char * dir)
{
  if (cfg == nullptr || dir == nullptr) {
    return invalid("cfg and dir must not be NULL");
  }
  return guarded([&] { junction::generate_corpus(cfg->value, episodes, seed, dir); });
}

jn_status jn_run_episode(
  const jn_config * cfg, const jn_qtable * table, const jn_network * network, uint64_t seed, jn_trace ** out)
{
  if (cfg == nullptr || table == nullptr || out == nullptr) {
    return invalid("cfg, table and out must not be NULL");
  }
  return guarded([&] {
    const junction::BeliefNetwork net = network ? network->value : junction::load_network(cfg->value);
    auto trace = std::make_unique<jn_trace>();
    trace->value = junction::evaluate(cfg->value, table->value, net, seed);
    *out = trace.release();
  });
}

size_t jn_trace_rows(const jn_trace * trace) { return trace ? trace->value.rows.size() : 0; }

int jn_trace_collided(const jn_trace * trace) { return trace && trace->value.collided ? 1 : 0; }

jn_status jn_trace_metrics(const jn_trace * trace, jn_metrics * out)
{
  if (trace == nullptr || out == nullptr) {
    return invalid("trace and out must not be NULL");
  }
  return guarded([&] {
    const junction::MetricsReport m = junction::compute_metrics(trace->value);
    out->has_crossing_time = m.crossing_time ? 1 : 0;
    out->crossing_time = m.crossing_time.value_or(std::numeric_limits<double>::quiet_NaN());
    out->min_speed = m.min_speed;
    out->comfort_index = m.comfort_index;
    out->mean_abs_jerk = m.mean_abs_jerk;
    out->min_distance = m.min_distance;
    out->collided = m.collided ? 1 : 0;
    out->partial = m.partial ? 1 : 0;
  });
}

jn_status jn_trace_write_csv(const jn_trace * trace, const char * path)
{
  if (trace == nullptr || path == nullptr) {
    return invalid("trace and path must not be NULL");
  }
  return guarded([&] { junction::write_text_file(path, junction::trace_to_csv(trace->value)); });
}

jn_status jn_trace_write_metrics_json(const jn_trace * trace, const char * path)
{
  if (trace == nullptr || path == nullptr) {
    return invalid("trace and path must not be NULL");
  }
  return guarded([&] {
    junction::write_text_file(path, junction::metrics_to_json(junction::compute_metrics(trace->value)));
  });
}

jn_status jn_trace_write_speed_svg(const jn_trace * trace, const char * path, const char * title)
{
  if (trace == nullptr || path == nullptr) {
    return invalid("trace and path must not be NULL");
  }
  return guarded([&] {
    junction::write_text_file(path, junction::speed_curve_svg(trace->value, title ? title : "ego speed"));
  });
}

jn_status jn_trace_write_distance_svg(const jn_trace * trace, const char * path, const char * title)
{
  if (trace == nullptr || path == nullptr) {
    return invalid("trace and path must not be NULL");
  }
  return guarded([&] {
    junction::write_text_file(path, junction::distance_curve_svg(trace->value, title ? title : "distance"));
  });
}

void jn_trace_free(jn_trace * trace) { delete trace; }

}  // extern "C"
