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

/* C interface to the junction decision engine.
 *
 * Every object is an opaque handle released by its *_free function (NULL is accepted).
 * Functions return a jn_status; on failure jn_last_error() describes the problem for the
 * calling thread until its next call into the library. */
#ifndef JUNCTION__JUNCTION_H_
#define JUNCTION__JUNCTION_H_

#include <stddef.h>
#include <stdint.h>

#if defined(JUNCTION_BUILDING_LIBRARY)
#define JN_API __attribute__((visibility("default")))
#else
#define JN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define JN_ABI_VERSION 1

typedef enum jn_status {
  JN_OK = 0,
  JN_INVALID_ARGUMENT = 1,
  JN_CONFIG_ERROR = 2,
  JN_IO_ERROR = 3,
  JN_METADATA_MISMATCH = 4,
  JN_INCONSISTENT_EVIDENCE = 5,
  JN_EMPTY_CORPUS = 6,
  JN_UNKNOWN_CASE = 7,
  JN_INTERNAL_ERROR = 99
} jn_status;

typedef struct jn_config jn_config;
typedef struct jn_qtable jn_qtable;
typedef struct jn_network jn_network;
typedef struct jn_trace jn_trace;
typedef struct jn_curve jn_curve;

typedef struct jn_metrics {
  int has_crossing_time;
  double crossing_time;   /* [s] */
  double min_speed;       /* [m/s] */
  double comfort_index;   /* [m/s] */
  double mean_abs_jerk;   /* [m/s^2] */
  double min_distance;    /* [m], +inf without a target */
  int collided;
  int partial;
} jn_metrics;

JN_API const char * jn_version(void);
JN_API int jn_abi_version(void);
JN_API const char * jn_last_error(void);
JN_API const char * jn_status_name(jn_status status);

/* Configuration. `path` may be NULL for the defaults. */
JN_API jn_status jn_config_load(const char * path, jn_config ** out);
/* Case preset (A, A_mis, B, C, D25, D50, roundabout) with an optional YAML file applied on top. */
JN_API jn_status jn_config_for_case(const char * case_id, const char * overrides_path, jn_config ** out);
JN_API jn_status jn_config_set_episodes(jn_config * cfg, uint32_t episodes);
JN_API jn_status jn_config_set_tom_network(jn_config * cfg, const char * path);
JN_API void jn_config_free(jn_config * cfg);

/* Training. `initial` may be NULL; otherwise training continues from a copy of it. */
JN_API jn_status jn_train(
  const jn_config * cfg, const jn_network * network, const jn_qtable * initial, uint64_t seed,
  jn_qtable ** table_out, jn_curve ** curve_out);

JN_API size_t jn_curve_size(const jn_curve * curve);
JN_API double jn_curve_value(const jn_curve * curve, size_t episode);
JN_API double jn_curve_epsilon(const jn_curve * curve, size_t episode);
JN_API jn_status jn_curve_write_csv(const jn_curve * curve, const char * path);
JN_API void jn_curve_free(jn_curve * curve);

JN_API jn_status jn_qtable_save(const jn_qtable * table, const char * path);
JN_API jn_status jn_qtable_load(const char * path, jn_qtable ** out);
/* JN_METADATA_MISMATCH when the table's bins or actions differ from the configuration. */
JN_API jn_status jn_qtable_check(const jn_qtable * table, const jn_config * cfg);
JN_API size_t jn_qtable_state_count(const jn_qtable * table);
JN_API void jn_qtable_free(jn_qtable * table);

/* Malice network. */
JN_API jn_status jn_network_default(jn_network ** out);
JN_API jn_status jn_network_load(const char * path, jn_network ** out);
JN_API jn_status jn_network_save(const jn_network * network, const char * path);
JN_API jn_status jn_network_fit_corpus(const char * corpus_dir, jn_network ** out);
/* Text summary of the CPTs; the string lives until the network is freed. */
JN_API const char * jn_network_summary(jn_network * network);
/* speed: 0 under, 1 near, 2 over the limit; accel: 0 braking, 1 coasting, 2 accelerating;
 * yielding: -1 unknown, 0 yields, 1 does not yield. */
JN_API jn_status jn_network_infer(
  const jn_network * network, int speed_bin, int accel_bin, int yielding, double * p_malicious);
JN_API void jn_network_free(jn_network * network);

/* Writes `episodes` scripted episodes (half malicious) into `dir`. */
JN_API jn_status jn_corpus_generate(const jn_config * cfg, uint32_t episodes, uint64_t seed, const char * dir);

/* Evaluation with a frozen table. `network` may be NULL for the configured network.
 * A non-zero `seed` jitters the start conditions; seed 0 runs the nominal scenario. */
JN_API jn_status jn_run_episode(
  const jn_config * cfg, const jn_qtable * table, const jn_network * network, uint64_t seed, jn_trace ** out);

JN_API size_t jn_trace_rows(const jn_trace * trace);
JN_API int jn_trace_collided(const jn_trace * trace);
JN_API jn_status jn_trace_metrics(const jn_trace * trace, jn_metrics * out);
JN_API jn_status jn_trace_write_csv(const jn_trace * trace, const char * path);
JN_API jn_status jn_trace_write_metrics_json(const jn_trace * trace, const char * path);
JN_API jn_status jn_trace_write_speed_svg(const jn_trace * trace, const char * path, const char * title);
JN_API jn_status jn_trace_write_distance_svg(const jn_trace * trace, const char * path, const char * title);
JN_API void jn_trace_free(jn_trace * trace);

#ifdef __cplusplus
}
#endif

#endif /* JUNCTION__JUNCTION_H_ */
