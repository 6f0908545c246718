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

#include "junction/cases.hpp"
#include "junction/config.hpp"
#include "junction/episode.hpp"
#include "junction/error.hpp"
#include "junction/io.hpp"
#include "junction/metrics.hpp"
#include "junction/training.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace junction
{
namespace
{

std::size_t action_index(const Config & cfg, double a)
{
  return static_cast<std::size_t>(std::find(cfg.actions.begin(), cfg.actions.end(), a) - cfg.actions.begin());
}

Trace run_constant(const Config & cfg, double a_ego)
{
  const BeliefNetwork network = default_malice_network();
  const auto target = make_target_policy(cfg.scenario.target_policy, cfg);
  return run_episode(cfg, cfg.scenario, network, constant_decider(action_index(cfg, a_ego)), *target);
}

TEST(Episode, LoneEgoAtConstantSpeed)
{
  Config cfg;
  cfg.scenario.target_policy = TargetPolicyKind::kNone;
  cfg.scenario.ego_speed = 12.0;
  const Scene scene = build_scene(cfg.scenario);
  ASSERT_NEAR(scene.ego_exit_s, 60.0, 1e-12);
  const Trace trace = run_constant(cfg, 0.0);
  EXPECT_FALSE(trace.collided);
  EXPECT_TRUE(trace.completed);
  EXPECT_NEAR(trace.rows.back().t, 5.0, 1e-9);
  const MetricsReport m = compute_metrics(trace);
  ASSERT_TRUE(m.crossing_time);
  EXPECT_NEAR(*m.crossing_time, 60.0 / 12.0, 1e-9);
  EXPECT_NEAR(m.min_speed, 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.comfort_index, 0.0);
  EXPECT_TRUE(std::isinf(m.min_distance));
  EXPECT_FALSE(m.partial);
}

TEST(Episode, StationaryVehiclesReachTheHorizon)
{
  Config cfg;
  cfg.scenario.ego_speed = 0.0;
  cfg.scenario.target_speed = 0.0;
  const Trace trace = run_constant(cfg, 0.0);
  EXPECT_FALSE(trace.collided);
  EXPECT_FALSE(trace.completed);
  EXPECT_NEAR(trace.rows.back().t, cfg.scenario.horizon, 1e-9);
  for (const TraceRow & row : trace.rows) {
    EXPECT_EQ(row.ego.s_along, 0.0);
    EXPECT_EQ(row.target.s_along, 0.0);
  }
  EXPECT_TRUE(compute_metrics(trace).partial);
}

TEST(Episode, SimultaneousArrivalCollidesWithoutReaction)
{
  const Config cfg = make_case(CaseId::kC);
  const Trace trace = run_constant(cfg, 0.0);
  EXPECT_TRUE(trace.collided);
  EXPECT_TRUE(trace.completed);
  const MetricsReport m = compute_metrics(trace);
  EXPECT_TRUE(m.collided);
  EXPECT_FALSE(m.crossing_time);
  EXPECT_LT(m.min_distance, cfg.scenario.collision_radius);
}

TEST(Episode, TraceInvariants)
{
  const Config base = load_config(JUNCTION_SOURCE_DIR "/configs/aseq.yaml");
  const BeliefNetwork network = default_malice_network();
  Config train_cfg = base;
  train_cfg.learner.episodes = 60;
  const QTable table = train_agent(train_cfg, network, 3).table;
  for (CaseId id : kAllCases) {
    const Config cfg = make_case(id, base);
    for (std::uint64_t seed : {0u, 1u, 2u}) {
      const Trace trace = evaluate(cfg, table, network, seed);
      ASSERT_GE(trace.rows.size(), 2u);
      for (std::size_t k = 0; k + 1 < trace.rows.size(); ++k) {
        const TraceRow & row = trace.rows[k];
        const TraceRow & next = trace.rows[k + 1];
        // Kinematics of the commanded step.
        if (!row.ego.exited && !next.ego.exited) {
          EXPECT_NEAR(next.ego.s_along - row.ego.s_along, oracle::travelled(row.ego.speed(), row.a_ego, cfg.scenario.dt), 1e-9);
        }
        // The scripted target never brakes.
        EXPECT_GE(row.a_target, 0.0);
        // Exited vehicles stay frozen.
        if (row.target.exited) {
          EXPECT_EQ(next.target.x, row.target.x);
          EXPECT_EQ(next.target.y, row.target.y);
        }
        EXPECT_TRUE(row.ttc > 0.0);
      }
      const MetricsReport m = compute_metrics(trace);
      if (!m.collided) {
        EXPECT_GT(m.min_distance, cfg.scenario.collision_radius) << to_string(id);
      }
      // Metrics are a pure function of the trace.
      const MetricsReport again = compute_metrics(trace);
      EXPECT_EQ(metrics_to_json(again), metrics_to_json(m));
      // Reruns are bit-identical.
      EXPECT_EQ(trace_to_csv(evaluate(cfg, table, network, seed)), trace_to_csv(trace));
    }
  }
}

Trace synthetic_trace(const std::vector<double> & speeds, const std::vector<double> & accels)
{
  Trace trace;
  trace.dt = 0.1;
  trace.ego_exit_s = 1000.0;
  trace.ego_conflict_s = 50.0;
  trace.collision_radius = 2.0;
  double s = 0.0;
  for (std::size_t k = 0; k < speeds.size(); ++k) {
    TraceRow row;
    row.t = 0.1 * static_cast<double>(k);
    row.ego.vx = speeds[k];
    row.ego.s_along = s;
    row.a_ego = accels[k];
    row.distance = 100.0 - static_cast<double>(k);
    trace.rows.push_back(row);
    s += 10.0;
  }
  trace.rows.back().terminal = true;
  return trace;
}

TEST(Metrics, RegionMinimumAndComfortIndex)
{
  // Arc lengths 0, 10, ..., 90; the region around s = 50 spans rows 3 to 7.
  const std::vector<double> speeds{1.0, 9.0, 8.0, 7.0, 6.0, 5.5, 6.5, 7.0, 0.5, 9.0};
  const std::vector<double> accels{0.0, 2.0, 2.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  const MetricsReport m = compute_metrics(synthetic_trace(speeds, accels));
  EXPECT_DOUBLE_EQ(m.min_speed, 5.5);
  EXPECT_NEAR(m.comfort_index, (2.0 + 0.0 + 3.0 + 1.0) * 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(m.min_distance, 91.0);
  EXPECT_FALSE(m.crossing_time);
  EXPECT_TRUE(m.partial);
}

TEST(Cases, PresetsMatchTheScenarioTable)
{
  const Config a = make_case(CaseId::kA);
  EXPECT_EQ(a.decision.weights.mode, WeightMode::kFixed);
  EXPECT_DOUBLE_EQ(a.decision.weights.fixed_safety, 0.4);
  EXPECT_DOUBLE_EQ(a.decision.weights.fixed_efficiency, 0.3);
  EXPECT_DOUBLE_EQ(a.decision.weights.fixed_comfort, 0.3);
  EXPECT_FALSE(a.decision.use_tom);
  EXPECT_DOUBLE_EQ(a.scenario.target_speed, 13.2);
  EXPECT_DOUBLE_EQ(a.scenario.ego_speed, 10.0);

  const Config b = make_case(CaseId::kB);
  EXPECT_EQ(b.decision.weights.mode, WeightMode::kAdaptive);
  EXPECT_FALSE(b.decision.use_tom);
  EXPECT_TRUE(make_case(CaseId::kC).decision.use_tom);

  const Config d25 = make_case(CaseId::kD25);
  EXPECT_DOUBLE_EQ(d25.scenario.target_speed, 15.0);
  const Config d50 = make_case(CaseId::kD50);
  EXPECT_DOUBLE_EQ(d50.scenario.target_speed, 18.0);
  EXPECT_DOUBLE_EQ(d50.scenario.ego_speed, 12.0);

  EXPECT_EQ(make_case(CaseId::kRoundabout).scenario.geometry, GeometryKind::kRoundabout);
  for (CaseId id : kAllCases) {
    EXPECT_EQ(case_from_string(to_string(id)), id);
  }
  EXPECT_THROW(case_from_string("E"), Error);
}

TEST(Cases, NominalStartsArriveTogether)
{
  for (CaseId id : kAllCases) {
    const ScenarioConfig s = make_case(id).scenario;
    const Scene scene = build_scene(s);
    ASSERT_TRUE(scene.conflict);
    const double ego_eta = scene.conflict->s_second / s.ego_speed;
    const double target_eta = scene.conflict->s_first / s.target_speed;
    EXPECT_NEAR(ego_eta, target_eta, 1e-9) << to_string(id);
  }
}

TEST(Config, DefaultsValidate)
{
  EXPECT_NO_THROW(Config{}.validate());
  EXPECT_NO_THROW(load_config(JUNCTION_SOURCE_DIR "/configs/aseq.yaml").validate());
}

TEST(Config, OverridesOnlyListedKeys)
{
  const Config cfg = parse_config("payoff:\n  k2: 0.5\nlearner:\n  episodes: 7\n", "inline");
  EXPECT_DOUBLE_EQ(cfg.payoff.k2, 0.5);
  EXPECT_DOUBLE_EQ(cfg.payoff.k3, 1.0);
  EXPECT_EQ(cfg.learner.episodes, 7u);
}

void expect_config_error(const std::string & text, const std::string & located)
{
  try {
    parse_config(text, "run.yaml");
    FAIL() << "expected a configuration error for:\n" << text;
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find(located), std::string::npos) << e.what();
  }
}

TEST(Config, ErrorsNameTheLine)
{
  expect_config_error("payoff:\n  k2: -1\n", "run.yaml:2:");
  expect_config_error("scenario:\n  dt: 0.1\n  colour: red\n", "run.yaml:3:");
  expect_config_error("learner:\n  episodes: 10\n  alpha: fast\n", "run.yaml:3:");
  expect_config_error("decision:\n  exit_reward: 2\n", "run.yaml:2:");
  expect_config_error("decision:\n  shield_horizon: -1\n", "run.yaml:2:");
  expect_config_error("payoff: [1, 2\n", "run.yaml:");
  expect_config_error("unknown_section: {}\n", "run.yaml:1:");
}

TEST(Config, LoadReportsMissingFile)
{
  try {
    load_config("/nonexistent/junction.yaml");
    FAIL() << "expected an exception";
  } catch (const Error & e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(Config, JitterStaysWithinBounds)
{
  const ScenarioConfig base = make_case(CaseId::kC).scenario;
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const ScenarioConfig j = jittered(base, rng);
    EXPECT_LE(std::abs(j.intersection.ego_start - base.intersection.ego_start), base.position_jitter);
    EXPECT_LE(std::abs(j.intersection.target_start - base.intersection.target_start), base.position_jitter);
    EXPECT_LE(std::abs(j.ego_speed - base.ego_speed), base.speed_jitter);
    EXPECT_LE(std::abs(j.target_speed - base.target_speed), base.speed_jitter);
  }
}

}  // namespace
}  // namespace junction
