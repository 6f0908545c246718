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

#ifndef JUNCTION__CONFIG_HPP_
#define JUNCTION__CONFIG_HPP_

#include "junction/payoff.hpp"
#include "junction/qlearn.hpp"
#include "junction/scene.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace junction
{

enum class GeometryKind { kIntersection, kRoundabout };

enum class TargetPolicyKind {
  kNone,               // ego drives alone
  kScriptedMalicious,  // holds its speed, never decelerates
  kPayoffMalicious,    // maximises the malicious payoff over non-negative accelerations
  kBenignYielding,     // stops before the conflict point when the ego is due first
};

/// Four-way crossing: the ego drives north through the centre, the target comes from the
/// north and turns left (east) across the ego lane.
struct IntersectionGeometry
{
  double lane_width{3.5};     // [m]
  double ego_start{55.0};     // [m] south of the centre
  double target_start{55.0};  // [m] north of the centre
  double turn_radius_factor{1.5};  // turn radius as a multiple of the lane width
  double exit_margin{1.5};    // [m] past the far lane edge where a path ends
};

/// Single-lane roundabout: the target circulates counter-clockwise and passes the ego's entry.
struct RoundaboutGeometry
{
  double ring_radius{15.0};   // [m]
  double ego_lateral{5.0};    // [m] east offset of the ego approach line
  double ego_start{25.0};     // [m] before the entry point
  double target_start{20.0};  // [m] of ring arc before the entry point
  double exit_margin{10.0};   // [m] straight exit length
};

struct ScenarioConfig
{
  GeometryKind geometry{GeometryKind::kIntersection};
  Vec2 center;
  IntersectionGeometry intersection;
  RoundaboutGeometry roundabout;
  double ego_speed{10.0};     // [m/s]
  double target_speed{13.2};  // [m/s]
  double dt{0.1};             // [s]
  double horizon{20.0};       // [s]
  double collision_radius{2.0};  // [m] centre-to-centre
  TargetPolicyKind target_policy{TargetPolicyKind::kScriptedMalicious};
  double position_jitter{1.0};   // [m] half-width of the per-seed start offset
  double speed_jitter{0.2};      // [m/s] half-width of the per-seed speed offset

  [[nodiscard]] bool has_target() const { return target_policy != TargetPolicyKind::kNone; }
};

/// Which rewards and weights the ego combines.
struct DecisionStack
{
  WeightScheme weights;
  bool use_tom{true};
  double delta{1.0};                // game-reward sharpness
  double epsilon_mod{1.0};          // ToM reward sensitivity
  double collision_penalty{-10.0};  // reward on the collision step
  double exit_reward{1.0};          // per-step reward of the absorbing state after the ego exits
  double shield_horizon{0.1};       // [s] constant-command rollout checked for collisions
  bool lookahead{true};             // score actions by one-step prediction instead of Q(s, a)
};

/// Randomisation of the training episodes.
struct TrainingMix
{
  double p_malicious{0.5};
  double ego_speed_min{10.0};
  double ego_speed_max{12.0};
  double malicious_speed_min{13.2};
  double malicious_speed_max{18.0};
  double benign_speed_min{8.0};
  double benign_speed_max{12.0};
  double offset_min{-1.5};  // [s] target arrival minus ego arrival at the conflict point
  double offset_max{1.5};
};

struct Config
{
  ScenarioConfig scenario;
  PayoffParams payoff;
  std::vector<double> actions{-5.0, -4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0};
  DecisionStack decision;
  LearnerParams learner;
  BinEdges bins;
  TrainingMix training;
  std::string tom_network;  // fitted network file; empty selects the built-in CPTs

  /// Throws Error(kConfig) on any inconsistent value.
  void validate() const;
};

/// Parses YAML text. `origin` prefixes messages as "<origin>:<line>:<column>: ...".
/// Sections start from `base`, so a file only lists what it changes.
Config parse_config(const std::string & text, const std::string & origin, const Config & base = {});
/// Relative network paths are resolved against the file's directory.
Config load_config(const std::filesystem::path & path, const Config & base = {});

std::string to_string(TargetPolicyKind kind);
TargetPolicyKind target_policy_from_string(const std::string & name);

/// Paths, exits and conflict point for the scenario.
Scene build_scene(const ScenarioConfig & cfg);

/// Copy with start distances and speeds offset uniformly within the configured jitter.
ScenarioConfig jittered(const ScenarioConfig & cfg, Rng & rng);

/// Moves the target start so that, at constant speeds, the target reaches the conflict point
/// `offset` seconds after the ego (negative: before). No-op without a conflict.
void align_arrival(ScenarioConfig & cfg, double offset);

/// Both vehicles at the start of their paths with their initial speeds.
JointState initial_state(const ScenarioConfig & cfg, const Scene & scene);

}  // namespace junction

#endif  // JUNCTION__CONFIG_HPP_
