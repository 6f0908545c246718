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

#ifndef JUNCTION__EPISODE_HPP_
#define JUNCTION__EPISODE_HPP_

#include "junction/config.hpp"
#include "junction/game.hpp"
#include "junction/qlearn.hpp"
#include "junction/tom.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace junction
{

/// One sampled instant. Accelerations are the commands issued from this state.
struct TraceRow
{
  double t{0.0};
  VehicleState target;
  VehicleState ego;
  double a_target{0.0};
  double a_ego{0.0};
  double ttc{0.0};
  double distance{0.0};  // [m] between the vehicles; +infinity once either has left
  double w_s{0.0};
  double r_tom{0.0};
  double r_game{0.0};
  double r_total{0.0};
  double p_malice{0.0};
  double nash_distance{0.0};
  bool nash_fallback{false};
  bool terminal{false};  // final state, no command issued
};

struct Trace
{
  std::vector<TraceRow> rows;
  double dt{0.1};
  double horizon{0.0};
  double collision_radius{0.0};
  double ego_exit_s{0.0};
  std::optional<double> ego_conflict_s;
  bool has_target{true};
  bool collided{false};
  bool completed{false};  // ended by collision or with both vehicles out, not by the horizon
  std::size_t nash_fallbacks{0};
};

/// Game, belief and weights evaluated once per state.
struct StepAnalysis
{
  GameMatrix matrix{{0.0}, {0.0}};
  std::vector<JointAction> equilibria;
  double ttc{0.0};
  double p_malice{0.0};
  WeightTriple weights{};
};

struct CandidateReward
{
  double r_tom{0.0};
  double r_game{0.0};
  double r_total{0.0};
  double nash_distance{0.0};
  bool nash_fallback{false};
};

/// Acceleration chosen by the target for the current state.
class TargetPolicy
{
public:
  virtual ~TargetPolicy() = default;
  virtual double act(const Scene & scene, const JointState & s) = 0;
};

std::unique_ptr<TargetPolicy> make_target_policy(TargetPolicyKind kind, const Config & cfg);

/// Closed-loop world for one episode: state, belief tracking and the per-step reward stack.
class Episode
{
public:
  Episode(const Config & cfg, const ScenarioConfig & scenario, const BeliefNetwork & network);

  [[nodiscard]] const Config & config() const { return cfg_; }
  [[nodiscard]] const Scene & scene() const { return scene_; }
  [[nodiscard]] const JointState & state() const { return state_; }
  [[nodiscard]] bool done() const { return done_; }
  [[nodiscard]] bool collided() const { return trace_.collided; }
  [[nodiscard]] std::uint64_t key() const;

  /// Game and belief for the current state.
  [[nodiscard]] const StepAnalysis & analysis() const { return analysis_; }
  /// Reward of ego action `index` against the target's last command.
  [[nodiscard]] CandidateReward reward_for(std::size_t index) const;
  /// R(s, a) + gamma * max Q(s'_a) for every ego action, with s'_a the one-step prediction.
  /// A predicted collision scores the collision penalty alone.
  [[nodiscard]] std::vector<double> lookahead_scores(const QTable & table) const;
  /// Scores the greedy policy ranks: lookahead scores or the Q-table row, per the configuration.
  [[nodiscard]] std::vector<double> decision_scores(const QTable & table) const;

  struct Outcome
  {
    double reward{0.0};
    bool terminal{false};  // collision or ego out of the intersection
    bool done{false};
  };
  /// Applies both commands, records the row and advances one period.
  Outcome advance(std::size_t ego_index, double a_target);

  /// Appends the final row and hands the trace over.
  Trace finish();

private:
  void analyse();
  [[nodiscard]] bool collision(const JointState & s) const;
  [[nodiscard]] double exit_bonus() const;
  /// Step index of the first collision when both commands are held over the shield horizon.
  [[nodiscard]] std::optional<std::size_t> first_collision(double a_ego, double a_target) const;
  [[nodiscard]] double separation(const JointState & s) const;

  const Config & cfg_;
  const BeliefNetwork & network_;
  ScenarioConfig scenario_;
  Scene scene_;
  JointState state_;
  ObservationTracker tracker_;
  StepAnalysis analysis_;
  double w1_;
  double w2_;
  bool done_{false};
  Trace trace_;
};

/// Picks the ego action index for the current state.
using EgoDecider = std::function<std::size_t(const Episode &)>;

/// Greedy on the lookahead scores of `table`.
EgoDecider greedy_decider(const QTable & table);
/// Always the same action index.
EgoDecider constant_decider(std::size_t index);

/// Runs until both vehicles are out, a collision, or the horizon.
Trace run_episode(
  const Config & cfg, const ScenarioConfig & scenario, const BeliefNetwork & network, const EgoDecider & decider,
  TargetPolicy & target_policy);

}  // namespace junction

#endif  // JUNCTION__EPISODE_HPP_
