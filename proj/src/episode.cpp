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

#include "junction/episode.hpp"

#include "junction/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace junction
{

Episode::Episode(const Config & cfg, const ScenarioConfig & scenario, const BeliefNetwork & network)
: cfg_(cfg),
  network_(network),
  scenario_(scenario),
  scene_(build_scene(scenario)),
  state_(initial_state(scenario, scene_)),
  tracker_(cfg.payoff.v_max),
  w1_(cfg.decision.use_tom ? cfg.learner.w1 : 0.0),
  w2_(cfg.decision.use_tom ? cfg.learner.w2 : 1.0)
{
  trace_.dt = scenario.dt;
  trace_.horizon = scenario.horizon;
  trace_.collision_radius = scenario.collision_radius;
  trace_.ego_exit_s = scene_.ego_exit_s;
  trace_.has_target = scene_.has_target;
  if (scene_.conflict) {
    trace_.ego_conflict_s = scene_.conflict->s_second;
  }
  analyse();
}

std::uint64_t Episode::key() const
{
  return discretize(state_, scene_, cfg_.bins).encode(cfg_.bins);
}

void Episode::analyse()
{
  analysis_.matrix =
    build_matrix(scene_, state_, cfg_.payoff, cfg_.decision.weights, cfg_.actions, cfg_.actions);
  analysis_.equilibria = find_pure_nash(analysis_.matrix);
  analysis_.ttc = scene_.decision_ttc(state_);
  analysis_.weights = weights_for(cfg_.decision.weights, analysis_.ttc, cfg_.payoff);
  analysis_.p_malice = 0.0;
  if (scene_.target_active(state_)) {
    const Vec2 conflict = scene_.conflict ? scene_.conflict->point : scene_.center;
    const Observation obs = tracker_.observe(
      state_.target.speed(), state_.target.a_next, euclidean_distance(state_.target.position(), conflict),
      scene_.target_to_conflict(state_) > 0.0);
    analysis_.p_malice = infer_malice(network_, obs);
  }
}

CandidateReward Episode::reward_for(std::size_t index) const
{
  const double a_ego = cfg_.actions.at(index);
  const double a_target = scene_.target_active(state_) ? state_.target.a_next : 0.0;
  const NashResult nash = nearest_nash(analysis_.matrix, analysis_.equilibria, a_ego, a_target);
  CandidateReward r;
  // Braking harder than the remaining speed allows is not braking.
  const double a_realized = std::max(a_ego, -state_.ego.speed() / scenario_.dt);
  r.r_tom = tom_reward(a_realized, analysis_.p_malice, cfg_.decision.epsilon_mod);
  r.r_game = game_reward(nash.distance, cfg_.decision.delta);
  r.r_total = total_reward(r.r_tom, r.r_game, w1_, w2_);
  r.nash_distance = nash.distance;
  r.nash_fallback = nash.fallback;
  return r;
}

double Episode::separation(const JointState & s) const
{
  // Exited vehicles have left the scene.
  if (!scene_.has_target || s.target.exited || s.ego.exited) {
    return std::numeric_limits<double>::infinity();
  }
  return euclidean_distance(s.target.position(), s.ego.position());
}

std::optional<std::size_t> Episode::first_collision(double a_ego, double a_target) const
{
  const auto steps =
    std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg_.decision.shield_horizon / scenario_.dt)));
  JointState s = state_;
  for (std::size_t k = 0; k < steps; ++k) {
    s = scene_.predict(s, a_ego, a_target);
    if (collision(s)) {
      return k;
    }
    if (s.ego.exited) {
      break;
    }
  }
  return std::nullopt;
}

double Episode::exit_bonus() const
{
  // Discounted value of the absorbing state past the exit.
  const double gamma = cfg_.learner.gamma;
  return gamma * cfg_.decision.exit_reward / (1.0 - gamma);
}

bool Episode::collision(const JointState & s) const
{
  return separation(s) < scenario_.collision_radius;
}

std::vector<double> Episode::lookahead_scores(const QTable & table) const
{
  const double a_target = scene_.target_active(state_) ? state_.target.a_next : 0.0;
  std::vector<double> scores(cfg_.actions.size());
  for (std::size_t i = 0; i < cfg_.actions.size(); ++i) {
    const JointState next = scene_.predict(state_, cfg_.actions[i], a_target);
    if (const auto hit = first_collision(cfg_.actions[i], a_target)) {
      // Later predicted impacts rank above earlier ones.
      scores[i] = cfg_.decision.collision_penalty + 1e-3 * static_cast<double>(*hit);
      continue;
    }
    scores[i] = reward_for(i).r_total;
    if (next.ego.exited) {
      scores[i] += exit_bonus();
    } else {
      scores[i] += cfg_.learner.gamma * table.max_value(discretize(next, scene_, cfg_.bins).encode(cfg_.bins));
    }
  }
  return scores;
}

std::vector<double> Episode::decision_scores(const QTable & table) const
{
  if (cfg_.decision.lookahead) {
    return lookahead_scores(table);
  }
  return table.row(key());
}

Episode::Outcome Episode::advance(std::size_t ego_index, double a_target)
{
  if (done_) {
    throw Error(ErrorCode::kInvalidArgument, "episode already finished");
  }
  const double a_ego = cfg_.actions.at(ego_index);
  if (!scene_.target_active(state_)) {
    a_target = 0.0;
  }
  const CandidateReward r = reward_for(ego_index);
  TraceRow row;
  row.t = state_.t;
  row.target = state_.target;
  row.ego = state_.ego;
  row.a_target = a_target;
  row.a_ego = a_ego;
  row.ttc = analysis_.ttc;
  row.distance = separation(state_);
  row.w_s = analysis_.weights.w_s;
  row.r_tom = r.r_tom;
  row.r_game = r.r_game;
  row.r_total = r.r_total;
  row.p_malice = analysis_.p_malice;
  row.nash_distance = r.nash_distance;
  row.nash_fallback = r.nash_fallback;
  trace_.nash_fallbacks += r.nash_fallback ? 1U : 0U;
  trace_.rows.push_back(row);

  state_ = scene_.predict(state_, a_ego, a_target);
  Outcome out;
  out.reward = r.r_total;
  if (collision(state_)) {
    trace_.collided = true;
    out.reward = cfg_.decision.collision_penalty;
    out.terminal = true;
  }
  if (!out.terminal && state_.ego.exited) {
    out.reward += exit_bonus();
    out.terminal = true;
  }
  const bool everyone_out = state_.ego.exited && (!scene_.has_target || state_.target.exited);
  trace_.completed = trace_.collided || everyone_out;
  done_ = trace_.completed || state_.t >= scenario_.horizon - 1e-9;
  out.done = done_;
  if (!done_) {
    analyse();
  }
  return out;
}

Trace Episode::finish()
{
  TraceRow row;
  row.t = state_.t;
  row.target = state_.target;
  row.ego = state_.ego;
  row.a_target = state_.target.a_next;
  row.a_ego = state_.ego.a_next;
  row.ttc = scene_.decision_ttc(state_);
  row.distance = separation(state_);
  row.w_s = weights_for(cfg_.decision.weights, row.ttc, cfg_.payoff).w_s;
  row.p_malice = analysis_.p_malice;
  row.terminal = true;
  trace_.rows.push_back(row);
  return std::move(trace_);
}

EgoDecider greedy_decider(const QTable & table)
{
  return [&table](const Episode & ep) {
    const std::vector<double> scores = ep.decision_scores(table);
    return greedy_index(scores, ep.config().actions);
  };
}

EgoDecider constant_decider(std::size_t index)
{
  return [index](const Episode &) { return index; };
}

Trace run_episode(
  const Config & cfg, const ScenarioConfig & scenario, const BeliefNetwork & network, const EgoDecider & decider,
  TargetPolicy & target_policy)
{
  Episode ep(cfg, scenario, network);
  while (!ep.done()) {
    const std::size_t ego = decider(ep);
    const double target = ep.scene().target_active(ep.state()) ? target_policy.act(ep.scene(), ep.state()) : 0.0;
    ep.advance(ego, target);
  }
  return ep.finish();
}

}  // namespace junction
