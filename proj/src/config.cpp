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

#include "junction/config.hpp"

#include "junction/error.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <numbers>
#include <utility>
#include <sstream>
#include <string_view>

namespace junction
{
namespace
{

class Reader
{
public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Mark & mark, const std::string & message) const
  {
    if (mark.is_null()) {
      throw Error(ErrorCode::kConfig, fmt::format("{}: {}", origin_, message));
    }
    throw Error(ErrorCode::kConfig, fmt::format("{}:{}:{}: {}", origin_, mark.line + 1, mark.column + 1, message));
  }

  void require_map(const YAML::Node & node, std::string_view what) const
  {
    if (!node.IsMap()) {
      fail(node.Mark(), fmt::format("'{}' must be a mapping", what));
    }
  }

  /// Rejects keys outside `known`; typos must not silently fall back to defaults.
  void check_keys(const YAML::Node & node, std::string_view section, std::initializer_list<std::string_view> known) const
  {
    for (const auto & kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        fail(kv.first.Mark(), fmt::format("unknown key '{}' in section '{}'", key, section));
      }
    }
  }

  void read(const YAML::Node & node, const char * key, double & out) const
  {
    if (const YAML::Node v = node[key]) {
      try {
        out = v.as<double>();
      } catch (const YAML::Exception &) {
        fail(v.Mark(), fmt::format("'{}' must be a number", key));
      }
      if (!std::isfinite(out)) {
        fail(v.Mark(), fmt::format("'{}' must be finite", key));
      }
    }
  }

  void read(const YAML::Node & node, const char * key, bool & out) const
  {
    if (const YAML::Node v = node[key]) {
      try {
        out = v.as<bool>();
      } catch (const YAML::Exception &) {
        fail(v.Mark(), fmt::format("'{}' must be true or false", key));
      }
    }
  }

  void read(const YAML::Node & node, const char * key, std::uint32_t & out) const
  {
    if (const YAML::Node v = node[key]) {
      try {
        out = v.as<std::uint32_t>();
      } catch (const YAML::Exception &) {
        fail(v.Mark(), fmt::format("'{}' must be a non-negative integer", key));
      }
    }
  }

  void read(const YAML::Node & node, const char * key, std::string & out) const
  {
    if (const YAML::Node v = node[key]) {
      if (!v.IsScalar()) {
        fail(v.Mark(), fmt::format("'{}' must be a string", key));
      }
      out = v.as<std::string>();
    }
  }

  void read(const YAML::Node & node, const char * key, std::vector<double> & out) const
  {
    if (const YAML::Node v = node[key]) {
      if (!v.IsSequence()) {
        fail(v.Mark(), fmt::format("'{}' must be a list of numbers", key));
      }
      std::vector<double> values;
      for (const auto & item : v) {
        try {
          values.push_back(item.as<double>());
        } catch (const YAML::Exception &) {
          fail(item.Mark(), fmt::format("'{}' must contain only numbers", key));
        }
      }
      out = std::move(values);
    }
  }

  /// Reads a key, then runs `check` so range errors point at the offending line.
  template <typename T>
  void read_checked(
    const YAML::Node & node, const char * key, T & out, const std::function<bool(const T &)> & check,
    std::string_view requirement) const
  {
    read(node, key, out);
    if (node[key] && !check(out)) {
      fail(node[key].Mark(), fmt::format("'{}' {}", key, requirement));
    }
  }

private:
  std::string origin_;
};

void read_scenario(const Reader & r, const YAML::Node & n, ScenarioConfig & s)
{
  r.require_map(n, "scenario");
  r.check_keys(
    n, "scenario",
    {"geometry", "center", "lane_width", "ego_start", "target_start", "turn_radius_factor", "exit_margin",
     "ring_radius", "ego_lateral", "ego_speed", "target_speed", "dt", "horizon", "collision_radius",
     "target_policy", "position_jitter", "speed_jitter"});
  if (const YAML::Node g = n["geometry"]) {
    const auto name = g.as<std::string>();
    if (name == "intersection") {
      s.geometry = GeometryKind::kIntersection;
    } else if (name == "roundabout") {
      s.geometry = GeometryKind::kRoundabout;
    } else {
      r.fail(g.Mark(), fmt::format("unknown geometry '{}' (intersection, roundabout)", name));
    }
  }
  if (const YAML::Node c = n["center"]) {
    std::vector<double> xy;
    r.read(n, "center", xy);
    if (xy.size() != 2) {
      r.fail(c.Mark(), "'center' must be [x, y]");
    }
    s.center = {xy[0], xy[1]};
  }
  const bool roundabout = s.geometry == GeometryKind::kRoundabout;
  double & ego_start = roundabout ? s.roundabout.ego_start : s.intersection.ego_start;
  double & target_start = roundabout ? s.roundabout.target_start : s.intersection.target_start;
  double & exit_margin = roundabout ? s.roundabout.exit_margin : s.intersection.exit_margin;
  const std::function<bool(const double &)> positive = [](const double & v) { return v > 0.0; };
  const std::function<bool(const double &)> non_negative = [](const double & v) { return v >= 0.0; };
  r.read_checked(n, "lane_width", s.intersection.lane_width, positive, "must be positive");
  r.read_checked(n, "turn_radius_factor", s.intersection.turn_radius_factor, positive, "must be positive");
  r.read_checked(n, "ring_radius", s.roundabout.ring_radius, positive, "must be positive");
  r.read_checked(n, "ego_lateral", s.roundabout.ego_lateral, non_negative, "must be non-negative");
  r.read_checked(n, "ego_start", ego_start, positive, "must be positive");
  r.read_checked(n, "target_start", target_start, positive, "must be positive");
  r.read_checked(n, "exit_margin", exit_margin, positive, "must be positive");
  r.read_checked(n, "ego_speed", s.ego_speed, non_negative, "must be non-negative");
  r.read_checked(n, "target_speed", s.target_speed, non_negative, "must be non-negative");
  r.read_checked(n, "dt", s.dt, positive, "must be positive");
  r.read_checked(n, "horizon", s.horizon, positive, "must be positive");
  r.read_checked(n, "collision_radius", s.collision_radius, positive, "must be positive");
  r.read_checked(n, "position_jitter", s.position_jitter, non_negative, "must be non-negative");
  r.read_checked(n, "speed_jitter", s.speed_jitter, non_negative, "must be non-negative");
  if (const YAML::Node p = n["target_policy"]) {
    try {
      s.target_policy = target_policy_from_string(p.as<std::string>());
    } catch (const Error & e) {
      r.fail(p.Mark(), e.what());
    }
  }
}

void read_payoff(const Reader & r, const YAML::Node & n, PayoffParams & p)
{
  r.require_map(n, "payoff");
  r.check_keys(
    n, "payoff",
    {"beta", "k1", "k2", "k3", "k", "v_threshold", "ttc_min", "ttc_crit", "a_min", "a_max", "v_max", "v_floor",
     "decay_distance", "decay_ttc"});
  const std::function<bool(const double &)> positive = [](const double & v) { return v > 0.0; };
  for (const auto & [key, field] : {std::pair{"beta", &p.beta}, {"k1", &p.k1}, {"k2", &p.k2}, {"k3", &p.k3}, {"k", &p.k}}) {
    r.read_checked(n, key, *field, positive, "must be positive");
  }
  r.read(n, "v_threshold", p.v_threshold);
  r.read(n, "ttc_min", p.ttc_min);
  r.read(n, "ttc_crit", p.ttc_crit);
  r.read(n, "a_min", p.a_min);
  r.read(n, "a_max", p.a_max);
  r.read(n, "v_max", p.v_max);
  r.read(n, "v_floor", p.v_floor);
  r.read(n, "decay_distance", p.decay_distance);
  r.read(n, "decay_ttc", p.decay_ttc);
  try {
    p.validate();
  } catch (const Error & e) {
    r.fail(n.Mark(), e.what());
  }
}

void read_decision(const Reader & r, const YAML::Node & n, DecisionStack & d, std::string & network)
{
  r.require_map(n, "decision");
  r.check_keys(
    n, "decision", {"weights", "fixed_weights", "tom", "delta", "epsilon_mod", "collision_penalty", "exit_reward", "shield_horizon", "lookahead", "tom_network"});
  if (const YAML::Node w = n["weights"]) {
    const auto mode = w.as<std::string>();
    if (mode == "adaptive") {
      d.weights.mode = WeightMode::kAdaptive;
    } else if (mode == "fixed") {
      d.weights.mode = WeightMode::kFixed;
    } else {
      r.fail(w.Mark(), fmt::format("unknown weight mode '{}' (adaptive, fixed)", mode));
    }
  }
  if (const YAML::Node f = n["fixed_weights"]) {
    std::vector<double> w;
    r.read(n, "fixed_weights", w);
    const bool ok = w.size() == 3 && std::all_of(w.begin(), w.end(), [](double v) { return v >= 0.0; }) &&
                    std::abs(w[0] + w[1] + w[2] - 1.0) <= 1e-9;
    if (!ok) {
      r.fail(f.Mark(), "'fixed_weights' must be three non-negative numbers summing to 1");
    }
    d.weights.fixed_safety = w[0];
    d.weights.fixed_efficiency = w[1];
    d.weights.fixed_comfort = w[2];
  }
  const std::function<bool(const double &)> positive = [](const double & v) { return v > 0.0; };
  r.read(n, "tom", d.use_tom);
  r.read_checked(n, "delta", d.delta, positive, "must be positive");
  r.read_checked(n, "epsilon_mod", d.epsilon_mod, positive, "must be positive");
  r.read(n, "collision_penalty", d.collision_penalty);
  const std::function<bool(const double &)> unit = [](const double & v) { return v >= 0.0 && v <= 1.0; };
  const std::function<bool(const double &)> duration = [](const double & v) { return v >= 0.0 && std::isfinite(v); };
  r.read_checked(n, "exit_reward", d.exit_reward, unit, "must lie in [0, 1]");
  r.read_checked(n, "shield_horizon", d.shield_horizon, duration, "must be a non-negative number of seconds");
  r.read(n, "lookahead", d.lookahead);
  r.read(n, "tom_network", network);
}

void read_learner(const Reader & r, const YAML::Node & n, LearnerParams & p)
{
  r.require_map(n, "learner");
  r.check_keys(
    n, "learner", {"alpha", "gamma", "epsilon_start", "epsilon_decay", "epsilon_floor", "w1", "w2", "episodes"});
  const std::function<bool(const double &)> step = [](const double & v) { return v > 0.0 && v <= 1.0; };
  const std::function<bool(const double &)> discount = [](const double & v) { return v >= 0.0 && v < 1.0; };
  const std::function<bool(const double &)> unit = [](const double & v) { return v >= 0.0 && v <= 1.0; };
  r.read_checked(n, "alpha", p.alpha, step, "must lie in (0, 1]");
  r.read_checked(n, "gamma", p.gamma, discount, "must lie in [0, 1)");
  r.read_checked(n, "epsilon_start", p.epsilon_start, unit, "must lie in [0, 1]");
  r.read_checked(n, "epsilon_decay", p.epsilon_decay, step, "must lie in (0, 1]");
  r.read_checked(n, "epsilon_floor", p.epsilon_floor, unit, "must lie in [0, 1]");
  r.read(n, "w1", p.w1);
  r.read(n, "w2", p.w2);
  r.read(n, "episodes", p.episodes);
  try {
    p.validate();
  } catch (const Error & e) {
    r.fail(n.Mark(), e.what());
  }
}

void read_bins(const Reader & r, const YAML::Node & n, BinEdges & b)
{
  r.require_map(n, "bins");
  r.check_keys(n, "bins", {"distance", "speed", "ttc"});
  r.read(n, "distance", b.distance);
  r.read(n, "speed", b.speed);
  r.read(n, "ttc", b.ttc);
  try {
    b.validate();
  } catch (const Error & e) {
    r.fail(n.Mark(), e.what());
  }
}

void read_range(const Reader & r, const YAML::Node & n, const char * key, double & lo, double & hi)
{
  if (const YAML::Node v = n[key]) {
    std::vector<double> range;
    r.read(n, key, range);
    if (range.size() != 2 || range[0] > range[1]) {
      r.fail(v.Mark(), fmt::format("'{}' must be [min, max] with min <= max", key));
    }
    lo = range[0];
    hi = range[1];
  }
}

void read_training(const Reader & r, const YAML::Node & n, TrainingMix & t)
{
  r.require_map(n, "training");
  r.check_keys(n, "training", {"p_malicious", "ego_speed", "malicious_speed", "benign_speed", "arrival_offset"});
  r.read_checked<double>(
    n, "p_malicious", t.p_malicious, [](const double & p) { return p >= 0.0 && p <= 1.0; }, "must lie in [0, 1]");
  read_range(r, n, "ego_speed", t.ego_speed_min, t.ego_speed_max);
  read_range(r, n, "malicious_speed", t.malicious_speed_min, t.malicious_speed_max);
  read_range(r, n, "benign_speed", t.benign_speed_min, t.benign_speed_max);
  read_range(r, n, "arrival_offset", t.offset_min, t.offset_max);
}

}  // namespace

void Config::validate() const
{
  payoff.validate();
  learner.validate();
  bins.validate();
  if (actions.empty()) {
    throw Error(ErrorCode::kConfig, "the action set must not be empty");
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] < payoff.a_min || actions[i] > payoff.a_max) {
      throw Error(ErrorCode::kConfig, fmt::format("action {} lies outside [a_min, a_max]", actions[i]));
    }
    if (i > 0 && actions[i] <= actions[i - 1]) {
      throw Error(ErrorCode::kConfig, "actions must be strictly increasing");
    }
  }
  if (scenario.dt <= 0.0 || scenario.horizon <= 0.0) {
    throw Error(ErrorCode::kConfig, "dt and horizon must be positive");
  }
  if (decision.delta <= 0.0 || decision.epsilon_mod <= 0.0) {
    throw Error(ErrorCode::kConfig, "delta and epsilon_mod must be positive");
  }
  if (!(decision.exit_reward >= 0.0 && decision.exit_reward <= 1.0) || !(decision.shield_horizon >= 0.0)) {
    throw Error(ErrorCode::kConfig, "exit_reward must lie in [0, 1] and shield_horizon must be non-negative");
  }
  const auto & rb = scenario.roundabout;
  if (scenario.geometry == GeometryKind::kRoundabout && rb.ego_lateral >= rb.ring_radius) {
    throw Error(ErrorCode::kConfig, "the roundabout approach must meet the ring (ego_lateral < ring_radius)");
  }
}

Config parse_config(const std::string & text, const std::string & origin, const Config & base)
{
  const Reader r(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException & e) {
    r.fail(e.mark, e.msg);
  }
  Config cfg = base;
  if (root.IsNull()) {
    return cfg;
  }
  r.require_map(root, "document");
  r.check_keys(root, "document", {"scenario", "payoff", "actions", "decision", "learner", "bins", "training"});
  try {
    if (const YAML::Node n = root["scenario"]) {
      read_scenario(r, n, cfg.scenario);
    }
    if (const YAML::Node n = root["payoff"]) {
      read_payoff(r, n, cfg.payoff);
    }
    if (const YAML::Node n = root["actions"]) {
      r.read(root, "actions", cfg.actions);
    }
    if (const YAML::Node n = root["decision"]) {
      read_decision(r, n, cfg.decision, cfg.tom_network);
    }
    if (const YAML::Node n = root["learner"]) {
      read_learner(r, n, cfg.learner);
    }
    if (const YAML::Node n = root["bins"]) {
      read_bins(r, n, cfg.bins);
    }
    if (const YAML::Node n = root["training"]) {
      read_training(r, n, cfg.training);
    }
  } catch (const YAML::Exception & e) {
    r.fail(e.mark, e.msg);
  }
  try {
    cfg.validate();
  } catch (const Error & e) {
    r.fail(YAML::Mark::null_mark(), e.what());
  }
  return cfg;
}

Config load_config(const std::filesystem::path & path, const Config & base)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("{}: cannot open config file", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  Config cfg = parse_config(buffer.str(), path.string(), base);
  if (!cfg.tom_network.empty() && std::filesystem::path(cfg.tom_network).is_relative()) {
    cfg.tom_network = (path.parent_path() / cfg.tom_network).lexically_normal().string();
  }
  return cfg;
}

std::string to_string(TargetPolicyKind kind)
{
  switch (kind) {
    case TargetPolicyKind::kNone:
      return "none";
    case TargetPolicyKind::kScriptedMalicious:
      return "scripted_malicious";
    case TargetPolicyKind::kPayoffMalicious:
      return "payoff_malicious";
    case TargetPolicyKind::kBenignYielding:
      return "benign_yielding";
  }
  return "none";
}

TargetPolicyKind target_policy_from_string(const std::string & name)
{
  for (auto kind :
       {TargetPolicyKind::kNone, TargetPolicyKind::kScriptedMalicious, TargetPolicyKind::kPayoffMalicious,
        TargetPolicyKind::kBenignYielding}) {
    if (to_string(kind) == name) {
      return kind;
    }
  }
  throw Error(
    ErrorCode::kConfig,
    fmt::format("unknown target policy '{}' (none, scripted_malicious, payoff_malicious, benign_yielding)", name));
}

Scene build_scene(const ScenarioConfig & cfg)
{
  Scene scene;
  scene.center = cfg.center;
  scene.dt = cfg.dt;
  scene.has_target = cfg.has_target();
  const Vec2 c = cfg.center;
  constexpr double kNorth = std::numbers::pi / 2.0;
  if (cfg.geometry == GeometryKind::kIntersection) {
    const auto & g = cfg.intersection;
    const double half = g.lane_width / 2.0;
    const double radius = g.turn_radius_factor * g.lane_width;
    scene.ego_path = PathBuilder({c.x + half, c.y - g.ego_start}, kNorth)
                       .straight(g.ego_start + g.lane_width + g.exit_margin)
                       .build();
    // The turn ends in the eastbound lane (y = -half), so the arc starts `radius - half` north.
    const double straight = g.target_start - (radius - half);
    if (straight <= 0.0) {
      throw Error(ErrorCode::kConfig, "target_start is too short for the left turn");
    }
    scene.target_path = PathBuilder({c.x - half, c.y + g.target_start}, -kNorth)
                          .straight(straight)
                          .turn(radius, kNorth)
                          .straight(g.lane_width + g.exit_margin)
                          .build();
  } else {
    const auto & g = cfg.roundabout;
    const double depth = std::sqrt(g.ring_radius * g.ring_radius - g.ego_lateral * g.ego_lateral);
    const Vec2 entry{c.x + g.ego_lateral, c.y - depth};
    const double entry_angle = std::atan2(entry.y - c.y, entry.x - c.x);
    scene.ego_path = PathBuilder({entry.x, entry.y - g.ego_start}, kNorth)
                       .straight(g.ego_start)
                       .arc_about(c, kNorth)
                       .straight(g.exit_margin)
                       .build();
    const double back = g.target_start / g.ring_radius;
    const Vec2 start{c.x + g.ring_radius * std::cos(entry_angle - back), c.y + g.ring_radius * std::sin(entry_angle - back)};
    scene.target_path = PathBuilder(start, entry_angle - back + kNorth)
                          .arc_about(c, back + std::numbers::pi / 4.0)
                          .straight(g.exit_margin)
                          .build();
  }
  scene.ego_exit_s = scene.ego_path.length();
  scene.target_exit_s = scene.target_path.length();
  scene.resolve_conflict();
  return scene;
}

ScenarioConfig jittered(const ScenarioConfig & cfg, Rng & rng)
{
  ScenarioConfig out = cfg;
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double ego_offset = cfg.position_jitter * unit(rng);
  const double target_offset = cfg.position_jitter * unit(rng);
  const double ego_speed_offset = cfg.speed_jitter * unit(rng);
  const double target_speed_offset = cfg.speed_jitter * unit(rng);
  auto & starts = cfg.geometry == GeometryKind::kIntersection ? out.intersection.ego_start : out.roundabout.ego_start;
  starts = std::max(starts + ego_offset, 1.0);
  auto & target = cfg.geometry == GeometryKind::kIntersection ? out.intersection.target_start : out.roundabout.target_start;
  target = std::max(target + target_offset, 1.0);
  out.ego_speed = std::max(cfg.ego_speed + ego_speed_offset, 0.0);
  out.target_speed = std::max(cfg.target_speed + target_speed_offset, 0.0);
  return out;
}

void align_arrival(ScenarioConfig & cfg, double offset)
{
  const Scene reference = build_scene(cfg);
  if (!reference.conflict) {
    return;
  }
  // The target's conflict arc length moves one-for-one with its start distance.
  double & start =
    cfg.geometry == GeometryKind::kIntersection ? cfg.intersection.target_start : cfg.roundabout.target_start;
  const double lead_in = start - reference.conflict->s_first;
  const double ego_eta = reference.conflict->s_second / std::max(cfg.ego_speed, 0.1);
  // Keep the straight approach non-degenerate.
  start = std::max(lead_in + cfg.target_speed * (ego_eta + offset), lead_in + 1.0);
}

JointState initial_state(const ScenarioConfig & cfg, const Scene & scene)
{
  JointState s;
  s.ego = place_on_path(scene.ego_path, 0.0, cfg.ego_speed);
  if (scene.has_target) {
    s.target = place_on_path(scene.target_path, 0.0, cfg.target_speed);
  } else {
    s.target.exited = true;
  }
  return s;
}

}  // namespace junction
