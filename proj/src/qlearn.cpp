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

#include "junction/qlearn.hpp"

#include "junction/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace junction
{
namespace
{

void require_sorted(const std::vector<double> & edges, const char * name)
{
  if (edges.empty()) {
    throw Error(ErrorCode::kConfig, std::string("bin edges '") + name + "' must not be empty");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i]) || (i > 0 && edges[i] <= edges[i - 1])) {
      throw Error(
        ErrorCode::kConfig, std::string("bin edges '") + name + "' must be finite and strictly increasing");
    }
  }
}

std::uint32_t speed_bin_count(const BinEdges & e) { return static_cast<std::uint32_t>(e.speed.size() + 1); }
std::uint32_t ttc_bin_count(const BinEdges & e) { return static_cast<std::uint32_t>(e.ttc.size() + 1); }

}  // namespace

void BinEdges::validate() const
{
  require_sorted(distance, "distance");
  require_sorted(speed, "speed");
  require_sorted(ttc, "ttc");
}

std::uint32_t distance_bin_count(const BinEdges & edges)
{
  return static_cast<std::uint32_t>(edges.distance.size() + 2);
}

std::uint32_t bin_index(double value, std::span<const double> edges)
{
  if (std::isnan(value)) {
    return 0;
  }
  return static_cast<std::uint32_t>(std::upper_bound(edges.begin(), edges.end(), value) - edges.begin());
}

std::uint64_t DiscreteStateKey::encode(const BinEdges & edges) const
{
  const std::uint64_t nd = distance_bin_count(edges);
  const std::uint64_t ns = speed_bin_count(edges);
  const std::uint64_t nt = ttc_bin_count(edges);
  std::uint64_t code = ego_dist;
  code = code * nd + target_dist;
  code = code * ns + ego_speed;
  code = code * ns + target_speed;
  code = code * nt + ttc;
  return code;
}

DiscreteStateKey DiscreteStateKey::decode(std::uint64_t code, const BinEdges & edges)
{
  const std::uint64_t nd = distance_bin_count(edges);
  const std::uint64_t ns = speed_bin_count(edges);
  const std::uint64_t nt = ttc_bin_count(edges);
  DiscreteStateKey k;
  k.ttc = static_cast<std::uint32_t>(code % nt);
  code /= nt;
  k.target_speed = static_cast<std::uint32_t>(code % ns);
  code /= ns;
  k.ego_speed = static_cast<std::uint32_t>(code % ns);
  code /= ns;
  k.target_dist = static_cast<std::uint32_t>(code % nd);
  code /= nd;
  k.ego_dist = static_cast<std::uint32_t>(code);
  return k;
}

DiscreteStateKey discretize(const JointState & s, const Scene & scene, const BinEdges & edges)
{
  const std::uint32_t sentinel = distance_bin_count(edges) - 1;
  auto distance_bin = [&](double remaining, bool gone) {
    if (gone || !std::isfinite(remaining)) {
      return sentinel;
    }
    return bin_index(std::max(remaining, 0.0), edges.distance);
  };
  DiscreteStateKey k;
  k.ego_dist = distance_bin(scene.ego_to_conflict(s), s.ego.exited);
  const bool target_gone = !scene.target_active(s);
  k.target_dist = distance_bin(scene.target_to_conflict(s), target_gone);
  k.ego_speed = bin_index(s.ego.speed(), edges.speed);
  k.target_speed = target_gone ? 0 : bin_index(s.target.speed(), edges.speed);
  k.ttc = bin_index(scene.decision_ttc(s), edges.ttc);
  return k;
}

void LearnerParams::validate() const
{
  auto require = [](bool ok, const char * what) {
    if (!ok) {
      throw Error(ErrorCode::kConfig, std::string("learner parameters: ") + what);
    }
  };
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must lie in [0, 1)");
  require(epsilon_start >= 0.0 && epsilon_start <= 1.0, "epsilon start must lie in [0, 1]");
  require(epsilon_floor >= 0.0 && epsilon_floor <= 1.0, "epsilon floor must lie in [0, 1]");
  require(epsilon_decay > 0.0 && epsilon_decay <= 1.0, "epsilon decay must lie in (0, 1]");
  require(w1 >= 0.0 && w2 >= 0.0 && std::abs(w1 + w2 - 1.0) <= 1e-9, "W1 and W2 must be non-negative and sum to 1");
}

QTable::QTable(std::vector<double> actions, BinEdges edges) : actions_(std::move(actions)), edges_(std::move(edges))
{
  if (actions_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "Q-table needs at least one action");
  }
}

double QTable::value(std::uint64_t key, std::size_t action) const
{
  const auto it = rows_.find(key);
  return it == rows_.end() ? 0.0 : it->second.q.at(action);
}

std::vector<double> QTable::row(std::uint64_t key) const
{
  const auto it = rows_.find(key);
  return it == rows_.end() ? std::vector<double>(actions_.size(), 0.0) : it->second.q;
}

double QTable::max_value(std::uint64_t key) const
{
  const auto it = rows_.find(key);
  if (it == rows_.end()) {
    return 0.0;
  }
  return *std::max_element(it->second.q.begin(), it->second.q.end());
}

std::uint32_t QTable::visits(std::uint64_t key, std::size_t action) const
{
  const auto it = rows_.find(key);
  return it == rows_.end() ? 0U : it->second.visits.at(action);
}

QTable::Row & QTable::mutable_row(std::uint64_t key)
{
  auto [it, inserted] = rows_.try_emplace(key);
  if (inserted) {
    it->second.q.assign(actions_.size(), 0.0);
    it->second.visits.assign(actions_.size(), 0U);
  }
  return it->second;
}

void QTable::set(std::uint64_t key, std::size_t action, double value)
{
  if (action >= actions_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "action index out of range");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kInvalidArgument, "Q-values must be finite");
  }
  mutable_row(key).q[action] = value;
}

void QTable::visit(std::uint64_t key, std::size_t action)
{
  if (action >= actions_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "action index out of range");
  }
  ++mutable_row(key).visits[action];
}

void QTable::check_compatible(const BinEdges & edges, std::span<const double> actions) const
{
  if (!(edges_ == edges)) {
    throw Error(ErrorCode::kMetadataMismatch, "Q-table bin edges differ from the configured ones");
  }
  if (!std::equal(actions_.begin(), actions_.end(), actions.begin(), actions.end())) {
    throw Error(ErrorCode::kMetadataMismatch, "Q-table action set differs from the configured one");
  }
}

bool operator==(const QTable & a, const QTable & b)
{
  return a.actions_ == b.actions_ && a.edges_ == b.edges_ && a.rows_ == b.rows_;
}

std::string QTable::to_json() const
{
  nlohmann::ordered_json j;
  j["format"] = "junction-qtable";
  j["version"] = 1;
  j["actions"] = actions_;
  j["bins"] = {{"distance", edges_.distance}, {"speed", edges_.speed}, {"ttc", edges_.ttc}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto & [key, row] : rows_) {
    rows.push_back({{"key", key}, {"q", row.q}, {"visits", row.visits}});
  }
  j["rows"] = std::move(rows);
  return j.dump(1) + "\n";
}

QTable QTable::from_json(const std::string & text)
{
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "junction-qtable" || j.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kIo, "not a version 1 Q-table file");
    }
    BinEdges edges;
    edges.distance = j.at("bins").at("distance").get<std::vector<double>>();
    edges.speed = j.at("bins").at("speed").get<std::vector<double>>();
    edges.ttc = j.at("bins").at("ttc").get<std::vector<double>>();
    edges.validate();
    QTable table(j.at("actions").get<std::vector<double>>(), std::move(edges));
    for (const auto & r : j.at("rows")) {
      const auto key = r.at("key").get<std::uint64_t>();
      auto q = r.at("q").get<std::vector<double>>();
      auto visits = r.at("visits").get<std::vector<std::uint32_t>>();
      if (q.size() != table.action_count() || visits.size() != table.action_count()) {
        throw Error(ErrorCode::kIo, "Q-table row width does not match the action count");
      }
      Row & row = table.mutable_row(key);
      for (std::size_t a = 0; a < q.size(); ++a) {
        if (!std::isfinite(q[a])) {
          throw Error(ErrorCode::kIo, "Q-table contains a non-finite value");
        }
      }
      row.q = std::move(q);
      row.visits = std::move(visits);
    }
    return table;
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kIo, std::string("malformed Q-table: ") + e.what());
  } catch (const Error & e) {
    if (e.code() == ErrorCode::kConfig) {
      throw Error(ErrorCode::kIo, e.what());
    }
    throw;
  }
}

double total_reward(double r_tom, double r_game, double w1, double w2)
{
  return w1 * r_tom + w2 * r_game;
}

void q_update(
  QTable & q, std::uint64_t key, std::size_t action, double reward, std::optional<std::uint64_t> next_key,
  const LearnerParams & p)
{
  if (!std::isfinite(reward)) {
    throw Error(ErrorCode::kInvalidArgument, "reward must be finite");
  }
  const double future = next_key ? q.max_value(*next_key) : 0.0;
  const double old = q.value(key, action);
  q.set(key, action, old + p.alpha * (reward + p.gamma * future - old));
  q.visit(key, action);
}

std::size_t greedy_index(std::span<const double> scores, std::span<const double> actions)
{
  if (scores.empty() || scores.size() != actions.size()) {
    throw Error(ErrorCode::kInvalidArgument, "scores and actions must be non-empty and equally sized");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
    } else if (scores[i] == scores[best]) {
      const double mi = std::abs(actions[i]);
      const double mb = std::abs(actions[best]);
      if (mi < mb || (mi == mb && actions[i] < actions[best])) {
        best = i;
      }
    }
  }
  return best;
}

std::size_t select_action(
  std::span<const double> scores, std::span<const double> actions, double epsilon, Rng & rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) > epsilon) {
    return greedy_index(scores, actions);
  }
  std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
  return pick(rng);
}

std::size_t select_action(const QTable & q, std::uint64_t key, double epsilon, Rng & rng)
{
  const std::vector<double> row = q.row(key);
  return select_action(row, q.actions(), epsilon, rng);
}

std::vector<double> Environment::greedy_scores(const QTable & q, std::uint64_t key, const LearnerParams &)
{
  return q.row(key);
}

TrainingResult train(Environment & env, const LearnerParams & p, std::uint64_t seed)
{
  return train(env, p, seed, QTable(env.actions(), env.edges()));
}

TrainingResult train(Environment & env, const LearnerParams & p, std::uint64_t seed, QTable initial)
{
  p.validate();
  const std::vector<double> actions = env.actions();
  initial.check_compatible(env.edges(), actions);

  TrainingResult result;
  result.table = std::move(initial);
  result.curve.reserve(p.episodes);
  result.epsilons.reserve(p.episodes);
  Rng rng(seed);
  double epsilon = p.epsilon_start;
  for (std::uint32_t episode = 0; episode < p.episodes; ++episode) {
    result.epsilons.push_back(epsilon);
    std::uint64_t key = env.reset(rng);
    double reward_sum = 0.0;
    std::size_t steps = 0;
    for (bool done = false; !done;) {
      const std::vector<double> scores = env.greedy_scores(result.table, key, p);
      const std::size_t action = select_action(scores, actions, epsilon, rng);
      const Environment::Step step = env.step(action, rng);
      q_update(
        result.table, key, action, step.reward,
        step.terminal ? std::nullopt : std::optional<std::uint64_t>(step.next_key), p);
      reward_sum += step.reward;
      ++steps;
      key = step.next_key;
      done = step.done;
    }
    result.curve.push_back(steps > 0 ? reward_sum / static_cast<double>(steps) : 0.0);
    epsilon = std::max(p.epsilon_floor, epsilon * p.epsilon_decay);
  }
  return result;
}

}  // namespace junction
