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

#ifndef JUNCTION__TESTS__ORACLES_HPP_
#define JUNCTION__TESTS__ORACLES_HPP_

#include "junction/game.hpp"
#include "junction/geometry.hpp"
#include "junction/qlearn.hpp"
#include "junction/tom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

// Independent reference implementations used to check the library. None of them calls
// into the code under test except for plain data accessors.
namespace junction::oracle
{

// ---------------------------------------------------------------------------------------------
// Kinematics

/// Distance covered from `speed` under `a` for `dt`, stopping (not reversing) at zero speed.
inline double travelled(double speed, double a, double dt)
{
  if (a < 0.0 && speed + a * dt < 0.0) {
    const double t_stop = -speed / a;
    return speed * t_stop + 0.5 * a * t_stop * t_stop;
  }
  return speed * dt + 0.5 * a * dt * dt;
}

// ---------------------------------------------------------------------------------------------
// Dense-sampling path intersection

struct SampledHit
{
  Vec2 point;
  double s_second{0.0};
};

/// Samples both paths every `step` metres and returns the first sample of `second` that lies
/// within `tolerance` of a sample of `first`, found through a uniform spatial hash.
inline std::optional<SampledHit> dense_conflict(
  const Path & first, const Path & second, double step = 1e-3, double tolerance = 2e-3)
{
  const double cell = std::max(tolerance, step) * 2.0;
  auto cell_of = [cell](Vec2 p) {
    return std::pair<std::int64_t, std::int64_t>{
      static_cast<std::int64_t>(std::floor(p.x / cell)), static_cast<std::int64_t>(std::floor(p.y / cell))};
  };
  struct PairHash
  {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t> & k) const
    {
      return std::hash<std::int64_t>()(k.first * 73856093LL ^ k.second * 19349663LL);
    }
  };
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<Vec2>, PairHash> grid;
  const auto n_first = static_cast<std::size_t>(std::ceil(first.length() / step));
  for (std::size_t i = 0; i <= n_first; ++i) {
    const Vec2 p = first.point_at(std::min(first.length(), static_cast<double>(i) * step));
    grid[cell_of(p)].push_back(p);
  }
  const auto n_second = static_cast<std::size_t>(std::ceil(second.length() / step));
  for (std::size_t i = 0; i <= n_second; ++i) {
    const double s = std::min(second.length(), static_cast<double>(i) * step);
    const Vec2 q = second.point_at(s);
    const auto [cx, cy] = cell_of(q);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find({cx + dx, cy + dy});
        if (it == grid.end()) {
          continue;
        }
        for (const Vec2 & p : it->second) {
          if (std::hypot(p.x - q.x, p.y - q.y) <= tolerance) {
            return SampledHit{q, s};
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// Pure Nash equilibria by exhaustive best-response checks

inline std::vector<std::pair<std::size_t, std::size_t>> brute_force_nash(
  const std::vector<std::vector<double>> & u_row, const std::vector<std::vector<double>> & u_col)
{
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t rows = u_row.size();
  const std::size_t cols = rows == 0 ? 0 : u_row[0].size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      bool stable = true;
      for (std::size_t k = 0; k < rows && stable; ++k) {
        stable = u_row[k][j] <= u_row[i][j] + 1e-9;
      }
      for (std::size_t k = 0; k < cols && stable; ++k) {
        stable = u_col[i][k] <= u_col[i][j] + 1e-9;
      }
      if (stable) {
        out.emplace_back(i, j);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Bayesian networks: full joint enumeration

/// P(query | evidence) by summing the product of all CPT entries over every joint assignment.
inline std::vector<double> enumerate_posterior(
  const BeliefNetwork & bn, std::size_t query, const std::map<std::size_t, std::size_t> & evidence)
{
  const std::size_t n = bn.size();
  std::vector<std::size_t> assignment(n, 0);
  std::vector<double> mass(bn.cardinality(query), 0.0);
  while (true) {
    bool consistent = true;
    for (const auto & [node, state] : evidence) {
      consistent = consistent && assignment[node] == state;
    }
    if (consistent) {
      double p = 1.0;
      for (std::size_t v = 0; v < n; ++v) {
        const auto & node = bn.nodes()[v];
        std::size_t row = 0;
        for (std::size_t parent : node.parents) {
          row = row * bn.cardinality(parent) + assignment[parent];
        }
        p *= node.cpt[row * bn.cardinality(v) + assignment[v]];
      }
      mass[assignment[query]] += p;
    }
    std::size_t pos = 0;
    while (pos < n && ++assignment[pos] == bn.cardinality(pos)) {
      assignment[pos] = 0;
      ++pos;
    }
    if (pos == n) {
      break;
    }
  }
  double total = 0.0;
  for (double m : mass) {
    total += m;
  }
  for (double & m : mass) {
    m /= total;
  }
  return mass;
}

/// Random DAG over `nodes` variables of cardinality 2 or 3 with at most three parents drawn from
/// earlier nodes and strictly positive CPT rows. Joint size is capped to keep enumeration cheap.
inline BeliefNetwork random_network(std::mt19937_64 & rng, std::size_t nodes, std::size_t max_joint = 100000)
{
  std::uniform_int_distribution<int> card_dist(2, 3);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<std::size_t> cards;
  std::size_t joint = 1;
  for (std::size_t i = 0; i < nodes; ++i) {
    std::size_t c = static_cast<std::size_t>(card_dist(rng));
    if (joint * c > max_joint) {
      c = 2;
    }
    joint *= c;
    cards.push_back(c);
  }
  BeliefNetwork bn;
  for (std::size_t i = 0; i < nodes; ++i) {
    std::vector<std::size_t> parents;
    for (std::size_t j = 0; j < i; ++j) {
      if (parents.size() < 3 && std::bernoulli_distribution(0.35)(rng)) {
        parents.push_back(j);
      }
    }
    std::size_t rows = 1;
    for (std::size_t parent : parents) {
      rows *= cards[parent];
    }
    std::vector<double> cpt;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(cards[i]);
      double sum = 0.0;
      for (double & x : row) {
        x = weight(rng);
        sum += x;
      }
      for (double x : row) {
        cpt.push_back(x / sum);
      }
    }
    std::vector<std::string> states;
    for (std::size_t s = 0; s < cards[i]; ++s) {
      states.push_back("s" + std::to_string(s));
    }
    bn.add_node("n" + std::to_string(i), std::move(states), std::move(parents), std::move(cpt));
  }
  return bn;
}

// ---------------------------------------------------------------------------------------------
// Three-state chain MDP

/// States 0, 1 and an absorbing goal 2; actions 0 (left) and 1 (right).
/// Left from 0 stays there and pays `stay_reward`, left from 1 returns to 0, right moves one
/// step towards the goal, and entering the goal pays 1.
struct ChainMdp
{
  double stay_reward{0.05};

  struct Transition
  {
    std::size_t next;
    double reward;
    bool terminal;
  };

  [[nodiscard]] Transition step(std::size_t state, std::size_t action) const
  {
    if (action == 0) {
      return state == 0 ? Transition{0, stay_reward, false} : Transition{state - 1, 0.0, false};
    }
    return state == 1 ? Transition{2, 1.0, true} : Transition{state + 1, 0.0, false};
  }
};

/// Q* of the chain by value iteration to a fixed point.
inline std::vector<std::vector<double>> chain_value_iteration(const ChainMdp & mdp, double gamma)
{
  std::vector<std::vector<double>> q(2, std::vector<double>(2, 0.0));
  for (int sweep = 0; sweep < 10000; ++sweep) {
    double change = 0.0;
    auto next_q = q;
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t a = 0; a < 2; ++a) {
        const auto t = mdp.step(s, a);
        const double bootstrap = t.terminal ? 0.0 : std::max(q[t.next][0], q[t.next][1]);
        next_q[s][a] = t.reward + gamma * bootstrap;
        change = std::max(change, std::abs(next_q[s][a] - q[s][a]));
      }
    }
    q = next_q;
    if (change < 1e-15) {
      break;
    }
  }
  return q;
}

}  // namespace junction::oracle

#endif  // JUNCTION__TESTS__ORACLES_HPP_
