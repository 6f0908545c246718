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

#include "junction/game.hpp"

#include "junction/error.hpp"

#include <cmath>
#include <limits>

namespace junction
{
namespace
{
constexpr double kTieTolerance = 1e-9;
}

GameMatrix::GameMatrix(std::vector<double> ego_actions, std::vector<double> target_actions)
: ego_actions_(std::move(ego_actions)), target_actions_(std::move(target_actions))
{
  if (ego_actions_.empty() || target_actions_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "game matrix needs at least one action per player");
  }
  u_ego_.assign(rows() * cols(), 0.0);
  u_target_.assign(rows() * cols(), 0.0);
}

void GameMatrix::set(std::size_t i, std::size_t j, double u_ego, double u_target)
{
  if (!std::isfinite(u_ego) || !std::isfinite(u_target)) {
    throw Error(ErrorCode::kInvalidArgument, "game matrix payoffs must be finite");
  }
  u_ego_[i * cols() + j] = u_ego;
  u_target_[i * cols() + j] = u_target;
}

GameMatrix build_matrix(
  const Scene & scene, const JointState & s, const PayoffParams & p, const WeightScheme & scheme,
  std::span<const double> ego_actions, std::span<const double> target_actions)
{
  const bool target_active = scene.target_active(s);
  std::vector<double> targets =
    target_active ? std::vector<double>(target_actions.begin(), target_actions.end()) : std::vector<double>{0.0};
  GameMatrix m(std::vector<double>(ego_actions.begin(), ego_actions.end()), std::move(targets));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double a_e = m.ego_actions()[i];
      const double a_t = m.target_actions()[j];
      const double u_e = total_payoff_ego(scene, s, a_e, p, scheme, a_t).total;
      const double u_t = target_active ? total_payoff_malicious(scene, s, a_t, p, scheme, a_e).total : 0.0;
      m.set(i, j, u_e, u_t);
    }
  }
  return m;
}

std::vector<JointAction> find_pure_nash(const GameMatrix & m)
{
  std::vector<double> col_best(m.cols(), -std::numeric_limits<double>::infinity());
  std::vector<double> row_best(m.rows(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      col_best[j] = std::max(col_best[j], m.ego(i, j));
      row_best[i] = std::max(row_best[i], m.target(i, j));
    }
  }
  std::vector<JointAction> out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m.ego(i, j) >= col_best[j] - kTieTolerance && m.target(i, j) >= row_best[i] - kTieTolerance) {
        out.push_back({i, j});
      }
    }
  }
  return out;
}

NashResult nearest_nash(
  const GameMatrix & m, std::vector<JointAction> equilibria, double a_ego, double a_target)
{
  auto distance_to = [&](JointAction ja) {
    return std::hypot(m.ego_actions()[ja.ego] - a_ego, m.target_actions()[ja.target] - a_target);
  };
  NashResult result;
  result.equilibria = std::move(equilibria);
  if (result.equilibria.empty()) {
    result.fallback = true;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const double welfare = m.ego(i, j) + m.target(i, j);
        if (welfare > best) {
          best = welfare;
          result.nearest = {i, j};
        }
      }
    }
    result.distance = distance_to(result.nearest);
    return result;
  }
  result.distance = std::numeric_limits<double>::infinity();
  for (const JointAction & ja : result.equilibria) {
    const double d = distance_to(ja);
    const bool earlier = ja.ego < result.nearest.ego ||
                         (ja.ego == result.nearest.ego && ja.target < result.nearest.target);
    if (d < result.distance || (d == result.distance && earlier)) {
      result.distance = d;
      result.nearest = ja;
    }
  }
  return result;
}

double game_reward(double distance, double delta)
{
  return 2.0 / (1.0 + std::exp(delta * distance));
}

}  // namespace junction
