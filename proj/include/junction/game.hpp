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

#ifndef JUNCTION__GAME_HPP_
#define JUNCTION__GAME_HPP_

#include "junction/payoff.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace junction
{

/// Dense two-player payoff table. Row i indexes the ego action, column j the target action.
class GameMatrix
{
public:
  GameMatrix(std::vector<double> ego_actions, std::vector<double> target_actions);

  [[nodiscard]] std::size_t rows() const { return ego_actions_.size(); }
  [[nodiscard]] std::size_t cols() const { return target_actions_.size(); }
  [[nodiscard]] const std::vector<double> & ego_actions() const { return ego_actions_; }
  [[nodiscard]] const std::vector<double> & target_actions() const { return target_actions_; }

  [[nodiscard]] double ego(std::size_t i, std::size_t j) const { return u_ego_[i * cols() + j]; }
  [[nodiscard]] double target(std::size_t i, std::size_t j) const { return u_target_[i * cols() + j]; }
  void set(std::size_t i, std::size_t j, double u_ego, double u_target);

private:
  std::vector<double> ego_actions_;
  std::vector<double> target_actions_;
  std::vector<double> u_ego_;
  std::vector<double> u_target_;
};

struct JointAction
{
  std::size_t ego{0};
  std::size_t target{0};

  friend bool operator==(const JointAction &, const JointAction &) = default;
};

struct NashResult
{
  std::vector<JointAction> equilibria;
  JointAction nearest;
  double distance{0.0};  // [m/s^2] between the current joint action and `nearest`
  bool fallback{false};  // no pure equilibrium; `nearest` is the welfare-maximising cell
};

/// Both players evaluated under the joint one-step prediction of each cell. An inactive
/// target collapses to the single action 0.
GameMatrix build_matrix(
  const Scene & scene, const JointState & s, const PayoffParams & p, const WeightScheme & scheme,
  std::span<const double> ego_actions, std::span<const double> target_actions);

/// Pure-strategy equilibria in row-major order. Best-response ties within 1e-9 all count.
std::vector<JointAction> find_pure_nash(const GameMatrix & m);

/// Equilibrium closest (Euclidean, in acceleration space) to the current joint action.
/// Ties resolve to the lowest ego index, then the lowest target index.
NashResult nearest_nash(
  const GameMatrix & m, std::vector<JointAction> equilibria, double a_ego, double a_target);

/// 2 / (1 + exp(delta * distance)): 1 at an equilibrium, decaying to 0 far from it.
double game_reward(double distance, double delta);

}  // namespace junction

#endif  // JUNCTION__GAME_HPP_
