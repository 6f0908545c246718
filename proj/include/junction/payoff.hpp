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

#ifndef JUNCTION__PAYOFF_HPP_
#define JUNCTION__PAYOFF_HPP_

#include "junction/scene.hpp"

#include <optional>
#include <utility>

namespace junction
{

struct PayoffParams
{
  double beta{0.05};         // [1/m] distance decay coefficient
  double k1{1.0};            // TTC sensitivity of the safety payoff
  double k2{1.0};            // efficiency sensitivity
  double k3{1.0};            // comfort sensitivity
  double k{1.0};             // safety-weight curve sensitivity
  double v_threshold{2.0};   // [m/s] below this the safety payoff switches to distance decay
  double ttc_min{1.0};       // [s]
  double ttc_crit{4.0};      // [s]
  double a_min{-5.0};        // [m/s^2]
  double a_max{3.0};         // [m/s^2]
  double v_max{12.0};        // [m/s] legal maximum speed
  double v_floor{0.1};       // [m/s] speed floor for the remaining-time estimate
  double decay_distance{10.0};  // [m] malicious safety distance constant D
  double decay_ttc{2.0};        // [s] malicious safety TTC constant T

  /// Throws Error(kConfig) when an invariant is violated.
  void validate() const;
};

enum class WeightMode { kAdaptive, kFixed };

/// How the safety/efficiency/comfort weights are chosen.
struct WeightScheme
{
  WeightMode mode{WeightMode::kAdaptive};
  double fixed_safety{0.4};
  double fixed_efficiency{0.3};
  double fixed_comfort{0.3};
};

struct PayoffBreakdown
{
  double f_s{0.0};
  double f_e{0.0};
  double f_c{0.0};
  double w_s{0.0};
  double w_e{0.0};
  double w_c{0.0};
  double total{0.0};
};

/// exp(-beta * |pos - center|), in (0, 1].
double distance_decay(Vec2 pos, Vec2 center, double beta);

/// Distance decay at the predicted position when slow, TTC margin otherwise. Clamped to [0, 1].
double safety_payoff(double next_speed, Vec2 next_pos, double ttc, const PayoffParams & p, Vec2 center);

double efficiency_payoff(double t_remaining, double t_min, double k2);

/// Efficiency for travelling `remaining` metres at `next_speed`; overspeed saturates at 1.
double efficiency_payoff_at_speed(double remaining, double next_speed, const PayoffParams & p);

/// 1 - k3 |a_cand - a_prev| / (a_max - a_min), clamped to [0, 1].
double comfort_payoff(double a_prev, double a_cand, const PayoffParams & p);

/// Safety weight: 1/3 above the critical TTC, rising towards 1 as TTC -> 0.
double adaptive_safety_weight(double ttc, const PayoffParams & p);

/// Equal split of the remaining weight: returns (w_e, w_c).
std::pair<double, double> split_weights(double w_s);

/// Weights for the given scheme at the current TTC, as (w_s, w_e, w_c).
struct WeightTriple
{
  double w_s;
  double w_e;
  double w_c;
};
WeightTriple weights_for(const WeightScheme & scheme, double ttc, const PayoffParams & p);

PayoffBreakdown combine(double f_s, double f_e, double f_c, const WeightTriple & w);

/// Ego payoff for candidate `a_cand`. The target is extrapolated with `a_target`, defaulting to
/// its last commanded acceleration. Weights follow the TTC of the current state.
PayoffBreakdown total_payoff_ego(
  const Scene & scene, const JointState & s, double a_cand, const PayoffParams & p,
  const WeightScheme & scheme, std::optional<double> a_target = std::nullopt);

/// Payoff of a target that ignores the ego: it is drawn towards the other vehicle and towards speed.
PayoffBreakdown total_payoff_malicious(
  const Scene & scene, const JointState & s, double a_cand, const PayoffParams & p,
  const WeightScheme & scheme, std::optional<double> a_ego = std::nullopt);

/// Malicious safety term exp(-d/D) (1 - exp(-ttc/T)).
double malicious_safety_payoff(double distance, double ttc, const PayoffParams & p);

}  // namespace junction

#endif  // JUNCTION__PAYOFF_HPP_
