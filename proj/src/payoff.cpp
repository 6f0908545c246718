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

#include "junction/payoff.hpp"

#include "junction/error.hpp"

#include <algorithm>
#include <cmath>

namespace junction
{

void PayoffParams::validate() const
{
  auto require = [](bool ok, const char * what) {
    if (!ok) {
      throw Error(ErrorCode::kConfig, std::string("payoff parameters: ") + what);
    }
  };
  require(k1 > 0 && k2 > 0 && k3 > 0 && k > 0, "k, k1, k2, k3 must be positive");
  require(beta > 0, "beta must be positive");
  require(decay_distance > 0 && decay_ttc > 0, "decay constants D and T must be positive");
  require(ttc_crit > ttc_min && ttc_min > 0, "require ttc_crit > ttc_min > 0");
  require(a_min < 0 && a_max > 0, "require a_min < 0 < a_max");
  require(v_threshold > 0 && v_threshold < v_max, "require 0 < v_threshold < v_max");
  require(v_floor > 0, "v_floor must be positive");
}

double distance_decay(Vec2 pos, Vec2 center, double beta)
{
  return std::exp(-beta * euclidean_distance(pos, center));
}

double safety_payoff(double next_speed, Vec2 next_pos, double ttc, const PayoffParams & p, Vec2 center)
{
  if (next_speed <= p.v_threshold) {
    return distance_decay(next_pos, center, p.beta);
  }
  if (std::isinf(ttc)) {
    return 1.0;
  }
  return std::clamp(1.0 - std::exp(-p.k1 * (ttc - p.ttc_min)), 0.0, 1.0);
}

double efficiency_payoff(double t_remaining, double t_min, double k2)
{
  return std::exp(-k2 * (t_remaining - t_min) / t_min);
}

double efficiency_payoff_at_speed(double remaining, double next_speed, const PayoffParams & p)
{
  // The ratio t/t_min does not depend on the distance itself; keep a positive stand-in once
  // the exit is behind the vehicle.
  const double distance = std::max(remaining, 1e-3);
  const double speed = std::min(std::max(next_speed, p.v_floor), p.v_max);
  return efficiency_payoff(distance / speed, distance / p.v_max, p.k2);
}

double comfort_payoff(double a_prev, double a_cand, const PayoffParams & p)
{
  return std::clamp(1.0 - p.k3 * std::abs(a_cand - a_prev) / (p.a_max - p.a_min), 0.0, 1.0);
}

double adaptive_safety_weight(double ttc, const PayoffParams & p)
{
  if (ttc > p.ttc_crit) {
    return 1.0 / 3.0;
  }
  return 1.0 / 3.0 + 2.0 / 3.0 * (1.0 - std::exp(-p.k * (p.ttc_crit / ttc)));
}

std::pair<double, double> split_weights(double w_s)
{
  const double rest = (1.0 - w_s) / 2.0;
  return {rest, rest};
}

WeightTriple weights_for(const WeightScheme & scheme, double ttc, const PayoffParams & p)
{
  if (scheme.mode == WeightMode::kFixed) {
    return {scheme.fixed_safety, scheme.fixed_efficiency, scheme.fixed_comfort};
  }
  const double w_s = adaptive_safety_weight(ttc, p);
  const auto [w_e, w_c] = split_weights(w_s);
  return {w_s, w_e, w_c};
}

PayoffBreakdown combine(double f_s, double f_e, double f_c, const WeightTriple & w)
{
  PayoffBreakdown b;
  b.f_s = f_s;
  b.f_e = f_e;
  b.f_c = f_c;
  b.w_s = w.w_s;
  b.w_e = w.w_e;
  b.w_c = w.w_c;
  b.total = w.w_s * f_s + w.w_e * f_e + w.w_c * f_c;
  return b;
}

PayoffBreakdown total_payoff_ego(
  const Scene & scene, const JointState & s, double a_cand, const PayoffParams & p,
  const WeightScheme & scheme, std::optional<double> a_target)
{
  const JointState next = scene.predict(s, a_cand, a_target.value_or(s.target.a_next));
  const double ttc_next = scene.decision_ttc(next);
  const double speed = next.ego.speed();
  const double f_s = safety_payoff(speed, next.ego.position(), ttc_next, p, scene.center);
  const double f_e = efficiency_payoff_at_speed(scene.ego_exit_s - next.ego.s_along, speed, p);
  // A braking command held at standstill produces no deceleration.
  const double a_prev = s.ego.speed() > 0.0 ? s.ego.a_next : std::max(s.ego.a_next, 0.0);
  const double f_c = comfort_payoff(a_prev, a_cand, p);
  return combine(f_s, f_e, f_c, weights_for(scheme, scene.decision_ttc(s), p));
}

double malicious_safety_payoff(double distance, double ttc, const PayoffParams & p)
{
  const double ttc_factor = std::isinf(ttc) ? 1.0 : 1.0 - std::exp(-ttc / p.decay_ttc);
  return std::exp(-distance / p.decay_distance) * ttc_factor;
}

PayoffBreakdown total_payoff_malicious(
  const Scene & scene, const JointState & s, double a_cand, const PayoffParams & p,
  const WeightScheme & scheme, std::optional<double> a_ego)
{
  const JointState next = scene.predict(s, a_ego.value_or(s.ego.a_next), a_cand);
  const double ttc_next = scene.decision_ttc(next);
  const double d = euclidean_distance(next.target.position(), next.ego.position());
  const double f_s = malicious_safety_payoff(d, ttc_next, p);
  const double f_e = std::min(next.target.speed() / p.v_max, 1.0);
  return combine(f_s, f_e, 0.0, weights_for(scheme, scene.decision_ttc(s), p));
}

}  // namespace junction
