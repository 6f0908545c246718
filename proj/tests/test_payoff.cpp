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
#include "junction/payoff.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace junction
{
namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSamples = 10000;

TEST(Payoff, DistanceDecayExample)
{
  EXPECT_NEAR(distance_decay({10, 0}, {0, 0}, 0.1), std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(distance_decay({2, 2}, {2, 2}, 0.1), 1.0);
}

TEST(Payoff, SafetyExamples)
{
  PayoffParams p;
  p.k1 = 0.5;
  // Upper branch: TTC margin of 2 s.
  EXPECT_NEAR(safety_payoff(5.0, {0, 0}, p.ttc_min + 2.0, p, {0, 0}), 1.0 - std::exp(-1.0), 1e-15);
  // Lower branch: distance decay at the predicted position.
  p.beta = 0.1;
  EXPECT_NEAR(safety_payoff(1.0, {0, 10}, 0.5, p, {0, 0}), std::exp(-1.0), 1e-15);
  // No finite TTC is the safest state.
  EXPECT_DOUBLE_EQ(safety_payoff(5.0, {0, 0}, kInf, p, {0, 0}), 1.0);
  // Inside the minimum TTC the margin clamps at zero.
  EXPECT_DOUBLE_EQ(safety_payoff(5.0, {0, 0}, 0.5, p, {0, 0}), 0.0);
}

TEST(Payoff, EfficiencyExamples)
{
  EXPECT_NEAR(efficiency_payoff(2.0, 1.0, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(efficiency_payoff(3.0, 3.0, 1.0), 1.0);
  PayoffParams p;
  EXPECT_DOUBLE_EQ(efficiency_payoff_at_speed(30.0, p.v_max * 1.5, p), 1.0);
  EXPECT_NEAR(efficiency_payoff_at_speed(30.0, p.v_max / 2.0, p), std::exp(-1.0), 1e-15);
}

TEST(Payoff, ComfortExamples)
{
  PayoffParams p;
  EXPECT_DOUBLE_EQ(comfort_payoff(-5.0, 3.0, p), 0.0);
  EXPECT_DOUBLE_EQ(comfort_payoff(1.0, -3.0, p), 0.5);
  EXPECT_DOUBLE_EQ(comfort_payoff(2.0, 2.0, p), 1.0);
  p.k3 = 3.0;
  EXPECT_DOUBLE_EQ(comfort_payoff(-5.0, 3.0, p), 0.0);  // clamped
}

TEST(Payoff, SafetyWeightExamples)
{
  PayoffParams p;
  EXPECT_DOUBLE_EQ(adaptive_safety_weight(2.0 * p.ttc_crit, p), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(adaptive_safety_weight(kInf, p), 1.0 / 3.0);
  EXPECT_NEAR(adaptive_safety_weight(p.ttc_crit, p), 1.0 / 3.0 + 2.0 / 3.0 * (1.0 - std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(adaptive_safety_weight(p.ttc_crit, p), 0.7547, 1e-4);
  EXPECT_NEAR(adaptive_safety_weight(1e-6, p), 1.0, 1e-12);
}

TEST(Payoff, SplitAndCombineExamples)
{
  const auto [w_e, w_c] = split_weights(0.6);
  EXPECT_NEAR(w_e, 0.2, 1e-15);
  EXPECT_NEAR(w_c, 0.2, 1e-15);

  const WeightScheme fixed{WeightMode::kFixed, 0.4, 0.3, 0.3};
  PayoffParams p;
  EXPECT_NEAR(combine(1, 1, 1, weights_for(fixed, 1.0, p)).total, 1.0, 1e-15);

  const WeightScheme adaptive;
  EXPECT_NEAR(combine(1, 0, 0, weights_for(adaptive, 100.0, p)).total, 1.0 / 3.0, 1e-15);
}

TEST(Payoff, MaliciousSafetyExamples)
{
  PayoffParams p;
  const double d = p.decay_distance;
  const double t = p.decay_ttc;
  EXPECT_NEAR(malicious_safety_payoff(d, t, p), std::exp(-1.0) * (1.0 - std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(malicious_safety_payoff(d, t, p), 0.2325, 1e-4);
  EXPECT_DOUBLE_EQ(malicious_safety_payoff(0.0, 0.0, p), 0.0);
}

TEST(Payoff, ValidateRejectsBadParameters)
{
  PayoffParams p;
  EXPECT_NO_THROW(p.validate());
  p.ttc_min = 5.0;
  EXPECT_THROW(p.validate(), Error);
  p = {};
  p.a_min = 1.0;
  EXPECT_THROW(p.validate(), Error);
}

// Randomised inputs spanning the reachable envelope of the simulator.
struct PayoffInputs
{
  std::mt19937_64 rng;
  explicit PayoffInputs(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double ttc()
  {
    const double u = uniform(0.0, 1.0);
    if (u < 0.05) {
      return kInf;
    }
    return std::exp(uniform(std::log(1e-4), std::log(100.0)));
  }
  PayoffParams params()
  {
    PayoffParams p;
    p.k = uniform(0.1, 5.0);
    p.k1 = uniform(0.1, 5.0);
    p.k2 = uniform(0.01, 5.0);
    p.k3 = uniform(0.01, 3.0);
    p.beta = uniform(0.01, 0.5);
    p.ttc_min = uniform(0.1, 2.0);
    p.ttc_crit = p.ttc_min + uniform(0.1, 6.0);
    return p;
  }
};

TEST(PayoffProperties, WeightClosureAndRange)
{
  PayoffInputs in(11);
  for (int i = 0; i < kSamples; ++i) {
    const PayoffParams p = in.params();
    const WeightTriple w = weights_for(WeightScheme{}, in.ttc(), p);
    EXPECT_NEAR(w.w_s + w.w_e + w.w_c, 1.0, 1e-12);
    EXPECT_GE(w.w_s, 1.0 / 3.0 - 1e-15);
    EXPECT_LE(w.w_s, 1.0);
    EXPECT_GE(w.w_e, 0.0);
    EXPECT_GE(w.w_c, 0.0);
    EXPECT_EQ(w.w_e, w.w_c);
  }
}

TEST(PayoffProperties, AllPayoffsInUnitInterval)
{
  PayoffInputs in(12);
  for (int i = 0; i < kSamples; ++i) {
    const PayoffParams p = in.params();
    const double fs = safety_payoff(in.uniform(0, 20), {in.uniform(-60, 60), in.uniform(-60, 60)}, in.ttc(), p, {0, 0});
    const double fe = efficiency_payoff_at_speed(in.uniform(-5, 80), in.uniform(0, 25), p);
    const double fc = comfort_payoff(in.uniform(p.a_min, p.a_max), in.uniform(p.a_min, p.a_max), p);
    const double fm = malicious_safety_payoff(in.uniform(0, 100), in.ttc(), p);
    for (double f : {fs, fe, fc}) {
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
    }
    EXPECT_GE(fm, 0.0);
    EXPECT_LT(fm, 1.0);
  }
}

TEST(PayoffProperties, SafetyIncreasesWithTtc)
{
  PayoffInputs in(13);
  for (int i = 0; i < kSamples; ++i) {
    const PayoffParams p = in.params();
    // Strictness holds where the exponential is resolvable in double precision.
    const double t1 = p.ttc_min + in.uniform(0.0, 10.0 / p.k1);
    const double t2 = t1 + in.uniform(1e-3, 5.0);
    const double f1 = safety_payoff(p.v_threshold + 1.0, {0, 0}, t1, p, {0, 0});
    const double f2 = safety_payoff(p.v_threshold + 1.0, {0, 0}, t2, p, {0, 0});
    EXPECT_LT(f1, f2) << t1 << " " << t2;
  }
}

TEST(PayoffProperties, EfficiencyDecreasesWithRemainingTime)
{
  PayoffInputs in(14);
  for (int i = 0; i < kSamples; ++i) {
    const double k2 = in.uniform(0.01, 5.0);
    const double t_min = in.uniform(0.5, 10.0);
    const double t1 = t_min * in.uniform(1.0, 5.0);
    const double t2 = t1 + in.uniform(1e-3, 5.0);
    EXPECT_GT(efficiency_payoff(t1, t_min, k2), efficiency_payoff(t2, t_min, k2));
  }
}

TEST(PayoffProperties, ComfortDecreasesWithJerk)
{
  PayoffInputs in(15);
  for (int i = 0; i < kSamples; ++i) {
    PayoffParams p = in.params();
    p.k3 = in.uniform(0.01, 1.0);  // k3 <= 1 keeps the whole span unclamped
    const double a_prev = in.uniform(p.a_min, p.a_max);
    const double span = p.a_max - p.a_min;
    const double d1 = in.uniform(0.0, span * 0.99);
    const double d2 = in.uniform(d1 + 1e-3, span);
    const double f1 = 1.0 - p.k3 * d1 / span;
    EXPECT_NEAR(comfort_payoff(a_prev, a_prev + d1, p), f1, 1e-12);
    EXPECT_GT(comfort_payoff(0.0, d1, p), comfort_payoff(0.0, d2, p));
  }
}

TEST(PayoffProperties, SafetyWeightNonIncreasingInTtc)
{
  PayoffInputs in(16);
  for (int i = 0; i < kSamples; ++i) {
    const PayoffParams p = in.params();
    const double t1 = in.ttc();
    const double t2 = std::isinf(t1) ? kInf : t1 + in.uniform(0.0, 10.0);
    EXPECT_GE(adaptive_safety_weight(t1, p), adaptive_safety_weight(t2, p));
  }
}

TEST(PayoffProperties, EmergencyLimit)
{
  PayoffInputs in(17);
  for (int i = 0; i < 1000; ++i) {
    const PayoffParams p = in.params();
    const WeightTriple w = weights_for(WeightScheme{}, 1e-9, p);
    EXPECT_NEAR(w.w_s, 1.0, 1e-9);
    EXPECT_NEAR(w.w_e, 0.0, 1e-9);
    EXPECT_EQ(w.w_e, w.w_c);
  }
}

TEST(PayoffProperties, EgoBreakdownClosesOnScenarioStates)
{
  const Config cfg;
  const Scene scene = build_scene(cfg.scenario);
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> s_ego(0.0, scene.ego_path.length());
  std::uniform_real_distribution<double> s_target(0.0, scene.target_path.length());
  std::uniform_real_distribution<double> speed(0.0, 18.0);
  for (int i = 0; i < 2000; ++i) {
    JointState s;
    s.ego = place_on_path(scene.ego_path, s_ego(rng), speed(rng), -1.0);
    s.target = place_on_path(scene.target_path, s_target(rng), speed(rng));
    for (double a : cfg.actions) {
      const PayoffBreakdown b = total_payoff_ego(scene, s, a, cfg.payoff, WeightScheme{});
      EXPECT_NEAR(b.w_s + b.w_e + b.w_c, 1.0, 1e-12);
      EXPECT_GE(b.total, 0.0);
      EXPECT_LE(b.total, 1.0 + 1e-12);
      const PayoffBreakdown m = total_payoff_malicious(scene, s, a, cfg.payoff, WeightScheme{});
      EXPECT_GE(m.total, 0.0);
      EXPECT_LE(m.total, 1.0 + 1e-12);
    }
  }
}

}  // namespace
}  // namespace junction
