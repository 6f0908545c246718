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
namespace
{

class NoTarget final : public TargetPolicy
{
public:
  double act(const Scene &, const JointState &) override { return 0.0; }
};

class ScriptedMalicious final : public TargetPolicy
{
public:
  double act(const Scene &, const JointState &) override { return 0.0; }
};

/// Greedy on the malicious payoff, restricted to non-negative commands and a speed cap.
class PayoffMalicious final : public TargetPolicy
{
public:
  explicit PayoffMalicious(const Config & cfg) : cfg_(cfg) {}

  double act(const Scene & scene, const JointState & s) override
  {
    double best_action = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    const double cap = kCapFactor * cfg_.payoff.v_max;
    for (double a : cfg_.actions) {
      if (a < 0.0) {
        continue;
      }
      if (a > 0.0 && s.target.speed() + a * scene.dt > cap) {
        continue;
      }
      const double u = total_payoff_malicious(scene, s, a, cfg_.payoff, cfg_.decision.weights).total;
      if (u > best) {
        best = u;
        best_action = a;
      }
    }
    return best_action;
  }

private:
  static constexpr double kCapFactor = 1.5;
  const Config & cfg_;
};

/// Gives way when the ego is due at the conflict point first or shortly after, then resumes.
class BenignYielding final : public TargetPolicy
{
public:
  explicit BenignYielding(const Config & cfg) : cfg_(cfg) {}

  double act(const Scene & scene, const JointState & s) override
  {
    const double speed = s.target.speed();
    if (!cruise_) {
      cruise_ = speed;
    }
    const double target_gap = scene.target_to_conflict(s);
    const double ego_gap = scene.ego_to_conflict(s);
    const bool ego_clear = s.ego.exited || ego_gap < -kClearance;
    if (!std::isfinite(target_gap) || target_gap <= 0.0 || ego_clear) {
      yielding_ = false;
      return resume(speed);
    }
    if (!yielding_) {
      const double target_eta = target_gap / std::max(speed, kMinSpeed);
      const double ego_eta = ego_gap / std::max(s.ego.speed(), kMinSpeed);
      yielding_ = ego_gap > -kClearance && ego_eta < target_eta + kGiveWayWindow;
    }
    if (!yielding_) {
      return resume(speed);
    }
    const double room = target_gap - kStopShort;
    if (speed <= 0.0) {
      return 0.0;
    }
    if (room <= 0.0) {
      return cfg_.payoff.a_min;
    }
    return std::clamp(-speed * speed / (2.0 * room), cfg_.payoff.a_min, 0.0);
  }

private:
  double resume(double speed) const
  {
    const double gap = *cruise_ - speed;
    return std::clamp(gap / kResumeTime, 0.0, std::min(2.0, cfg_.payoff.a_max));
  }

  static constexpr double kClearance = 3.0;      // [m] ego past the conflict point
  static constexpr double kGiveWayWindow = 2.0;  // [s]
  static constexpr double kStopShort = 6.0;      // [m] stop line before the conflict point
  static constexpr double kMinSpeed = 0.1;       // [m/s]
  static constexpr double kResumeTime = 1.0;     // [s]
  const Config & cfg_;
  std::optional<double> cruise_;
  bool yielding_{false};
};

}  // namespace

std::unique_ptr<TargetPolicy> make_target_policy(TargetPolicyKind kind, const Config & cfg)
{
  switch (kind) {
    case TargetPolicyKind::kNone:
      return std::make_unique<NoTarget>();
    case TargetPolicyKind::kScriptedMalicious:
      return std::make_unique<ScriptedMalicious>();
    case TargetPolicyKind::kPayoffMalicious:
      return std::make_unique<PayoffMalicious>(cfg);
    case TargetPolicyKind::kBenignYielding:
      return std::make_unique<BenignYielding>(cfg);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown target policy");
}

}  // namespace junction
