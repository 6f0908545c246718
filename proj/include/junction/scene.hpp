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

#ifndef JUNCTION__SCENE_HPP_
#define JUNCTION__SCENE_HPP_

#include "junction/geometry.hpp"
#include "junction/vehicle.hpp"

#include <optional>

namespace junction
{

/// Static geometry shared by every step of an episode.
struct Scene
{
  Path target_path;
  Path ego_path;
  double target_exit_s{0.0};  // [m] arc length where the target leaves the intersection
  double ego_exit_s{0.0};     // [m] arc length where the ego leaves the intersection
  Vec2 center;                // intersection (or roundabout) centre
  double dt{0.1};             // [s] decision period
  bool has_target{true};
  std::optional<Conflict> conflict;  // s_first on the target path, s_second on the ego path

  /// Recomputes `conflict` from the two paths.
  void resolve_conflict();
  /// Whether the target currently takes part in decisions.
  [[nodiscard]] bool target_active(const JointState & s) const { return has_target && !s.target.exited; }
  /// TTC as seen by the decision layer: +infinity without an active target or a conflict point.
  [[nodiscard]] double decision_ttc(const JointState & s) const;
  /// Remaining arc length to the conflict point (negative once passed).
  [[nodiscard]] double ego_to_conflict(const JointState & s) const;
  [[nodiscard]] double target_to_conflict(const JointState & s) const;
  /// Advances both vehicles one period; inactive vehicles stay frozen.
  [[nodiscard]] JointState predict(const JointState & s, double a_ego, double a_target) const;
};

}  // namespace junction

#endif  // JUNCTION__SCENE_HPP_
