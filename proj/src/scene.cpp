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

#include "junction/scene.hpp"

#include <limits>

namespace junction
{

void Scene::resolve_conflict()
{
  conflict = has_target ? conflict_point(target_path, ego_path) : std::nullopt;
}

double Scene::decision_ttc(const JointState & s) const
{
  if (!target_active(s) || s.ego.exited || !conflict) {
    return std::numeric_limits<double>::infinity();
  }
  return time_to_collision(s);
}

double Scene::ego_to_conflict(const JointState & s) const
{
  return conflict ? conflict->s_second - s.ego.s_along : std::numeric_limits<double>::infinity();
}

double Scene::target_to_conflict(const JointState & s) const
{
  return conflict ? conflict->s_first - s.target.s_along : std::numeric_limits<double>::infinity();
}

JointState Scene::predict(const JointState & s, double a_ego, double a_target) const
{
  JointState next = s;
  next.t = s.t + dt;
  next.ego = step_vehicle(s.ego, ego_path, a_ego, dt);
  if (has_target) {
    next.target = step_vehicle(s.target, target_path, a_target, dt);
  }
  return next;
}

}  // namespace junction
