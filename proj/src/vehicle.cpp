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

#include "junction/vehicle.hpp"

#include "junction/error.hpp"

#include <limits>

namespace junction
{

VehicleState place_on_path(const Path & path, double s, double speed, double a_next)
{
  VehicleState state;
  const Vec2 p = path.point_at(s);
  const Vec2 t = path.tangent_at(s);
  state.x = p.x;
  state.y = p.y;
  state.vx = speed * t.x;
  state.vy = speed * t.y;
  state.a_next = a_next;
  state.s_along = s;
  return state;
}

VehicleState step_vehicle(const VehicleState & state, const Path & path, double a, double dt)
{
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "step_vehicle: dt must be positive");
  }
  if (state.exited) {
    return state;
  }
  const double speed = state.speed();
  double next_speed = speed + a * dt;
  double ds = 0.0;
  if (next_speed >= 0.0) {
    ds = speed * dt + 0.5 * a * dt * dt;
  } else {
    // Motion stops at t = speed / -a inside the step.
    const double t_stop = speed / -a;
    ds = speed * t_stop + 0.5 * a * t_stop * t_stop;
    next_speed = 0.0;
  }
  double s = state.s_along + ds;
  // Sub-nanometre slack absorbs accumulated rounding at the path end.
  const bool exited = s >= path.length() - 1e-9;
  if (exited) {
    s = path.length();
  }
  VehicleState next = place_on_path(path, s, next_speed, a);
  next.exited = exited;
  return next;
}

double time_to_collision(Vec2 r, Vec2 v_rel)
{
  const double v2 = dot(v_rel, v_rel);
  if (v2 == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double t = -dot(r, v_rel) / v2;
  return t > 0.0 ? t : std::numeric_limits<double>::infinity();
}

double time_to_collision(const JointState & s)
{
  return time_to_collision(s.target.position() - s.ego.position(), s.target.velocity() - s.ego.velocity());
}

}  // namespace junction
