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

#ifndef JUNCTION__VEHICLE_HPP_
#define JUNCTION__VEHICLE_HPP_

#include "junction/geometry.hpp"

namespace junction
{

/// Kinematic state of one vehicle constrained to its planned path.
struct VehicleState
{
  double x{0.0};        // [m]
  double y{0.0};        // [m]
  double vx{0.0};       // [m/s]
  double vy{0.0};       // [m/s]
  double a_next{0.0};   // [m/s^2] last commanded acceleration
  double s_along{0.0};  // [m] arc length travelled along the path
  bool exited{false};   // reached the end of its path; frozen from then on

  [[nodiscard]] double speed() const { return std::hypot(vx, vy); }
  [[nodiscard]] Vec2 position() const { return {x, y}; }
  [[nodiscard]] Vec2 velocity() const { return {vx, vy}; }
};

/// Vehicle 1 is the (possibly malicious) target, vehicle 2 the autonomous ego.
struct JointState
{
  VehicleState target;
  VehicleState ego;
  double t{0.0};  // [s]
};

/// Builds a state at arc length `s` moving along the path tangent with `speed`.
VehicleState place_on_path(const Path & path, double s, double speed, double a_next = 0.0);

/// One constant-acceleration step of length `dt` along `path`.
/// Speed clamps at zero (no reversing); reaching the path end freezes the vehicle as exited.
VehicleState step_vehicle(const VehicleState & state, const Path & path, double a, double dt);

/// Time of closest approach for relative position `r` = p1 - p2 and velocity `v_rel` = v1 - v2.
/// Only strictly positive times are returned; diverging or static pairs give +infinity.
double time_to_collision(Vec2 r, Vec2 v_rel);
double time_to_collision(const JointState & s);

}  // namespace junction

#endif  // JUNCTION__VEHICLE_HPP_
