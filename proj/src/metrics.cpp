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

#include "junction/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace junction
{
namespace
{

// Time within the step from row `k` at which the ego covers `remaining` metres.
double time_to_cover(double remaining, double speed, double accel, double dt)
{
  if (remaining <= 0.0) {
    return 0.0;
  }
  double tau = dt;
  if (std::abs(accel) < 1e-12) {
    tau = speed > 0.0 ? remaining / speed : dt;
  } else {
    const double disc = speed * speed + 2.0 * accel * remaining;
    if (disc >= 0.0) {
      tau = (-speed + std::sqrt(disc)) / accel;
    }
  }
  return std::clamp(tau, 0.0, dt);
}

}  // namespace

MetricsReport compute_metrics(const Trace & trace, const MetricsOptions & options)
{
  MetricsReport report;
  report.collided = trace.collided;
  report.partial = !trace.completed;
  report.min_distance = std::numeric_limits<double>::infinity();
  report.min_speed = std::numeric_limits<double>::infinity();
  const auto & rows = trace.rows;
  if (rows.empty()) {
    report.min_speed = 0.0;
    return report;
  }

  // Last row index that belongs to the crossing.
  std::size_t last = rows.size() - 1;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    if (!rows[k].ego.exited && rows[k + 1].ego.exited) {
      const double tau = time_to_cover(
        trace.ego_exit_s - rows[k].ego.s_along, rows[k].ego.speed(), rows[k].a_ego, trace.dt);
      if (!trace.collided) {
        report.crossing_time = rows[k].t + tau;
      }
      last = k + 1;
      break;
    }
  }

  double a_prev = rows.front().ego.a_next;
  std::size_t changes = 0;
  for (std::size_t k = 0; k <= last; ++k) {
    const TraceRow & row = rows[k];
    report.min_distance = std::min(report.min_distance, row.distance);
    const bool near = !trace.ego_conflict_s || std::abs(*trace.ego_conflict_s - row.ego.s_along) <= options.region;
    if (near) {
      report.min_speed = std::min(report.min_speed, row.ego.speed());
    }
    if (!row.terminal && k < last) {
      report.comfort_index += std::abs(row.a_ego - a_prev) * trace.dt;
      report.mean_abs_jerk += std::abs(row.a_ego - a_prev);
      a_prev = row.a_ego;
      ++changes;
    }
  }
  for (std::size_t k = last + 1; k < rows.size(); ++k) {
    report.min_distance = std::min(report.min_distance, rows[k].distance);
  }
  if (changes > 0) {
    report.mean_abs_jerk /= static_cast<double>(changes);
  }
  if (std::isinf(report.min_speed)) {
    report.min_speed = rows.front().ego.speed();
  }
  return report;
}

}  // namespace junction
