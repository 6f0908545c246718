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

#ifndef JUNCTION__METRICS_HPP_
#define JUNCTION__METRICS_HPP_

#include "junction/episode.hpp"

#include <optional>

namespace junction
{

struct MetricsReport
{
  std::optional<double> crossing_time;  // [s] empty when the ego never left the intersection
  double min_speed{0.0};       // [m/s] near the conflict point
  double comfort_index{0.0};   // [m/s] sum |a_{k+1} - a_k| dt over the crossing
  double mean_abs_jerk{0.0};   // [m/s^2] mean |a_{k+1} - a_k| over the same steps
  double min_distance{0.0};    // [m] +infinity without a target
  bool collided{false};
  bool partial{false};         // trace stopped at the horizon
};

struct MetricsOptions
{
  double region{20.0};  // [m] along the ego path around the conflict point for min_speed
};

/// Pure function of the trace.
MetricsReport compute_metrics(const Trace & trace, const MetricsOptions & options = {});

}  // namespace junction

#endif  // JUNCTION__METRICS_HPP_
