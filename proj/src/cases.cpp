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

#include "junction/cases.hpp"

#include "junction/error.hpp"

#include <fmt/format.h>

namespace junction
{

std::string to_string(CaseId id)
{
  switch (id) {
    case CaseId::kA:
      return "A";
    case CaseId::kAMisweighted:
      return "A_mis";
    case CaseId::kB:
      return "B";
    case CaseId::kC:
      return "C";
    case CaseId::kD25:
      return "D25";
    case CaseId::kD50:
      return "D50";
    case CaseId::kRoundabout:
      return "roundabout";
  }
  return "?";
}

CaseId case_from_string(std::string_view name)
{
  for (CaseId id : kAllCases) {
    if (to_string(id) == name) {
      return id;
    }
  }
  throw Error(
    ErrorCode::kUnknownCase, fmt::format("unknown case '{}' (A, A_mis, B, C, D25, D50, roundabout)", name));
}

Config make_case(CaseId id, const Config & base)
{
  Config cfg = base;
  ScenarioConfig & s = cfg.scenario;
  DecisionStack & d = cfg.decision;
  s.geometry = GeometryKind::kIntersection;
  s.target_policy = TargetPolicyKind::kScriptedMalicious;
  s.ego_speed = 10.0;
  s.target_speed = 13.2;
  d.weights.mode = WeightMode::kAdaptive;
  d.use_tom = true;
  switch (id) {
    case CaseId::kA:
      d.weights = {WeightMode::kFixed, 0.4, 0.3, 0.3};
      d.use_tom = false;
      break;
    case CaseId::kAMisweighted:
      d.weights = {WeightMode::kFixed, 0.8, 0.1, 0.1};
      d.use_tom = false;
      break;
    case CaseId::kB:
      d.use_tom = false;
      break;
    case CaseId::kC:
      break;
    case CaseId::kD25:
      s.ego_speed = 12.0;
      s.target_speed = 15.0;
      break;
    case CaseId::kD50:
      s.ego_speed = 12.0;
      s.target_speed = 18.0;
      break;
    case CaseId::kRoundabout:
      s.geometry = GeometryKind::kRoundabout;
      break;
  }
  // Nominal starts put both vehicles on the conflict point at the same instant.
  align_arrival(s, 0.0);
  return cfg;
}

}  // namespace junction
