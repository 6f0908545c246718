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

#ifndef JUNCTION__CASES_HPP_
#define JUNCTION__CASES_HPP_

#include "junction/config.hpp"

#include <array>
#include <string>
#include <string_view>

namespace junction
{

enum class CaseId {
  kA,           // game reward only, fixed weights 0.4 / 0.3 / 0.3
  kAMisweighted,  // as A with a safety-heavy fixed split
  kB,           // adaptive weights
  kC,           // adaptive weights and ToM reward
  kD25,         // full stack, target 25 % over the limit
  kD50,         // full stack, target 50 % over the limit
  kRoundabout,  // full stack on the roundabout
};

inline constexpr std::array<CaseId, 7> kAllCases{
  CaseId::kA, CaseId::kAMisweighted, CaseId::kB, CaseId::kC, CaseId::kD25, CaseId::kD50, CaseId::kRoundabout};

std::string to_string(CaseId id);
/// Accepts A, A_mis, B, C, D25, D50, roundabout. Throws Error(kUnknownCase).
CaseId case_from_string(std::string_view name);

/// Scenario and decision stack of a case on top of `base` (payoff, learner, bins are kept).
Config make_case(CaseId id, const Config & base = {});

}  // namespace junction

#endif  // JUNCTION__CASES_HPP_
