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

#ifndef JUNCTION__IO_HPP_
#define JUNCTION__IO_HPP_

#include "junction/metrics.hpp"
#include "junction/tom.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace junction
{

/// Header row of the trace CSV.
inline constexpr const char * kTraceHeader = "t,x1,y1,v1,a1,x2,y2,v2,a2,ttc,dist,w_s,r_tom,r_game,r_total";

std::string trace_to_csv(const Trace & trace);
std::string metrics_to_json(const MetricsReport & report);
/// episode,mean_reward,epsilon
std::string learning_curve_csv(const std::vector<double> & curve, const std::vector<double> & epsilons);

/// Ego speed against time on a fixed 0 to 6 s axis.
std::string speed_curve_svg(const Trace & trace, const std::string & title);
/// Distance between the vehicles against time.
std::string distance_curve_svg(const Trace & trace, const std::string & title);

/// One line per labelled run, in both CSV and aligned text form.
std::string comparison_csv(const std::vector<std::pair<std::string, MetricsReport>> & rows);
std::string comparison_table(const std::vector<std::pair<std::string, MetricsReport>> & rows);

/// Corpus layout: `<name>.csv` trace plus `<name>.meta.json` with the label, the conflict point
/// and the rows in which the target was observable.
void write_corpus_episode(
  const std::filesystem::path & dir, const std::string & name, const Trace & trace, bool malicious,
  const Scene & scene, double v_max);
/// Loads every episode of a corpus directory in file-name order and rebuilds its observations.
/// Throws Error(kEmptyCorpus) when none is found.
std::vector<LabeledEpisode> read_corpus(const std::filesystem::path & dir);

std::string read_text_file(const std::filesystem::path & path);
/// Writes via a temporary file and rename so readers never see partial content.
void write_text_file(const std::filesystem::path & path, const std::string & text);

}  // namespace junction

#endif  // JUNCTION__IO_HPP_
