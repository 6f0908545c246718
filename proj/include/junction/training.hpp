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

#ifndef JUNCTION__TRAINING_HPP_
#define JUNCTION__TRAINING_HPP_

#include "junction/episode.hpp"

#include <filesystem>
#include <memory>
#include <optional>

namespace junction
{

/// Target behaviour and start conditions drawn for one training episode.
struct EpisodeDraw
{
  ScenarioConfig scenario;
  bool malicious{false};
};

/// Mixes malicious and benign targets with randomised speeds and arrival offsets around
/// the configured geometry.
EpisodeDraw draw_training_episode(const Config & cfg, Rng & rng);

/// Scenario episodes exposed to the tabular learner. The greedy branch uses the one-step
/// lookahead scores of the episode.
class ScenarioEnvironment final : public Environment
{
public:
  ScenarioEnvironment(const Config & cfg, const BeliefNetwork & network);

  [[nodiscard]] std::vector<double> actions() const override { return cfg_.actions; }
  [[nodiscard]] BinEdges edges() const override { return cfg_.bins; }
  std::uint64_t reset(Rng & rng) override;
  Step step(std::size_t action, Rng & rng) override;
  std::vector<double> greedy_scores(const QTable & q, std::uint64_t key, const LearnerParams & p) override;

  /// Collisions seen since construction.
  [[nodiscard]] std::size_t collisions() const { return collisions_; }

private:
  const Config & cfg_;
  const BeliefNetwork & network_;
  std::unique_ptr<Episode> episode_;
  std::unique_ptr<TargetPolicy> target_;
  std::size_t collisions_{0};
};

/// Full training run on `cfg` (episode count from the learner parameters).
TrainingResult train_agent(
  const Config & cfg, const BeliefNetwork & network, std::uint64_t seed,
  std::optional<QTable> initial = std::nullopt);

/// The configured network file, or the built-in CPTs when none is set.
BeliefNetwork load_network(const Config & cfg);

/// Greedy rollout with a frozen table against the configured target. Seed 0 runs the nominal
/// start conditions, any other seed jitters them.
Trace evaluate(const Config & cfg, const QTable & table, const BeliefNetwork & network, std::uint64_t seed);

/// Labelled episodes for fitting the malice network: training-mix targets against an ego that
/// holds its speed. Files are named episode_0000 onwards.
void generate_corpus(const Config & cfg, std::uint32_t episodes, std::uint64_t seed, const std::filesystem::path & dir);

}  // namespace junction

#endif  // JUNCTION__TRAINING_HPP_
