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

#include "junction/training.hpp"

#include "junction/error.hpp"
#include "junction/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace junction
{
namespace
{

double uniform(Rng & rng, double lo, double hi)
{
  return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

EpisodeDraw draw_training_episode(const Config & cfg, Rng & rng)
{
  const TrainingMix & mix = cfg.training;
  EpisodeDraw draw;
  draw.scenario = jittered(cfg.scenario, rng);
  draw.malicious = std::bernoulli_distribution(mix.p_malicious)(rng);
  draw.scenario.target_policy =
    draw.malicious ? TargetPolicyKind::kPayoffMalicious : TargetPolicyKind::kBenignYielding;
  draw.scenario.ego_speed = uniform(rng, mix.ego_speed_min, mix.ego_speed_max);
  draw.scenario.target_speed = draw.malicious ? uniform(rng, mix.malicious_speed_min, mix.malicious_speed_max)
                                              : uniform(rng, mix.benign_speed_min, mix.benign_speed_max);
  align_arrival(draw.scenario, uniform(rng, mix.offset_min, mix.offset_max));
  return draw;
}

ScenarioEnvironment::ScenarioEnvironment(const Config & cfg, const BeliefNetwork & network)
: cfg_(cfg), network_(network)
{
}

std::uint64_t ScenarioEnvironment::reset(Rng & rng)
{
  const EpisodeDraw draw = draw_training_episode(cfg_, rng);
  episode_ = std::make_unique<Episode>(cfg_, draw.scenario, network_);
  target_ = make_target_policy(draw.scenario.target_policy, cfg_);
  return episode_->key();
}

Environment::Step ScenarioEnvironment::step(std::size_t action, Rng &)
{
  if (!episode_ || episode_->done()) {
    throw Error(ErrorCode::kInvalidArgument, "step() called without an active episode");
  }
  const bool target_active = episode_->scene().target_active(episode_->state());
  const double a_target = target_active ? target_->act(episode_->scene(), episode_->state()) : 0.0;
  const Episode::Outcome out = episode_->advance(action, a_target);
  collisions_ += episode_->collided() ? 1U : 0U;
  Step step;
  step.reward = out.reward;
  step.terminal = out.terminal;
  step.done = out.done || out.terminal;
  step.next_key = episode_->key();
  return step;
}

std::vector<double> ScenarioEnvironment::greedy_scores(const QTable & q, std::uint64_t, const LearnerParams &)
{
  return episode_->decision_scores(q);
}

TrainingResult train_agent(
  const Config & cfg, const BeliefNetwork & network, std::uint64_t seed, std::optional<QTable> initial)
{
  cfg.validate();
  ScenarioEnvironment env(cfg, network);
  if (initial) {
    return train(env, cfg.learner, seed, std::move(*initial));
  }
  return train(env, cfg.learner, seed);
}

BeliefNetwork load_network(const Config & cfg)
{
  if (cfg.tom_network.empty()) {
    return default_malice_network();
  }
  return network_from_json(read_text_file(cfg.tom_network));
}

Trace evaluate(const Config & cfg, const QTable & table, const BeliefNetwork & network, std::uint64_t seed)
{
  cfg.validate();
  table.check_compatible(cfg.bins, cfg.actions);
  Rng rng(seed);
  const ScenarioConfig scenario = seed == 0 ? cfg.scenario : jittered(cfg.scenario, rng);
  const auto target = make_target_policy(scenario.target_policy, cfg);
  return run_episode(cfg, scenario, network, greedy_decider(table), *target);
}

void generate_corpus(const Config & cfg, std::uint32_t episodes, std::uint64_t seed, const std::filesystem::path & dir)
{
  cfg.validate();
  const auto coast = std::min_element(cfg.actions.begin(), cfg.actions.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  const EgoDecider hold = constant_decider(static_cast<std::size_t>(coast - cfg.actions.begin()));
  const BeliefNetwork network = load_network(cfg);
  Rng rng(seed);
  for (std::uint32_t i = 0; i < episodes; ++i) {
    const EpisodeDraw draw = draw_training_episode(cfg, rng);
    const auto target = make_target_policy(draw.scenario.target_policy, cfg);
    const Trace trace = run_episode(cfg, draw.scenario, network, hold, *target);
    write_corpus_episode(
      dir, fmt::format("episode_{:04d}", i), trace, draw.malicious, build_scene(draw.scenario), cfg.payoff.v_max);
  }
}

}  // namespace junction
