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

#ifndef JUNCTION__QLEARN_HPP_
#define JUNCTION__QLEARN_HPP_

#include "junction/scene.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace junction
{

using Rng = std::mt19937_64;

/// Bin edges of the tabular state. A value v falls in the bin counting the edges <= v.
struct BinEdges
{
  std::vector<double> distance{5.0, 15.0, 30.0, 60.0};  // [m] to the conflict point
  std::vector<double> speed{2.0, 6.0, 10.0, 13.0};      // [m/s]
  std::vector<double> ttc{1.0, 2.0, 4.0, 8.0};          // [s]

  friend bool operator==(const BinEdges &, const BinEdges &) = default;
  void validate() const;
};

struct DiscreteStateKey
{
  std::uint32_t ego_dist{0};
  std::uint32_t target_dist{0};
  std::uint32_t ego_speed{0};
  std::uint32_t target_speed{0};
  std::uint32_t ttc{0};

  friend bool operator==(const DiscreteStateKey &, const DiscreteStateKey &) = default;

  /// Mixed-radix index, unique for the given edges.
  [[nodiscard]] std::uint64_t encode(const BinEdges & edges) const;
  static DiscreteStateKey decode(std::uint64_t code, const BinEdges & edges);
};

/// Number of distance bins including the exited/absent sentinel (the last one).
std::uint32_t distance_bin_count(const BinEdges & edges);
std::uint32_t bin_index(double value, std::span<const double> edges);

/// Deterministic binning; exited or absent vehicles use the sentinel distance bin and
/// +infinity TTC lands in the top TTC bin.
DiscreteStateKey discretize(const JointState & s, const Scene & scene, const BinEdges & edges);

struct LearnerParams
{
  double alpha{0.1};
  double gamma{0.95};
  double epsilon_start{1.0};
  double epsilon_decay{0.99};
  double epsilon_floor{0.05};
  double w1{0.5};  // ToM reward weight
  double w2{0.5};  // game reward weight
  std::uint32_t episodes{500};

  void validate() const;
};

/// Sparse table of action values; unseen states read as zeros.
class QTable
{
public:
  QTable() = default;
  QTable(std::vector<double> actions, BinEdges edges);

  [[nodiscard]] std::size_t action_count() const { return actions_.size(); }
  [[nodiscard]] const std::vector<double> & actions() const { return actions_; }
  [[nodiscard]] const BinEdges & edges() const { return edges_; }
  [[nodiscard]] std::size_t state_count() const { return rows_.size(); }

  [[nodiscard]] double value(std::uint64_t key, std::size_t action) const;
  [[nodiscard]] std::vector<double> row(std::uint64_t key) const;
  [[nodiscard]] double max_value(std::uint64_t key) const;
  [[nodiscard]] std::uint32_t visits(std::uint64_t key, std::size_t action) const;
  void set(std::uint64_t key, std::size_t action, double value);
  void visit(std::uint64_t key, std::size_t action);

  /// Visits every populated (key, q row).
  template <typename F>
  void for_each(F && f) const
  {
    for (const auto & [key, row] : rows_) {
      f(key, row.q);
    }
  }

  /// Throws Error(kMetadataMismatch) when bins or actions differ from the expected ones.
  void check_compatible(const BinEdges & edges, std::span<const double> actions) const;

  [[nodiscard]] std::string to_json() const;
  static QTable from_json(const std::string & text);

  friend bool operator==(const QTable & a, const QTable & b);

private:
  struct Row
  {
    std::vector<double> q;
    std::vector<std::uint32_t> visits;
    friend bool operator==(const Row &, const Row &) = default;
  };
  Row & mutable_row(std::uint64_t key);

  std::vector<double> actions_;
  BinEdges edges_;
  std::map<std::uint64_t, Row> rows_;
};

/// W1 * R_ToM + W2 * R_Game.
double total_reward(double r_tom, double r_game, double w1, double w2);

/// Q(s,a) += alpha [R + gamma max_a' Q(s',a') - Q(s,a)]; a terminal successor contributes 0.
/// Throws Error(kInvalidArgument) on a non-finite reward, leaving the table untouched.
void q_update(
  QTable & q, std::uint64_t key, std::size_t action, double reward, std::optional<std::uint64_t> next_key,
  const LearnerParams & p);

/// Greedy index of `scores`; ties go to the smallest |action|, then to the braking side.
std::size_t greedy_index(std::span<const double> scores, std::span<const double> actions);

/// epsilon-greedy over arbitrary scores: u ~ U(0,1); u > epsilon exploits, otherwise uniform.
std::size_t select_action(
  std::span<const double> scores, std::span<const double> actions, double epsilon, Rng & rng);
/// epsilon-greedy over the Q row of `key`.
std::size_t select_action(const QTable & q, std::uint64_t key, double epsilon, Rng & rng);

/// Episodic environment driven by the learner.
class Environment
{
public:
  struct Step
  {
    double reward{0.0};
    std::uint64_t next_key{0};
    bool terminal{false};  // no bootstrap from next_key
    bool done{false};      // episode over (terminal or truncated)
  };

  virtual ~Environment() = default;
  [[nodiscard]] virtual std::vector<double> actions() const = 0;
  [[nodiscard]] virtual BinEdges edges() const { return {}; }
  virtual std::uint64_t reset(Rng & rng) = 0;
  virtual Step step(std::size_t action, Rng & rng) = 0;
  /// Scores maximised by the greedy branch. Defaults to the Q row of `key`.
  virtual std::vector<double> greedy_scores(const QTable & q, std::uint64_t key, const LearnerParams & p);
};

struct TrainingResult
{
  QTable table;
  std::vector<double> curve;     // mean step reward per episode
  std::vector<double> epsilons;  // exploration rate used in each episode
};

/// Tabular Q-learning with per-episode multiplicative epsilon decay.
TrainingResult train(Environment & env, const LearnerParams & p, std::uint64_t seed);
/// Continues from `initial` (fine-tuning); the table metadata must match the environment.
TrainingResult train(Environment & env, const LearnerParams & p, std::uint64_t seed, QTable initial);

}  // namespace junction

#endif  // JUNCTION__QLEARN_HPP_
