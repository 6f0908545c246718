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

#ifndef JUNCTION__TOM_HPP_
#define JUNCTION__TOM_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace junction
{

/// Discrete Bayesian network. CPT rows are indexed by the parents' joint value in mixed radix
/// (first parent most significant); each row holds one probability per state of the node.
class BeliefNetwork
{
public:
  struct Node
  {
    std::string name;
    std::vector<std::string> states;
    std::vector<std::size_t> parents;
    std::vector<double> cpt;
  };

  /// Appends a node; parents may refer to nodes added later, validate() checks the whole graph.
  std::size_t add_node(
    std::string name, std::vector<std::string> states, std::vector<std::size_t> parents,
    std::vector<double> cpt);

  /// Throws Error(kInvalidArgument) on cycles, bad indices, wrong CPT sizes, or rows not summing to 1.
  void validate() const;

  [[nodiscard]] const std::vector<Node> & nodes() const { return nodes_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] std::size_t cardinality(std::size_t node) const { return nodes_[node].states.size(); }
  [[nodiscard]] std::size_t row_count(std::size_t node) const;
  [[nodiscard]] std::optional<std::size_t> find(const std::string & name) const;
  [[nodiscard]] std::size_t index_of(const std::string & name) const;
  [[nodiscard]] std::size_t state_index(std::size_t node, const std::string & state) const;

private:
  std::vector<Node> nodes_;
};

/// node index -> observed state index
using Evidence = std::map<std::size_t, std::size_t>;

/// Exact posterior P(query | evidence) by variable elimination.
/// Throws Error(kInconsistentEvidence) when the evidence has probability zero.
std::vector<double> variable_elimination(const BeliefNetwork & bn, std::size_t query, const Evidence & evidence);

enum class SpeedBin { kUnderLimit = 0, kNearLimit = 1, kOverLimit = 2 };
enum class AccelBin { kBraking = 0, kCoasting = 1, kAccelerating = 2 };
enum class YieldBin { kYields = 0, kNoYield = 1 };

/// Discretised view of the target's behaviour. `yielding` is unknown until the target has been
/// observed inside the approach window.
struct Observation
{
  SpeedBin speed{SpeedBin::kUnderLimit};
  AccelBin accel{AccelBin::kCoasting};
  std::optional<YieldBin> yielding;
};

struct ObservationThresholds
{
  double near_fraction{0.9};   // near_limit above near_fraction * v_max
  double braking{-0.5};        // [m/s^2]
  double accelerating{0.5};    // [m/s^2]
  double yield_window{30.0};   // [m] distance to the conflict point
};

SpeedBin speed_bin(double speed, double v_max, const ObservationThresholds & th = {});
AccelBin accel_bin(double accel, const ObservationThresholds & th = {});

/// Builds observations step by step from the target's speed, acceleration and approach.
class ObservationTracker
{
public:
  explicit ObservationTracker(double v_max, ObservationThresholds th = {}) : v_max_(v_max), th_(th) {}

  /// `conflict_distance` is the straight-line distance to the conflict point; `approaching` is
  /// false once the target has passed it.
  Observation observe(double speed, double accel, double conflict_distance, bool approaching);

private:
  double v_max_;
  ObservationThresholds th_;
  double accel_sum_{0.0};
  std::size_t accel_count_{0};
};

/// Node names of the malice network.
inline constexpr const char * kMaliceNode = "malicious";
inline constexpr const char * kSpeedNode = "speed";
inline constexpr const char * kAccelNode = "accel";
inline constexpr const char * kYieldNode = "yielding";

/// Naive-Bayes star malicious -> {speed, accel, yielding} with placeholder CPTs.
BeliefNetwork default_malice_network();

/// P(malicious | obs) on a network with the malice-network node names.
double infer_malice(const BeliefNetwork & bn, const Observation & obs);

/// sigma(-epsilon_mod * a_cand * p_malice): hard acceleration against a likely malicious target
/// is punished, braking rewarded.
double tom_reward(double a_cand, double p_malice, double epsilon_mod);

struct LabeledEpisode
{
  bool malicious{false};
  std::vector<Observation> observations;
};

/// Laplace-smoothed (+1) CPTs: the prior counts episodes, the observation CPTs count steps.
/// Throws Error(kEmptyCorpus) on an empty corpus.
BeliefNetwork fit_cpts(std::span<const LabeledEpisode> corpus);

std::string network_to_json(const BeliefNetwork & bn);
BeliefNetwork network_from_json(const std::string & text);
/// Human-readable CPT listing.
std::string network_summary(const BeliefNetwork & bn);

}  // namespace junction

#endif  // JUNCTION__TOM_HPP_
