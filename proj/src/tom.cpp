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

#include "junction/tom.hpp"

#include "junction/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace junction
{
namespace
{

constexpr double kRowTolerance = 1e-9;

// Table over a sorted set of variables; the last variable varies fastest.
struct Factor
{
  std::vector<std::size_t> vars;
  std::vector<std::size_t> cards;
  std::vector<double> values;

  [[nodiscard]] std::size_t position(std::size_t var) const
  {
    return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), var) - vars.begin());
  }
  [[nodiscard]] bool contains(std::size_t var) const { return position(var) < vars.size(); }
};

std::size_t product(const std::vector<std::size_t> & cards)
{
  return std::accumulate(cards.begin(), cards.end(), std::size_t{1}, std::multiplies<>());
}

// Advances a mixed-radix counter; returns false after the last assignment.
bool increment(std::vector<std::size_t> & assign, const std::vector<std::size_t> & cards)
{
  for (std::size_t i = assign.size(); i-- > 0;) {
    if (++assign[i] < cards[i]) {
      return true;
    }
    assign[i] = 0;
  }
  return false;
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t> & cards)
{
  std::vector<std::size_t> strides(cards.size(), 1);
  for (std::size_t i = cards.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * cards[i];
  }
  return strides;
}

Factor node_factor(const BeliefNetwork & bn, std::size_t node)
{
  const auto & n = bn.nodes()[node];
  Factor f;
  f.vars = n.parents;
  f.vars.push_back(node);
  std::sort(f.vars.begin(), f.vars.end());
  for (std::size_t v : f.vars) {
    f.cards.push_back(bn.cardinality(v));
  }
  f.values.resize(product(f.cards));
  std::vector<std::size_t> assign(f.vars.size(), 0);
  std::size_t idx = 0;
  do {
    std::size_t row = 0;
    for (std::size_t p : n.parents) {
      row = row * bn.cardinality(p) + assign[f.position(p)];
    }
    f.values[idx++] = n.cpt[row * n.states.size() + assign[f.position(node)]];
  } while (increment(assign, f.cards));
  return f;
}

Factor reduce(const Factor & f, std::size_t var, std::size_t value)
{
  const std::size_t pos = f.position(var);
  Factor out;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (i != pos) {
      out.vars.push_back(f.vars[i]);
      out.cards.push_back(f.cards[i]);
    }
  }
  out.values.reserve(product(out.cards));
  std::vector<std::size_t> assign(f.vars.size(), 0);
  std::size_t idx = 0;
  do {
    if (assign[pos] == value) {
      out.values.push_back(f.values[idx]);
    }
    ++idx;
  } while (increment(assign, f.cards));
  return out;
}

Factor multiply(const Factor & a, const Factor & b)
{
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(out.vars));
  std::vector<std::size_t> a_stride(out.vars.size(), 0);
  std::vector<std::size_t> b_stride(out.vars.size(), 0);
  const auto sa = strides_of(a.cards);
  const auto sb = strides_of(b.cards);
  for (std::size_t i = 0; i < out.vars.size(); ++i) {
    const std::size_t v = out.vars[i];
    if (a.contains(v)) {
      out.cards.push_back(a.cards[a.position(v)]);
      a_stride[i] = sa[a.position(v)];
    } else {
      out.cards.push_back(b.cards[b.position(v)]);
    }
    if (b.contains(v)) {
      b_stride[i] = sb[b.position(v)];
    }
  }
  out.values.resize(product(out.cards));
  std::vector<std::size_t> assign(out.vars.size(), 0);
  std::size_t idx = 0;
  do {
    std::size_t ia = 0;
    std::size_t ib = 0;
    for (std::size_t i = 0; i < assign.size(); ++i) {
      ia += assign[i] * a_stride[i];
      ib += assign[i] * b_stride[i];
    }
    out.values[idx++] = a.values[ia] * b.values[ib];
  } while (increment(assign, out.cards));
  return out;
}

Factor sum_out(const Factor & f, std::size_t var)
{
  const std::size_t pos = f.position(var);
  Factor out;
  for (std::size_t i = 0; i < f.vars.size(); ++i) {
    if (i != pos) {
      out.vars.push_back(f.vars[i]);
      out.cards.push_back(f.cards[i]);
    }
  }
  out.values.assign(product(out.cards), 0.0);
  const auto so = strides_of(out.cards);
  std::vector<std::size_t> assign(f.vars.size(), 0);
  std::size_t idx = 0;
  do {
    std::size_t io = 0;
    for (std::size_t i = 0, k = 0; i < assign.size(); ++i) {
      if (i != pos) {
        io += assign[i] * so[k++];
      }
    }
    out.values[io] += f.values[idx++];
  } while (increment(assign, f.cards));
  return out;
}

std::string_view yes_no(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::size_t BeliefNetwork::add_node(
  std::string name, std::vector<std::string> states, std::vector<std::size_t> parents, std::vector<double> cpt)
{
  nodes_.push_back({std::move(name), std::move(states), std::move(parents), std::move(cpt)});
  return nodes_.size() - 1;
}

std::size_t BeliefNetwork::row_count(std::size_t node) const
{
  std::size_t rows = 1;
  for (std::size_t p : nodes_[node].parents) {
    rows *= cardinality(p);
  }
  return rows;
}

std::optional<std::size_t> BeliefNetwork::find(const std::string & name) const
{
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].name == name) {
      return i;
    }
  }
  return std::nullopt;
}

std::size_t BeliefNetwork::index_of(const std::string & name) const
{
  const auto idx = find(name);
  if (!idx) {
    throw Error(ErrorCode::kInvalidArgument, "belief network has no node '" + name + "'");
  }
  return *idx;
}

std::size_t BeliefNetwork::state_index(std::size_t node, const std::string & state) const
{
  const auto & states = nodes_.at(node).states;
  const auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) {
    throw Error(ErrorCode::kInvalidArgument, "node '" + nodes_[node].name + "' has no state '" + state + "'");
  }
  return static_cast<std::size_t>(it - states.begin());
}

void BeliefNetwork::validate() const
{
  auto fail = [](const std::string & msg) { throw Error(ErrorCode::kInvalidArgument, msg); };
  std::set<std::string> names;
  for (const auto & n : nodes_) {
    if (!names.insert(n.name).second) {
      fail("duplicate node '" + n.name + "'");
    }
    if (n.states.empty()) {
      fail("node '" + n.name + "' has an empty domain");
    }
    for (std::size_t p : n.parents) {
      if (p >= nodes_.size()) {
        fail("node '" + n.name + "' has an out-of-range parent");
      }
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto & n = nodes_[i];
    const std::size_t card = n.states.size();
    if (n.cpt.size() != row_count(i) * card) {
      fail("node '" + n.name + "' CPT does not cover its parents and domain");
    }
    for (std::size_t r = 0; r < row_count(i); ++r) {
      double sum = 0.0;
      for (std::size_t k = 0; k < card; ++k) {
        const double v = n.cpt[r * card + k];
        if (!(v >= 0.0) || !std::isfinite(v)) {
          fail("node '" + n.name + "' CPT holds a negative or non-finite entry");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > kRowTolerance) {
        fail(fmt::format("node '{}' CPT row {} sums to {}", n.name, r, sum));
      }
    }
  }
  // Kahn's algorithm: every node must be removable.
  std::vector<std::size_t> indegree(nodes_.size(), 0);
  for (const auto & n : nodes_) {
    indegree[&n - nodes_.data()] = n.parents.size();
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (indegree[i] == 0) {
      ready.push_back(i);
    }
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    ++removed;
    for (std::size_t c = 0; c < nodes_.size(); ++c) {
      for (std::size_t p : nodes_[c].parents) {
        if (p == v && --indegree[c] == 0) {
          ready.push_back(c);
        }
      }
    }
  }
  if (removed != nodes_.size()) {
    fail("belief network contains a cycle");
  }
}

std::vector<double> variable_elimination(const BeliefNetwork & bn, std::size_t query, const Evidence & evidence)
{
  if (query >= bn.size()) {
    throw Error(ErrorCode::kInvalidArgument, "query node out of range");
  }
  if (evidence.count(query) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "query node is part of the evidence");
  }
  for (const auto & [node, value] : evidence) {
    if (node >= bn.size() || value >= bn.cardinality(node)) {
      throw Error(ErrorCode::kInvalidArgument, "evidence outside the network domain");
    }
  }

  std::vector<Factor> factors;
  factors.reserve(bn.size());
  for (std::size_t i = 0; i < bn.size(); ++i) {
    Factor f = node_factor(bn, i);
    for (const auto & [node, value] : evidence) {
      if (f.contains(node)) {
        f = reduce(f, node, value);
      }
    }
    factors.push_back(std::move(f));
  }

  std::set<std::size_t> hidden;
  for (std::size_t i = 0; i < bn.size(); ++i) {
    if (i != query && evidence.count(i) == 0) {
      hidden.insert(i);
    }
  }
  while (!hidden.empty()) {
    // Greedy order: eliminate the variable whose combined factor is smallest.
    std::size_t best_var = *hidden.begin();
    std::size_t best_size = std::numeric_limits<std::size_t>::max();
    for (std::size_t v : hidden) {
      std::set<std::size_t> scope;
      for (const auto & f : factors) {
        if (f.contains(v)) {
          scope.insert(f.vars.begin(), f.vars.end());
        }
      }
      std::size_t size = 1;
      for (std::size_t u : scope) {
        size *= bn.cardinality(u);
      }
      if (size < best_size) {
        best_size = size;
        best_var = v;
      }
    }
    std::vector<Factor> rest;
    std::optional<Factor> joined;
    for (auto & f : factors) {
      if (f.contains(best_var)) {
        joined = joined ? multiply(*joined, f) : std::move(f);
      } else {
        rest.push_back(std::move(f));
      }
    }
    if (joined) {
      rest.push_back(sum_out(*joined, best_var));
    }
    factors = std::move(rest);
    hidden.erase(best_var);
  }

  Factor result{{query}, {bn.cardinality(query)}, std::vector<double>(bn.cardinality(query), 1.0)};
  for (const auto & f : factors) {
    result = multiply(result, f);
  }
  const double total = std::accumulate(result.values.begin(), result.values.end(), 0.0);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInconsistentEvidence, "evidence has zero probability under the network");
  }
  for (double & v : result.values) {
    v /= total;
  }
  return result.values;
}

SpeedBin speed_bin(double speed, double v_max, const ObservationThresholds & th)
{
  if (speed > v_max) {
    return SpeedBin::kOverLimit;
  }
  return speed > th.near_fraction * v_max ? SpeedBin::kNearLimit : SpeedBin::kUnderLimit;
}

AccelBin accel_bin(double accel, const ObservationThresholds & th)
{
  if (accel < th.braking) {
    return AccelBin::kBraking;
  }
  return accel > th.accelerating ? AccelBin::kAccelerating : AccelBin::kCoasting;
}

Observation ObservationTracker::observe(double speed, double accel, double conflict_distance, bool approaching)
{
  if (approaching && conflict_distance <= th_.yield_window) {
    accel_sum_ += accel;
    ++accel_count_;
  }
  Observation obs;
  obs.speed = speed_bin(speed, v_max_, th_);
  obs.accel = accel_bin(accel, th_);
  if (accel_count_ > 0) {
    obs.yielding = accel_sum_ / static_cast<double>(accel_count_) >= 0.0 ? YieldBin::kNoYield : YieldBin::kYields;
  }
  return obs;
}

BeliefNetwork default_malice_network()
{
  BeliefNetwork bn;
  const std::size_t m = bn.add_node(kMaliceNode, {"benign", "malicious"}, {}, {0.7, 0.3});
  bn.add_node(kSpeedNode, {"under_limit", "near_limit", "over_limit"}, {m}, {0.45, 0.45, 0.1, 0.15, 0.15, 0.7});
  bn.add_node(kAccelNode, {"braking", "coasting", "accelerating"}, {m}, {0.4, 0.4, 0.2, 0.25, 0.25, 0.5});
  bn.add_node(kYieldNode, {"yields", "no_yield"}, {m}, {0.85, 0.15, 0.2, 0.8});
  bn.validate();
  return bn;
}

double infer_malice(const BeliefNetwork & bn, const Observation & obs)
{
  Evidence ev;
  ev[bn.index_of(kSpeedNode)] = static_cast<std::size_t>(obs.speed);
  ev[bn.index_of(kAccelNode)] = static_cast<std::size_t>(obs.accel);
  if (obs.yielding) {
    ev[bn.index_of(kYieldNode)] = static_cast<std::size_t>(*obs.yielding);
  }
  const std::size_t m = bn.index_of(kMaliceNode);
  return variable_elimination(bn, m, ev)[bn.state_index(m, "malicious")];
}

double tom_reward(double a_cand, double p_malice, double epsilon_mod)
{
  return 1.0 / (1.0 + std::exp(epsilon_mod * a_cand * p_malice));
}

BeliefNetwork fit_cpts(std::span<const LabeledEpisode> corpus)
{
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot fit the malice network on an empty corpus");
  }
  // counts[label][bin]
  double label_count[2] = {0, 0};
  double speed[2][3] = {};
  double accel[2][3] = {};
  double yielding[2][2] = {};
  for (const auto & ep : corpus) {
    const int m = ep.malicious ? 1 : 0;
    label_count[m] += 1.0;
    for (const auto & obs : ep.observations) {
      speed[m][static_cast<int>(obs.speed)] += 1.0;
      accel[m][static_cast<int>(obs.accel)] += 1.0;
      if (obs.yielding) {
        yielding[m][static_cast<int>(*obs.yielding)] += 1.0;
      }
    }
  }
  auto smoothed = [](const double * counts, int n) {
    const double total = std::accumulate(counts, counts + n, 0.0) + n;
    std::vector<double> row;
    for (int i = 0; i < n; ++i) {
      row.push_back((counts[i] + 1.0) / total);
    }
    return row;
  };
  auto two_rows = [&](const double (&c)[2][3]) {
    auto row = smoothed(c[0], 3);
    const auto mal = smoothed(c[1], 3);
    row.insert(row.end(), mal.begin(), mal.end());
    return row;
  };
  auto yield_rows = smoothed(yielding[0], 2);
  const auto yield_mal = smoothed(yielding[1], 2);
  yield_rows.insert(yield_rows.end(), yield_mal.begin(), yield_mal.end());

  BeliefNetwork bn;
  const std::size_t m = bn.add_node(kMaliceNode, {"benign", "malicious"}, {}, smoothed(label_count, 2));
  bn.add_node(kSpeedNode, {"under_limit", "near_limit", "over_limit"}, {m}, two_rows(speed));
  bn.add_node(kAccelNode, {"braking", "coasting", "accelerating"}, {m}, two_rows(accel));
  bn.add_node(kYieldNode, {"yields", "no_yield"}, {m}, std::move(yield_rows));
  bn.validate();
  return bn;
}

std::string network_to_json(const BeliefNetwork & bn)
{
  nlohmann::ordered_json doc;
  doc["format"] = "junction-belief-network";
  doc["version"] = 1;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < bn.size(); ++i) {
    const auto & n = bn.nodes()[i];
    nlohmann::ordered_json node;
    node["name"] = n.name;
    node["states"] = n.states;
    std::vector<std::string> parents;
    for (std::size_t p : n.parents) {
      parents.push_back(bn.nodes()[p].name);
    }
    node["parents"] = parents;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < bn.row_count(i); ++r) {
      rows.push_back(std::vector<double>(
        n.cpt.begin() + static_cast<std::ptrdiff_t>(r * n.states.size()),
        n.cpt.begin() + static_cast<std::ptrdiff_t>((r + 1) * n.states.size())));
    }
    node["cpt"] = rows;
    doc["nodes"].push_back(node);
  }
  return doc.dump(2) + "\n";
}

BeliefNetwork network_from_json(const std::string & text)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kIo, std::string("belief network file: ") + e.what());
  }
  try {
    if (doc.at("format") != "junction-belief-network" || doc.at("version") != 1) {
      throw Error(ErrorCode::kIo, "belief network file: unsupported format or version");
    }
    const auto & nodes = doc.at("nodes");
    std::vector<std::string> names;
    for (const auto & n : nodes) {
      names.push_back(n.at("name").get<std::string>());
    }
    BeliefNetwork bn;
    for (const auto & n : nodes) {
      std::vector<std::size_t> parents;
      for (const auto & p : n.at("parents")) {
        const auto it = std::find(names.begin(), names.end(), p.get<std::string>());
        if (it == names.end()) {
          throw Error(ErrorCode::kIo, "belief network file: unknown parent " + p.get<std::string>());
        }
        parents.push_back(static_cast<std::size_t>(it - names.begin()));
      }
      std::vector<double> cpt;
      for (const auto & row : n.at("cpt")) {
        for (const auto & v : row) {
          cpt.push_back(v.get<double>());
        }
      }
      bn.add_node(n.at("name").get<std::string>(), n.at("states").get<std::vector<std::string>>(),
                  std::move(parents), std::move(cpt));
    }
    bn.validate();
    return bn;
  } catch (const nlohmann::json::exception & e) {
    throw Error(ErrorCode::kIo, std::string("belief network file: ") + e.what());
  }
}

std::string network_summary(const BeliefNetwork & bn)
{
  std::string out;
  for (std::size_t i = 0; i < bn.size(); ++i) {
    const auto & n = bn.nodes()[i];
    out += fmt::format("{} ({} states, root: {})\n", n.name, n.states.size(), yes_no(n.parents.empty()));
    for (std::size_t r = 0; r < bn.row_count(i); ++r) {
      std::string label;
      std::size_t rem = r;
      for (std::size_t k = n.parents.size(); k-- > 0;) {
        const std::size_t p = n.parents[k];
        const std::size_t v = rem % bn.cardinality(p);
        rem /= bn.cardinality(p);
        label = bn.nodes()[p].name + "=" + bn.nodes()[p].states[v] + (label.empty() ? "" : ", ") + label;
      }
      out += fmt::format("  [{}]", label.empty() ? "prior" : label);
      for (std::size_t k = 0; k < n.states.size(); ++k) {
        out += fmt::format(" {}={:.4f}", n.states[k], n.cpt[r * n.states.size() + k]);
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace junction
