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

#include "junction/config.hpp"
#include "junction/error.hpp"
#include "junction/game.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace junction
{
namespace
{

using Table = std::vector<std::vector<double>>;

GameMatrix make_game(const Table & u_row, const Table & u_col)
{
  std::vector<double> rows(u_row.size());
  std::vector<double> cols(u_row[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i] = static_cast<double>(i);
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    cols[j] = static_cast<double>(j);
  }
  GameMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      m.set(i, j, u_row[i][j], u_col[i][j]);
    }
  }
  return m;
}

std::vector<std::pair<std::size_t, std::size_t>> as_pairs(const std::vector<JointAction> & eq)
{
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const JointAction & ja : eq) {
    out.emplace_back(ja.ego, ja.target);
  }
  return out;
}

Table random_table(std::mt19937_64 & rng, std::size_t n)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Table t(n, std::vector<double>(n));
  for (auto & row : t) {
    for (double & x : row) {
      x = u(rng);
    }
  }
  return t;
}

TEST(Nash, PrisonersDilemma)
{
  // Action 0 cooperates, 1 defects; T=5 > R=3 > P=1 > S=0.
  const Table row{{3, 0}, {5, 1}};
  const Table col{{3, 5}, {0, 1}};
  const auto eq = find_pure_nash(make_game(row, col));
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_EQ(eq[0], (JointAction{1, 1}));
}

TEST(Nash, MatchingPenniesHasNoPureEquilibrium)
{
  const Table row{{1, -1}, {-1, 1}};
  const Table col{{-1, 1}, {1, -1}};
  const GameMatrix m = make_game(row, col);
  EXPECT_TRUE(find_pure_nash(m).empty());
  const NashResult r = nearest_nash(m, {}, 0.0, 0.0);
  EXPECT_TRUE(r.fallback);
}

TEST(Nash, FallbackPicksWelfareMaximum)
{
  const Table row{{1, 0}, {0, 2}};
  const Table col{{0, 3}, {1, 0}};
  const GameMatrix m = make_game(row, col);
  ASSERT_TRUE(find_pure_nash(m).empty());
  const NashResult r = nearest_nash(m, {}, 0.0, 0.0);
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(r.nearest, (JointAction{0, 1}));
}

TEST(Nash, NearestDistanceExample)
{
  GameMatrix m({-2.0, 0.0}, {0.0, 1.0});
  const NashResult r = nearest_nash(m, {JointAction{1, 0}}, -2.0, 1.0);
  EXPECT_FALSE(r.fallback);
  EXPECT_NEAR(r.distance, std::sqrt(5.0), 1e-15);
}

TEST(Nash, NearestTieBreaksTowardsLowIndices)
{
  GameMatrix m({-1.0, 0.0, 1.0}, {0.0});
  const NashResult r = nearest_nash(m, {JointAction{2, 0}, JointAction{0, 0}}, 0.0, 0.0);
  EXPECT_EQ(r.nearest, (JointAction{0, 0}));
  EXPECT_DOUBLE_EQ(r.distance, 1.0);
}

TEST(Nash, MatchesBruteForceOnRandomGames)
{
  std::mt19937_64 rng(21);
  for (int g = 0; g < 1000; ++g) {
    const Table row = random_table(rng, 5);
    const Table col = random_table(rng, 5);
    EXPECT_EQ(as_pairs(find_pure_nash(make_game(row, col))), oracle::brute_force_nash(row, col)) << "game " << g;
  }
}

TEST(Nash, MatchesBruteForceWithTies)
{
  // Payoffs on a coarse grid produce many best-response ties.
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> level(0, 2);
  for (int g = 0; g < 500; ++g) {
    Table row(4, std::vector<double>(3));
    Table col(4, std::vector<double>(3));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        row[i][j] = level(rng);
        col[i][j] = level(rng);
      }
    }
    EXPECT_EQ(as_pairs(find_pure_nash(make_game(row, col))), oracle::brute_force_nash(row, col));
  }
}

TEST(Nash, ScaleInvariance)
{
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int g = 0; g < 500; ++g) {
    Table row = random_table(rng, 5);
    const Table col = random_table(rng, 5);
    const auto before = find_pure_nash(make_game(row, col));
    const double c = scale(rng);
    for (auto & r : row) {
      for (double & x : r) {
        x *= c;
      }
    }
    EXPECT_EQ(find_pure_nash(make_game(row, col)), before);
  }
}

TEST(Nash, PlayerSwapTransposes)
{
  std::mt19937_64 rng(24);
  for (int g = 0; g < 500; ++g) {
    const Table row = random_table(rng, 5);
    const Table col = random_table(rng, 5);
    Table row_t(5, std::vector<double>(5));
    Table col_t(5, std::vector<double>(5));
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        row_t[j][i] = col[i][j];
        col_t[j][i] = row[i][j];
      }
    }
    auto expected = as_pairs(find_pure_nash(make_game(row, col)));
    for (auto & [i, j] : expected) {
      std::swap(i, j);
    }
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(as_pairs(find_pure_nash(make_game(row_t, col_t))), expected);
  }
}

TEST(GameReward, Examples)
{
  EXPECT_DOUBLE_EQ(game_reward(0.0, 1.0), 1.0);
  EXPECT_NEAR(game_reward(std::log(3.0), 1.0), 0.5, 1e-15);
  EXPECT_LT(game_reward(1000.0, 1.0), 1e-300);
}

TEST(GameReward, RangeAndMonotonicity)
{
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> d(0.0, 30.0);
  std::uniform_real_distribution<double> delta(0.05, 3.0);
  for (int i = 0; i < 10000; ++i) {
    const double k = delta(rng);
    const double d1 = d(rng);
    const double d2 = d1 + 1e-3 + d(rng);
    const double r1 = game_reward(d1, k);
    EXPECT_GT(r1, 0.0);
    EXPECT_LE(r1, 1.0);
    EXPECT_GT(r1, game_reward(d2, k));
  }
}

TEST(GameMatrix, RejectsNonFinitePayoffs)
{
  GameMatrix m({0.0}, {0.0});
  EXPECT_THROW(m.set(0, 0, std::nan(""), 0.0), Error);
  EXPECT_THROW(GameMatrix({}, {0.0}), Error);
}

TEST(GameMatrix, InactiveTargetCollapsesToOneColumn)
{
  Config cfg;
  cfg.scenario.target_policy = TargetPolicyKind::kNone;
  const Scene scene = build_scene(cfg.scenario);
  const JointState s = initial_state(cfg.scenario, scene);
  const GameMatrix m = build_matrix(scene, s, cfg.payoff, WeightScheme{}, cfg.actions, cfg.actions);
  EXPECT_EQ(m.cols(), 1u);
  EXPECT_EQ(m.rows(), cfg.actions.size());
  EXPECT_FALSE(find_pure_nash(m).empty());
}

}  // namespace
}  // namespace junction
