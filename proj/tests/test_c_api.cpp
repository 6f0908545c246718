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

// Exercises the shared library through its C header only.
#include "junction/junction.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace
{

std::filesystem::path scratch(const std::string & name)
{
  const auto dir = std::filesystem::temp_directory_path() / "junction_c_api_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

TEST(CApi, VersionAndStatusNames)
{
  EXPECT_EQ(jn_abi_version(), JN_ABI_VERSION);
  EXPECT_STRNE(jn_version(), "");
  EXPECT_STREQ(jn_status_name(JN_OK), "ok");
  EXPECT_STRNE(jn_status_name(JN_METADATA_MISMATCH), jn_status_name(JN_CONFIG_ERROR));
}

TEST(CApi, RejectsNullArguments)
{
  EXPECT_EQ(jn_config_load(nullptr, nullptr), JN_INVALID_ARGUMENT);
  EXPECT_STRNE(jn_last_error(), "");
  EXPECT_EQ(jn_config_set_episodes(nullptr, 3), JN_INVALID_ARGUMENT);
  EXPECT_EQ(jn_trace_metrics(nullptr, nullptr), JN_INVALID_ARGUMENT);
  jn_config_free(nullptr);
  jn_qtable_free(nullptr);
  jn_network_free(nullptr);
  jn_trace_free(nullptr);
  jn_curve_free(nullptr);
}

TEST(CApi, ErrorCodes)
{
  jn_config * cfg = nullptr;
  EXPECT_EQ(jn_config_for_case("Z", nullptr, &cfg), JN_UNKNOWN_CASE);
  EXPECT_EQ(cfg, nullptr);

  const auto bad = scratch("bad.yaml");
  std::ofstream(bad) << "payoff:\n  k2: -3\n";
  EXPECT_EQ(jn_config_load(bad.c_str(), &cfg), JN_CONFIG_ERROR);
  EXPECT_NE(std::string(jn_last_error()).find(":2:"), std::string::npos) << jn_last_error();

  EXPECT_EQ(jn_config_load("/nonexistent/x.yaml", &cfg), JN_IO_ERROR);

  jn_network * net = nullptr;
  const auto empty = scratch("empty_corpus");
  std::filesystem::create_directories(empty);
  EXPECT_EQ(jn_network_fit_corpus(empty.c_str(), &net), JN_EMPTY_CORPUS);
}

TEST(CApi, TrainEvaluateRoundTrip)
{
  jn_config * cfg = nullptr;
  ASSERT_EQ(jn_config_for_case("C", nullptr, &cfg), JN_OK) << jn_last_error();
  ASSERT_EQ(jn_config_set_episodes(cfg, 20), JN_OK);

  jn_network * net = nullptr;
  ASSERT_EQ(jn_network_default(&net), JN_OK);
  double p = 0.0;
  ASSERT_EQ(jn_network_infer(net, 2, 2, 1, &p), JN_OK);
  EXPECT_GT(p, 0.3);
  EXPECT_EQ(jn_network_infer(net, 5, 0, 0, &p), JN_INVALID_ARGUMENT);
  EXPECT_NE(std::string(jn_network_summary(net)).find("malicious"), std::string::npos);

  jn_qtable * table = nullptr;
  jn_curve * curve = nullptr;
  ASSERT_EQ(jn_train(cfg, net, nullptr, 11, &table, &curve), JN_OK) << jn_last_error();
  EXPECT_EQ(jn_curve_size(curve), 20u);
  EXPECT_GT(jn_qtable_state_count(table), 0u);
  EXPECT_TRUE(std::isfinite(jn_curve_value(curve, 0)));
  EXPECT_DOUBLE_EQ(jn_curve_epsilon(curve, 0), 1.0);

  const auto table_path = scratch("table.json");
  ASSERT_EQ(jn_qtable_save(table, table_path.c_str()), JN_OK);
  jn_qtable * loaded = nullptr;
  ASSERT_EQ(jn_qtable_load(table_path.c_str(), &loaded), JN_OK);
  EXPECT_EQ(jn_qtable_state_count(loaded), jn_qtable_state_count(table));
  EXPECT_EQ(jn_qtable_check(loaded, cfg), JN_OK);

  jn_trace * first = nullptr;
  jn_trace * second = nullptr;
  ASSERT_EQ(jn_run_episode(cfg, loaded, net, 3, &first), JN_OK) << jn_last_error();
  ASSERT_EQ(jn_run_episode(cfg, table, nullptr, 3, &second), JN_OK) << jn_last_error();
  EXPECT_GT(jn_trace_rows(first), 1u);
  const auto csv_a = scratch("a.csv");
  const auto csv_b = scratch("b.csv");
  ASSERT_EQ(jn_trace_write_csv(first, csv_a.c_str()), JN_OK);
  ASSERT_EQ(jn_trace_write_csv(second, csv_b.c_str()), JN_OK);
  EXPECT_EQ(slurp(csv_a), slurp(csv_b));
  EXPECT_EQ(slurp(csv_a).substr(0, 4), "t,x1");

  jn_metrics m{};
  ASSERT_EQ(jn_trace_metrics(first, &m), JN_OK);
  EXPECT_EQ(m.collided, jn_trace_collided(first));
  EXPECT_GE(m.min_speed, 0.0);
  ASSERT_EQ(jn_trace_write_speed_svg(first, scratch("speed.svg").c_str(), "C"), JN_OK);
  EXPECT_NE(slurp(scratch("speed.svg")).find("<svg"), std::string::npos);

  // A table trained with other bins is refused.
  const auto other = scratch("other.yaml");
  std::ofstream(other) << "bins:\n  speed: [1, 5, 9]\n";
  jn_config * other_cfg = nullptr;
  ASSERT_EQ(jn_config_for_case("C", other.c_str(), &other_cfg), JN_OK) << jn_last_error();
  EXPECT_EQ(jn_qtable_check(table, other_cfg), JN_METADATA_MISMATCH);
  jn_trace * refused = nullptr;
  EXPECT_EQ(jn_run_episode(other_cfg, table, net, 0, &refused), JN_METADATA_MISMATCH);
  EXPECT_EQ(refused, nullptr);

  jn_trace_free(first);
  jn_trace_free(second);
  jn_qtable_free(loaded);
  jn_qtable_free(table);
  jn_curve_free(curve);
  jn_network_free(net);
  jn_config_free(other_cfg);
  jn_config_free(cfg);
}

TEST(CApi, CorpusFitAndNetworkFile)
{
  jn_config * cfg = nullptr;
  ASSERT_EQ(jn_config_load(nullptr, &cfg), JN_OK);
  const auto dir = scratch("corpus");
  std::filesystem::remove_all(dir);
  ASSERT_EQ(jn_corpus_generate(cfg, 6, 5, dir.c_str()), JN_OK) << jn_last_error();
  jn_network * fitted = nullptr;
  ASSERT_EQ(jn_network_fit_corpus(dir.c_str(), &fitted), JN_OK) << jn_last_error();
  const auto path = scratch("net.json");
  ASSERT_EQ(jn_network_save(fitted, path.c_str()), JN_OK);
  jn_network * loaded = nullptr;
  ASSERT_EQ(jn_network_load(path.c_str(), &loaded), JN_OK);
  double a = 0.0;
  double b = 0.0;
  ASSERT_EQ(jn_network_infer(fitted, 0, 1, -1, &a), JN_OK);
  ASSERT_EQ(jn_network_infer(loaded, 0, 1, -1, &b), JN_OK);
  EXPECT_DOUBLE_EQ(a, b);
  jn_network_free(loaded);
  jn_network_free(fitted);
  jn_config_free(cfg);
}

}  // namespace
