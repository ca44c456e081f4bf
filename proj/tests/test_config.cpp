// Copyright 2026 The uavpc Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "uavpc/config.hpp"

namespace uavpc {
namespace {

TEST(Config, EmptyTextGivesDefaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.T, 100);
  EXPECT_EQ(c.radio.K, 8);
  EXPECT_EQ(c.link.W_hz, 2e7);
  EXPECT_NEAR(10.0 * std::log10(c.link.N0_w_per_hz * 1e3), -177.0, 1e-12);
  EXPECT_EQ(c.train.pretrain_episodes, 500);
  EXPECT_EQ(c.trajectory_kind, Trajectory::Kind::Circular);
  EXPECT_EQ(c.estimation, EstimationMode::Dnn);
}

TEST(Config, ParsesValuesAndComments) {
  const RunConfig c = parse_config(
      "# comment line\n"
      "K = 4\n"
      "traj=vat   # trailing comment\n"
      "T_slots=250\n"
      "N0_dbm_hz=-174\n"
      "hidden=32,16\n"
      "estimation=exact\n"
      "target_mode=full\n"
      "c2t_clockwise=true\n"
      "\n");
  EXPECT_EQ(c.radio.K, 4);
  EXPECT_EQ(c.trajectory_kind, Trajectory::Kind::VerticalAscent);
  EXPECT_EQ(c.T, 250);
  EXPECT_NEAR(c.link.N0_w_per_hz, std::pow(10.0, -17.4) * 1e-3, 1e-30);
  EXPECT_EQ(c.train.hidden, (std::vector<int>{32, 16}));
  EXPECT_EQ(c.estimation, EstimationMode::Exact);
  EXPECT_EQ(c.train.target_mode, TargetMode::Full);
  EXPECT_TRUE(c.c2t.clockwise);
  const Trajectory t = c.trajectory();
  EXPECT_EQ(t.kind, Trajectory::Kind::VerticalAscent);
  EXPECT_EQ(t.horizon, 250);
}

TEST(Config, SeedKeySetsEveryStream) {
  const RunConfig c = parse_config("seed=17\nfading_seed=3\n");
  EXPECT_EQ(c.seeds.env, 17u);
  EXPECT_EQ(c.seeds.training, 17u);
  EXPECT_EQ(c.seeds.fading, 3u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config("no_such_key=1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("K=abc\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("K\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("traj=spiral\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("estimation=maybe\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("bs_x_km=3\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("T_slots=0\n"), std::invalid_argument);
}

TEST(Config, TextRoundTrip) {
  RunConfig c = parse_config("K=16\nT_slots=42\nc2t_revolutions=2\nseed=9\nalpha=0.25\n");
  const std::string once = config_to_text(c);
  const RunConfig back = parse_config(once);
  EXPECT_EQ(config_to_text(back), once);
  EXPECT_EQ(back.radio.K, 16);
  EXPECT_EQ(back.T, 42);
  EXPECT_EQ(back.c2t.revolutions, 2.0);
  EXPECT_EQ(back.seeds.env, 9u);
  EXPECT_EQ(back.buildings.alpha, 0.25);
  EXPECT_EQ(back.link.N0_w_per_hz, c.link.N0_w_per_hz);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "uavpc_config_test.txt";
  {
    std::ofstream out(path);
    out << "T_slots=7\n";
  }
  EXPECT_EQ(load_config(path).T, 7);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), std::runtime_error);
}

}  // namespace
}  // namespace uavpc
