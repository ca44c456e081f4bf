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

#include <filesystem>
#include <set>
#include <vector>

#include "uavpc/estimator.hpp"

namespace uavpc {
namespace {

Transition make_transition(double v) {
  return {Eigen::VectorXd::Constant(3, v), Eigen::Vector2d(v, -v)};
}

TrainConfig small_config() {
  TrainConfig c;
  c.hidden = {8, 8};
  c.minibatch = 4;
  c.capacity = 32;
  c.mape_window = 5;
  return c;
}

TEST(ReplayBuffer, EvictsOldestFirst) {
  ReplayBuffer b(3);
  for (int i = 0; i < 5; ++i) b.push(make_transition(i));
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0].target(0), 2.0);
  EXPECT_EQ(b[2].target(0), 4.0);
  EXPECT_THROW(ReplayBuffer(0), std::invalid_argument);
}

TEST(ReplayBuffer, SampleIsDistinctAndUniform) {
  ReplayBuffer b(50);
  for (int i = 0; i < 50; ++i) b.push(make_transition(i));
  Rng rng(1);
  std::vector<int> hits(50, 0);
  for (int rep = 0; rep < 4000; ++rep) {
    const auto idx = b.sample(10, rng);
    ASSERT_EQ(idx.size(), 10u);
    EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 10u);
    for (auto i : idx) ++hits[i];
  }
  for (int h : hits) EXPECT_NEAR(h, 800, 120);
  EXPECT_EQ(b.sample(50, rng).size(), 50u);
  EXPECT_THROW(b.sample(51, rng), std::invalid_argument);
}

TEST(BuildInput, LayoutAndNormalisation) {
  const Position uav{0.5, 0.25, 0.1};
  const Position bs{0.25, 0.375, 0.025};
  const Eigen::VectorXd raw = build_input_raw(Direction::BtU, uav, bs, 3, 4);
  ASSERT_EQ(raw.size(), 10);
  EXPECT_EQ(raw(0), 0.5);
  EXPECT_EQ(raw(3), 0.25);
  for (int i = 6; i < 10; ++i) EXPECT_EQ(raw(i), 3.0);
  const Eigen::VectorXd dl = build_input_raw(Direction::UtB, uav, bs, 3, 4);
  EXPECT_EQ(dl.head(3), raw.segment(3, 3));
  EXPECT_EQ(dl.segment(3, 3), raw.head(3));
  EXPECT_EQ(build_input(Direction::BtU, uav, bs, 1, 8, 1.0).size(), 14);
  const Eigen::VectorXd n = build_input(Direction::BtU, uav, bs, 3, 4, 2.0);
  EXPECT_EQ(n(0), 0.25);
  EXPECT_EQ(n(9), 0.75);
  EXPECT_THROW(build_input_raw(Direction::BtU, uav, bs, 0, 4), std::out_of_range);
  EXPECT_THROW(build_input_raw(Direction::BtU, uav, bs, 5, 4), std::out_of_range);
}

TEST(Mape, DividesByTarget) {
  const std::vector<cdouble> est{{1.2, 0.0}};
  const std::vector<cdouble> tgt{{1.0, 0.0}};
  EXPECT_NEAR(mape(est, tgt).value, 0.2, 1e-15);
  EXPECT_EQ(mape(tgt, tgt).value, 0.0);
  const std::vector<cdouble> est2{{1.0, 1.0}, {5.0, 0.0}};
  const std::vector<cdouble> tgt2{{0.0, 1.0}, {0.0, 0.0}};
  const MapeResult r = mape(est2, tgt2);
  EXPECT_EQ(r.excluded, 1);
  EXPECT_NEAR(r.value, 1.0, 1e-15);
  EXPECT_THROW(mape(est, tgt2), std::invalid_argument);
}

TEST(Training, StoresWithoutTrainingOffInterval) {
  TrainConfig cfg = small_config();
  cfg.train_interval = 5;
  AntennaEstimator est(3, cfg, Rng(1), Rng(2));
  for (int t = 1; t <= 6; ++t) record_and_maybe_train(est, t, make_transition(0.1 * t), cfg);
  ASSERT_TRUE(est.last_loss().has_value());
  const Eigen::VectorXd before = est.net().parameters();
  record_and_maybe_train(est, 7, make_transition(0.7), cfg);
  EXPECT_EQ(est.buffer().size(), 7u);
  EXPECT_EQ(est.net().parameters(), before);
  for (int t = 8; t <= 9; ++t) record_and_maybe_train(est, t, make_transition(0.1 * t), cfg);
  EXPECT_EQ(est.net().parameters(), before);
  record_and_maybe_train(est, 10, make_transition(1.0), cfg);
  EXPECT_NE(est.net().parameters(), before);
}

TEST(Training, WaitsForFullMinibatch) {
  TrainConfig cfg = small_config();
  AntennaEstimator est(3, cfg, Rng(1), Rng(2));
  const Eigen::VectorXd p0 = est.net().parameters();
  for (int t = 1; t < cfg.minibatch; ++t) record_and_maybe_train(est, t, make_transition(t), cfg);
  EXPECT_EQ(est.net().parameters(), p0);
  record_and_maybe_train(est, cfg.minibatch, make_transition(1.0), cfg);
  EXPECT_NE(est.net().parameters(), p0);
}

TEST(Training, ExactNetOnIdenticalDataHasZeroLoss) {
  TrainConfig cfg = small_config();
  Mlp net({3, 4, 2});
  net.layers()[1].b << 0.5, -0.5;
  ReplayBuffer b(8);
  for (int i = 0; i < 8; ++i) b.push({Eigen::VectorXd::Ones(3), Eigen::Vector2d(0.5, -0.5)});
  Rng rng(3);
  const Eigen::VectorXd p0 = net.parameters();
  const auto loss = train_step(net, b, cfg, rng);
  ASSERT_TRUE(loss.has_value());
  EXPECT_EQ(*loss, 0.0);
  EXPECT_EQ(net.parameters(), p0);
  ReplayBuffer tiny(8);
  EXPECT_FALSE(train_step(net, tiny, cfg, rng).has_value());
}

TEST(Training, FullBatchLossIsDeterministic) {
  TrainConfig cfg = small_config();
  cfg.minibatch = 16;
  ReplayBuffer b(16);
  for (int i = 0; i < 16; ++i) b.push(make_transition(0.05 * i));
  Rng init(4);
  Mlp net({3, 8, 2});
  xavier_init(net, init);
  Mlp copy = net;
  Rng r1(1);
  Rng r2(99);
  EXPECT_EQ(*train_step(net, b, cfg, r1), *train_step(copy, b, cfg, r2));
}

TEST(Training, LossFallsOnFixedBuffer) {
  TrainConfig cfg = small_config();
  cfg.minibatch = 16;
  cfg.learning_rate = 1e-2;
  AntennaEstimator est(3, cfg, Rng(5), Rng(6));
  for (int i = 0; i < 32; ++i) est.buffer().push(make_transition(0.03 * i));
  double early = 0.0;
  double late = 0.0;
  for (int s = 0; s < 100; ++s) {
    const double l = *train_step(est.net(), est.buffer(), cfg, est.rng());
    if (s < 10) early += l;
    if (s >= 90) late += l;
  }
  EXPECT_LT(late, early);
}

TEST(Bank, NetworksAreIndependent) {
  TrainConfig cfg = small_config();
  EstimatorBank bank(2, 1.0, cfg, SeedPlan{1, 1, 1});
  std::vector<Eigen::VectorXd> before;
  for (Direction d : {Direction::BtU, Direction::UtB})
    for (int k = 1; k <= 2; ++k) before.push_back(bank.at(d, k).net().parameters());
  EXPECT_NE(before[0], before[1]);
  EXPECT_NE(before[0], before[2]);
  auto& target = bank.at(Direction::BtU, 2);
  for (int t = 1; t <= 8; ++t) record_and_maybe_train(target, t, {Eigen::VectorXd::Ones(8), Eigen::Vector2d(1.0, 0.0)}, cfg);
  EXPECT_NE(target.net().parameters(), before[1]);
  EXPECT_EQ(bank.at(Direction::BtU, 1).net().parameters(), before[0]);
  EXPECT_EQ(bank.at(Direction::UtB, 1).net().parameters(), before[2]);
  EXPECT_EQ(bank.at(Direction::UtB, 2).net().parameters(), before[3]);
  EXPECT_THROW(bank.at(Direction::BtU, 3), std::out_of_range);
}

TEST(Bank, ObserveScoresBeforeTraining) {
  TrainConfig cfg = small_config();
  EstimatorBank bank(2, 1.0, cfg, SeedPlan{2, 2, 2});
  const Position uav{0.5, 0.5, 0.1};
  const Position bs{0.25, 0.375, 0.025};
  const auto guess = bank.estimate(Direction::BtU, uav, bs);
  const std::vector<cdouble> targets{{2.0, 1.0}, {-1.0, 0.5}};
  const double m = bank.observe(Direction::BtU, uav, bs, targets);
  EXPECT_NEAR(m, mape(guess, targets).value, 1e-15);
  EXPECT_EQ(bank.at(Direction::BtU, 1).buffer().size(), 1u);
  EXPECT_EQ(bank.at(Direction::UtB, 1).buffer().size(), 0u);
  EXPECT_EQ(bank.at(Direction::BtU, 1).episode(), 1);
}

TEST(Bank, WindowMapeKeepsLastEntries) {
  AntennaEstimator est(3, small_config(), Rng(1), Rng(2));
  for (int i = 1; i <= 8; ++i) est.record_error(i, 5);
  EXPECT_EQ(est.errors().size(), 5u);
  EXPECT_NEAR(est.window_mape(), 6.0, 1e-15);
}

TEST(Bank, CheckpointRoundTripContinuesIdentically) {
  TrainConfig cfg = small_config();
  EstimatorBank bank(2, 1.0, cfg, SeedPlan{3, 3, 3});
  const Position bs{0.25, 0.375, 0.025};
  for (int e = 0; e < 12; ++e) {
    const Position uav{0.05 * e, 0.5, 0.1};
    const std::vector<cdouble> tg{{1.0 + e, 0.5}, {0.5, -e * 0.1}};
    bank.observe(Direction::BtU, uav, bs, tg);
    bank.observe(Direction::UtB, uav, bs, tg);
  }
  const auto dir = std::filesystem::temp_directory_path() / "uavpc_bank_test";
  std::filesystem::remove_all(dir);
  bank.save(dir);
  EstimatorBank loaded = EstimatorBank::load(dir);
  EXPECT_EQ(loaded.K(), 2);
  for (int step = 0; step < 6; ++step) {
    const Position uav{0.9 - 0.1 * step, 0.3, 0.2};
    const std::vector<cdouble> tg{{2.0, 0.1}, {0.3, 0.3}};
    EXPECT_EQ(bank.observe(Direction::BtU, uav, bs, tg),
              loaded.observe(Direction::BtU, uav, bs, tg));
  }
  for (Direction d : {Direction::BtU, Direction::UtB})
    for (int k = 1; k <= 2; ++k) {
      EXPECT_EQ(bank.at(d, k).net().parameters(), loaded.at(d, k).net().parameters());
      EXPECT_EQ(bank.window_mape(d, k), loaded.window_mape(d, k));
    }
  std::filesystem::remove_all(dir);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.minibatch = c.capacity + 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = TrainConfig{};
  c.hidden.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(target_mode_from_string("full"), TargetMode::Full);
  EXPECT_THROW(target_mode_from_string("other"), std::invalid_argument);
}

}  // namespace
}  // namespace uavpc
