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

#pragma once

#include <complex>
#include <deque>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavpc/channel.hpp"
#include "uavpc/env.hpp"
#include "uavpc/mlp.hpp"
#include "uavpc/rng.hpp"

namespace uavpc {

// What the networks regress: the fading-free coefficient (`LargeScale`) or
// the full per-slot coefficient including small-scale fading (`Full`).
enum class TargetMode { LargeScale, Full };

const char* to_string(TargetMode m);
TargetMode target_mode_from_string(const std::string& s);

struct TrainConfig {
  std::vector<int> hidden{64, 64};
  int minibatch = 64;
  int train_interval = 1;  // T_tr, in episodes
  int capacity = 10000;    // replay buffer size C
  double learning_rate = 1e-3;
  int pretrain_episodes = 500;
  int mape_window = 20;
  TargetMode target_mode = TargetMode::LargeScale;

  void validate() const;
};

struct Transition {
  Eigen::VectorXd input;
  Eigen::Vector2d target;  // (Re theta, Im theta)
};

// Bounded FIFO of transitions; the oldest entry is evicted first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 10000);

  void push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  // i = 0 is the oldest stored transition.
  const Transition& operator[](std::size_t i) const { return items_[i]; }

  // n distinct indices drawn uniformly, in increasing order.
  std::vector<std::size_t> sample(std::size_t n, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

// Network input for antenna k (1-based): positions of the transmitter side
// first, then k repeated K times. Coordinates are divided by the region side
// and the index block by K.
Eigen::VectorXd build_input(Direction dir, const Position& uav,
                            const Position& bs, int k, int K, double region_km);
// Same layout without normalization.
Eigen::VectorXd build_input_raw(Direction dir, const Position& uav,
                                const Position& bs, int k, int K);

// One Adam step on a uniformly sampled minibatch. Returns the loss before
// the update, or nothing when the buffer holds fewer than `minibatch`
// transitions.
std::optional<double> train_step(Mlp& net, const ReplayBuffer& buffer,
                                 const TrainConfig& cfg, Rng& rng);

struct MapeResult {
  double value = 0.0;
  int excluded = 0;  // zero-magnitude targets skipped
};

// Mean of |target - estimate| / |target| over non-zero targets.
MapeResult mape(std::span<const cdouble> estimates, std::span<const cdouble> targets);

// One network with its replay buffer, sampling stream and error window.
class AntennaEstimator {
 public:
  AntennaEstimator() = default;
  AntennaEstimator(int input_size, const TrainConfig& cfg, Rng init_rng,
                   Rng minibatch_rng);

  cdouble predict(const Eigen::VectorXd& input) const;

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }
  ReplayBuffer& buffer() { return buffer_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }
  long episode() const { return episode_; }
  void set_episode(long e) { episode_ = e; }

  // Absolute percent error of the most recent predictions, newest last.
  const std::deque<double>& errors() const { return errors_; }
  void record_error(double ape, int window);
  double window_mape() const;

  std::optional<double> last_loss() const { return last_loss_; }
  void set_last_loss(std::optional<double> l) { last_loss_ = l; }

 private:
  Mlp net_;
  ReplayBuffer buffer_;
  Rng rng_;
  long episode_ = 0;
  std::deque<double> errors_;
  std::optional<double> last_loss_;
};

// Stores the transition and runs train_step when t_hat is a multiple of
// T_tr and at least `minibatch` episodes have been seen.
void record_and_maybe_train(AntennaEstimator& est, long t_hat,
                            const Transition& transition, const TrainConfig& cfg);

// The 2K per-antenna estimators (K BtU + K UtB).
class EstimatorBank {
 public:
  EstimatorBank(int K, double region_km, const TrainConfig& cfg,
                const SeedPlan& seeds);

  int K() const { return K_; }
  double region_km() const { return region_km_; }
  const TrainConfig& config() const { return cfg_; }

  AntennaEstimator& at(Direction dir, int k);
  const AntennaEstimator& at(Direction dir, int k) const;

  std::vector<cdouble> estimate(Direction dir, const Position& uav,
                                const Position& bs) const;

  // Runs one episode for every antenna of `dir`: scores the current
  // estimate against `targets`, stores the transitions and trains. Returns
  // the episode MAPE over the K antennas.
  double observe(Direction dir, const Position& uav, const Position& bs,
                 std::span<const cdouble> targets);

  double window_mape(Direction dir, int k) const;
  double mean_window_mape(Direction dir) const;
  double max_window_mape() const;

  // One JSON checkpoint per network plus a manifest.
  void save(const std::filesystem::path& dir) const;
  static EstimatorBank load(const std::filesystem::path& dir);

 private:
  int K_;
  double region_km_;
  TrainConfig cfg_;
  std::vector<AntennaEstimator> nets_[2];
};

std::string checkpoint_to_json(const AntennaEstimator& est);
void checkpoint_from_json(const std::string& text, AntennaEstimator& est);

}  // namespace uavpc
