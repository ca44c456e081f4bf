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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavpc/rng.hpp"

namespace uavpc {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct DenseLayer {
  Eigen::MatrixXd W;  // fan_out x fan_in
  Eigen::VectorXd b;
};

struct MlpGradient {
  std::vector<Eigen::MatrixXd> dW;
  std::vector<Eigen::VectorXd> db;
};

// Fully connected network: ReLU on every hidden layer, linear output.
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(std::vector<int> sizes, AdamConfig adam = {});

  const std::vector<int>& sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  const std::vector<DenseLayer>& first_moment() const { return m_; }
  const std::vector<DenseLayer>& second_moment() const { return v_; }
  std::vector<DenseLayer>& first_moment() { return m_; }
  std::vector<DenseLayer>& second_moment() { return v_; }

  AdamConfig& adam() { return adam_; }
  const AdamConfig& adam() const { return adam_; }
  long step() const { return step_; }
  void set_step(long s) { step_ = s; }

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  // Columns of X are samples.
  Eigen::MatrixXd forward_batch(const Eigen::MatrixXd& X) const;

  // (1/B) sum_b ||net(x_b) - y_b||^2
  double loss(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) const;
  double loss_and_gradient(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                           MlpGradient& grad) const;

  // Bias-corrected Adam update; increments the step counter.
  void adam_step(const MlpGradient& grad);

  std::size_t parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);
  static Eigen::VectorXd flatten(const MlpGradient& grad);

 private:
  std::vector<int> sizes_;
  std::vector<DenseLayer> layers_;
  std::vector<DenseLayer> m_;
  std::vector<DenseLayer> v_;
  AdamConfig adam_;
  long step_ = 0;
};

double xavier_bound(int fan_in, int fan_out);
// Uniform(-b, b) weights with b = sqrt(6 / (fan_in + fan_out)).
Eigen::MatrixXd xavier_uniform(int fan_out, int fan_in, Rng& rng);
// Xavier weights, zero biases, cleared Adam state.
void xavier_init(Mlp& net, Rng& rng);

}  // namespace uavpc
