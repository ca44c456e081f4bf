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

#include <algorithm>
#include <limits>

#include <Eigen/Dense>

#include "uavpc/mlp.hpp"

namespace uavpc::testing {

// ||g_backprop - g_fd|| / max(||g_backprop||, ||g_fd||) with central
// differences of step h on every parameter.
inline double gradient_check_error(const Mlp& net, const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& Y, double h = 1e-5) {
  MlpGradient grad;
  net.loss_and_gradient(X, Y, grad);
  const Eigen::VectorXd analytic = Mlp::flatten(grad);
  const Eigen::VectorXd theta = net.parameters();
  Eigen::VectorXd numeric(theta.size());
  Mlp probe = net;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd t = theta;
    t(i) = theta(i) + h;
    probe.set_parameters(t);
    const double up = probe.loss(X, Y);
    t(i) = theta(i) - h;
    probe.set_parameters(t);
    const double down = probe.loss(X, Y);
    numeric(i) = (up - down) / (2.0 * h);
  }
  const double scale = std::max(analytic.norm(), numeric.norm());
  return scale > 0.0 ? (analytic - numeric).norm() / scale : 0.0;
}

// Smallest |pre-activation| over the hidden layers for the batch X. Central
// differences are only meaningful when no ReLU kink lies inside the stencil.
inline double min_hidden_preactivation(const Mlp& net, const Eigen::MatrixXd& X) {
  double m = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd a = X;
  for (std::size_t l = 0; l + 1 < net.layers().size(); ++l) {
    const Eigen::MatrixXd z = (net.layers()[l].W * a).colwise() + net.layers()[l].b;
    m = std::min(m, z.cwiseAbs().minCoeff());
    a = z.cwiseMax(0.0);
  }
  return m;
}

}  // namespace uavpc::testing
