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

#include "uavpc/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace uavpc {

namespace {

DenseLayer zeros_like(const DenseLayer& l) {
  return {Eigen::MatrixXd::Zero(l.W.rows(), l.W.cols()),
          Eigen::VectorXd::Zero(l.b.size())};
}

}  // namespace

Mlp::Mlp(std::vector<int> sizes, AdamConfig adam)
    : sizes_(std::move(sizes)), adam_(adam) {
  if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least two layer sizes");
  for (int s : sizes_)
    if (s < 1) throw std::invalid_argument("Mlp: layer sizes must be positive");
  for (std::size_t l = 1; l < sizes_.size(); ++l) {
    layers_.push_back({Eigen::MatrixXd::Zero(sizes_[l], sizes_[l - 1]),
                       Eigen::VectorXd::Zero(sizes_[l])});
  }
  for (const auto& l : layers_) {
    m_.push_back(zeros_like(l));
    v_.push_back(zeros_like(l));
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  return forward_batch(x).col(0);
}

Eigen::MatrixXd Mlp::forward_batch(const Eigen::MatrixXd& X) const {
  if (X.rows() != input_size())
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  Eigen::MatrixXd a = X;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].W * a;
    z.colwise() += layers_[l].b;
    a = (l + 1 < layers_.size()) ? z.cwiseMax(0.0) : z;
  }
  return a;
}

double Mlp::loss(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) const {
  const Eigen::MatrixXd out = forward_batch(X);
  if (out.rows() != Y.rows() || out.cols() != Y.cols())
    throw std::invalid_argument("Mlp::loss: target shape mismatch");
  return (out - Y).squaredNorm() / static_cast<double>(X.cols());
}

double Mlp::loss_and_gradient(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                              MlpGradient& grad) const {
  if (X.rows() != input_size() || Y.rows() != output_size() ||
      X.cols() != Y.cols())
    throw std::invalid_argument("Mlp::loss_and_gradient: shape mismatch");
  const auto L = layers_.size();
  const double batch = static_cast<double>(X.cols());

  std::vector<Eigen::MatrixXd> acts;  // acts[l] is the input of layer l
  std::vector<Eigen::MatrixXd> pre;
  acts.reserve(L + 1);
  pre.reserve(L);
  acts.push_back(X);
  for (std::size_t l = 0; l < L; ++l) {
    Eigen::MatrixXd z = layers_[l].W * acts.back();
    z.colwise() += layers_[l].b;
    pre.push_back(z);
    acts.push_back(l + 1 < L ? Eigen::MatrixXd(z.cwiseMax(0.0)) : z);
  }
  const Eigen::MatrixXd err = acts.back() - Y;
  const double value = err.squaredNorm() / batch;

  grad.dW.resize(L);
  grad.db.resize(L);
  Eigen::MatrixXd delta = (2.0 / batch) * err;
  for (std::size_t i = L; i-- > 0;) {
    grad.dW[i] = delta * acts[i].transpose();
    grad.db[i] = delta.rowwise().sum();
    if (i > 0) {
      delta = (layers_[i].W.transpose() * delta)
                  .cwiseProduct((pre[i - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return value;
}

void Mlp::adam_step(const MlpGradient& grad) {
  if (grad.dW.size() != layers_.size() || grad.db.size() != layers_.size())
    throw std::invalid_argument("Mlp::adam_step: gradient shape mismatch");
  ++step_;
  const double b1 = adam_.beta1;
  const double b2 = adam_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    param.array() -= adam_.lr * (m.array() / c1) /
                     ((v.array() / c2).sqrt() + adam_.eps);
  };
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (grad.dW[l].rows() != layers_[l].W.rows() ||
        grad.dW[l].cols() != layers_[l].W.cols() ||
        grad.db[l].size() != layers_[l].b.size())
      throw std::invalid_argument("Mlp::adam_step: gradient shape mismatch");
    update(layers_[l].W, m_[l].W, v_[l].W, grad.dW[l]);
    update(layers_[l].b, m_[l].b, v_[l].b, grad.db[l]);
  }
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.W.size() + l.b.size());
  return n;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index off = 0;
  for (const auto& l : layers_) {
    flat.segment(off, l.W.size()) = l.W.reshaped();
    off += l.W.size();
    flat.segment(off, l.b.size()) = l.b;
    off += l.b.size();
  }
  return flat;
}

void Mlp::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != static_cast<Eigen::Index>(parameter_count()))
    throw std::invalid_argument("Mlp::set_parameters: size mismatch");
  Eigen::Index off = 0;
  for (auto& l : layers_) {
    l.W.reshaped() = flat.segment(off, l.W.size());
    off += l.W.size();
    l.b = flat.segment(off, l.b.size());
    off += l.b.size();
  }
}

Eigen::VectorXd Mlp::flatten(const MlpGradient& grad) {
  Eigen::Index n = 0;
  for (std::size_t l = 0; l < grad.dW.size(); ++l) n += grad.dW[l].size() + grad.db[l].size();
  Eigen::VectorXd flat(n);
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < grad.dW.size(); ++l) {
    flat.segment(off, grad.dW[l].size()) = grad.dW[l].reshaped();
    off += grad.dW[l].size();
    flat.segment(off, grad.db[l].size()) = grad.db[l];
    off += grad.db[l].size();
  }
  return flat;
}

double xavier_bound(int fan_in, int fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

Eigen::MatrixXd xavier_uniform(int fan_out, int fan_in, Rng& rng) {
  const double b = xavier_bound(fan_in, fan_out);
  std::uniform_real_distribution<double> dist(-b, b);
  Eigen::MatrixXd W(fan_out, fan_in);
  for (Eigen::Index i = 0; i < W.rows(); ++i)
    for (Eigen::Index j = 0; j < W.cols(); ++j) W(i, j) = dist(rng);
  return W;
}

void xavier_init(Mlp& net, Rng& rng) {
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    auto& layer = net.layers()[l];
    layer.W = xavier_uniform(static_cast<int>(layer.W.rows()),
                             static_cast<int>(layer.W.cols()), rng);
    layer.b.setZero();
    net.first_moment()[l].W.setZero();
    net.first_moment()[l].b.setZero();
    net.second_moment()[l].W.setZero();
    net.second_moment()[l].b.setZero();
  }
  net.set_step(0);
}

}  // namespace uavpc
