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

#include "uavpc/estimator.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace uavpc {

using nlohmann::json;

const char* to_string(TargetMode m) {
  return m == TargetMode::LargeScale ? "large_scale" : "full";
}

TargetMode target_mode_from_string(const std::string& s) {
  if (s == "large_scale") return TargetMode::LargeScale;
  if (s == "full") return TargetMode::Full;
  throw std::invalid_argument("unknown target mode '" + s + "'");
}

void TrainConfig::validate() const {
  if (hidden.empty()) throw std::invalid_argument("TrainConfig: need hidden layers");
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("TrainConfig: hidden widths must be positive");
  if (minibatch < 1 || train_interval < 1 || capacity < 1 || mape_window < 1 ||
      pretrain_episodes < 0 || !(learning_rate > 0.0))
    throw std::invalid_argument("TrainConfig: sizes, intervals and learning rate must be positive");
  if (minibatch > capacity)
    throw std::invalid_argument("TrainConfig: minibatch exceeds buffer capacity");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Transition t) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(t));
}

std::vector<std::size_t> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (n > items_.size()) throw std::invalid_argument("ReplayBuffer::sample: not enough transitions");
  std::vector<std::size_t> idx;
  idx.reserve(n);
  // Selection sampling: index i is kept with probability needed / remaining.
  std::size_t needed = n;
  for (std::size_t i = 0; i < items_.size() && needed > 0; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - i - 1);
    if (pick(rng) < needed) {
      idx.push_back(i);
      --needed;
    }
  }
  return idx;
}

Eigen::VectorXd build_input_raw(Direction dir, const Position& uav,
                                const Position& bs, int k, int K) {
  if (K < 1 || k < 1 || k > K) throw std::out_of_range("build_input: antenna index out of range");
  Eigen::VectorXd s(6 + K);
  const Position& first = dir == Direction::BtU ? uav : bs;
  const Position& second = dir == Direction::BtU ? bs : uav;
  s << first.x, first.y, first.g, second.x, second.y, second.g,
      Eigen::VectorXd::Constant(K, static_cast<double>(k));
  return s;
}

Eigen::VectorXd build_input(Direction dir, const Position& uav,
                            const Position& bs, int k, int K, double region_km) {
  Eigen::VectorXd s = build_input_raw(dir, uav, bs, k, K);
  s.head(6) /= region_km;
  s.tail(K) /= static_cast<double>(K);
  return s;
}

std::optional<double> train_step(Mlp& net, const ReplayBuffer& buffer,
                                 const TrainConfig& cfg, Rng& rng) {
  const auto batch = static_cast<std::size_t>(cfg.minibatch);
  if (buffer.size() < batch) return std::nullopt;
  const auto idx = buffer.sample(batch, rng);
  Eigen::MatrixXd X(net.input_size(), static_cast<Eigen::Index>(batch));
  Eigen::MatrixXd Y(net.output_size(), static_cast<Eigen::Index>(batch));
  for (std::size_t j = 0; j < batch; ++j) {
    const auto c = static_cast<Eigen::Index>(j);
    X.col(c) = buffer[idx[j]].input;
    Y.col(c) = buffer[idx[j]].target;
  }
  MlpGradient grad;
  const double loss = net.loss_and_gradient(X, Y, grad);
  net.adam_step(grad);
  return loss;
}

MapeResult mape(std::span<const cdouble> estimates, std::span<const cdouble> targets) {
  if (estimates.size() != targets.size() || targets.empty())
    throw std::invalid_argument("mape: need equal, non-empty inputs");
  MapeResult r;
  double sum = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double mag = std::abs(targets[i]);
    if (mag == 0.0) {
      ++r.excluded;
      continue;
    }
    sum += std::abs(targets[i] - estimates[i]) / mag;
    ++used;
  }
  r.value = used > 0 ? sum / used : 0.0;
  return r;
}

AntennaEstimator::AntennaEstimator(int input_size, const TrainConfig& cfg,
                                   Rng init_rng, Rng minibatch_rng)
    : buffer_(static_cast<std::size_t>(cfg.capacity)), rng_(std::move(minibatch_rng)) {
  std::vector<int> sizes{input_size};
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(2);
  AdamConfig adam;
  adam.lr = cfg.learning_rate;
  net_ = Mlp(sizes, adam);
  xavier_init(net_, init_rng);
}

cdouble AntennaEstimator::predict(const Eigen::VectorXd& input) const {
  const Eigen::VectorXd out = net_.forward(input);
  return {out(0), out(1)};
}

void AntennaEstimator::record_error(double ape, int window) {
  errors_.push_back(ape);
  while (errors_.size() > static_cast<std::size_t>(window)) errors_.pop_front();
}

double AntennaEstimator::window_mape() const {
  if (errors_.empty()) return 0.0;
  return std::accumulate(errors_.begin(), errors_.end(), 0.0) /
         static_cast<double>(errors_.size());
}

void record_and_maybe_train(AntennaEstimator& est, long t_hat,
                            const Transition& transition, const TrainConfig& cfg) {
  est.buffer().push(transition);
  est.set_episode(t_hat);
  if (t_hat % cfg.train_interval == 0 && t_hat >= cfg.minibatch)
    est.set_last_loss(train_step(est.net(), est.buffer(), cfg, est.rng()));
}

EstimatorBank::EstimatorBank(int K, double region_km, const TrainConfig& cfg,
                             const SeedPlan& seeds)
    : K_(K), region_km_(region_km), cfg_(cfg) {
  cfg_.validate();
  if (K < 1) throw std::invalid_argument("EstimatorBank: K must be >= 1");
  for (int d = 0; d < 2; ++d) {
    nets_[d].reserve(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k)
      nets_[d].emplace_back(6 + K, cfg_, seeds.weight_init(d, k), seeds.minibatch(d, k));
  }
}

AntennaEstimator& EstimatorBank::at(Direction dir, int k) {
  if (k < 1 || k > K_) throw std::out_of_range("EstimatorBank: antenna index out of range");
  return nets_[static_cast<int>(dir)][static_cast<std::size_t>(k - 1)];
}

const AntennaEstimator& EstimatorBank::at(Direction dir, int k) const {
  if (k < 1 || k > K_) throw std::out_of_range("EstimatorBank: antenna index out of range");
  return nets_[static_cast<int>(dir)][static_cast<std::size_t>(k - 1)];
}

std::vector<cdouble> EstimatorBank::estimate(Direction dir, const Position& uav,
                                             const Position& bs) const {
  std::vector<cdouble> out(static_cast<std::size_t>(K_));
  for (int k = 1; k <= K_; ++k)
    out[static_cast<std::size_t>(k - 1)] =
        at(dir, k).predict(build_input(dir, uav, bs, k, K_, region_km_));
  return out;
}

double EstimatorBank::observe(Direction dir, const Position& uav, const Position& bs,
                              std::span<const cdouble> targets) {
  if (targets.size() != static_cast<std::size_t>(K_))
    throw std::invalid_argument("EstimatorBank::observe: need one target per antenna");
  double sum = 0.0;
  int used = 0;
  for (int k = 1; k <= K_; ++k) {
    auto& est = at(dir, k);
    const cdouble target = targets[static_cast<std::size_t>(k - 1)];
    Transition tr{build_input(dir, uav, bs, k, K_, region_km_),
                  Eigen::Vector2d(target.real(), target.imag())};
    const double mag = std::abs(target);
    if (mag > 0.0) {
      const double ape = std::abs(target - est.predict(tr.input)) / mag;
      est.record_error(ape, cfg_.mape_window);
      sum += ape;
      ++used;
    }
    record_and_maybe_train(est, est.episode() + 1, tr, cfg_);
  }
  return used > 0 ? sum / used : 0.0;
}

double EstimatorBank::window_mape(Direction dir, int k) const {
  return at(dir, k).window_mape();
}

double EstimatorBank::mean_window_mape(Direction dir) const {
  double s = 0.0;
  for (int k = 1; k <= K_; ++k) s += window_mape(dir, k);
  return s / K_;
}

double EstimatorBank::max_window_mape() const {
  double m = 0.0;
  for (int d = 0; d < 2; ++d)
    for (int k = 1; k <= K_; ++k)
      m = std::max(m, window_mape(static_cast<Direction>(d), k));
  return m;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  return flat;
}

Eigen::MatrixXd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  const auto flat = j.get<std::vector<double>>();
  if (flat.size() != static_cast<std::size_t>(rows * cols))
    throw std::runtime_error("checkpoint: matrix size mismatch");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(i, c) = flat[static_cast<std::size_t>(i * cols + c)];
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const json& j, Eigen::Index n) {
  const auto flat = j.get<std::vector<double>>();
  if (flat.size() != static_cast<std::size_t>(n))
    throw std::runtime_error("checkpoint: vector size mismatch");
  return Eigen::Map<const Eigen::VectorXd>(flat.data(), n);
}

std::string net_file_name(int d, int k) {
  return std::string(d == 0 ? "btu" : "utb") + "_k" + std::to_string(k) + ".json";
}

}  // namespace

std::string checkpoint_to_json(const AntennaEstimator& est) {
  const Mlp& net = est.net();
  json j;
  j["sizes"] = net.sizes();
  j["activation"] = {{"hidden", "relu"}, {"output", "linear"}};
  j["adam"] = {{"lr", net.adam().lr},
               {"beta1", net.adam().beta1},
               {"beta2", net.adam().beta2},
               {"eps", net.adam().eps},
               {"step", net.step()}};
  auto& layers = j["layers"] = json::array();
  for (std::size_t l = 0; l < net.layers().size(); ++l) {
    const auto& L = net.layers()[l];
    layers.push_back({{"rows", L.W.rows()},
                      {"cols", L.W.cols()},
                      {"weights", matrix_to_json(L.W)},
                      {"bias", vector_to_json(L.b)},
                      {"m_weights", matrix_to_json(net.first_moment()[l].W)},
                      {"m_bias", vector_to_json(net.first_moment()[l].b)},
                      {"v_weights", matrix_to_json(net.second_moment()[l].W)},
                      {"v_bias", vector_to_json(net.second_moment()[l].b)}});
  }
  j["episode"] = est.episode();
  std::ostringstream rng_state;
  rng_state << est.rng();
  j["rng_state"] = rng_state.str();
  j["errors"] = std::vector<double>(est.errors().begin(), est.errors().end());
  auto& replay = j["replay"] = json::array();
  for (std::size_t i = 0; i < est.buffer().size(); ++i) {
    const auto& t = est.buffer()[i];
    replay.push_back({{"input", vector_to_json(t.input)},
                      {"target", {t.target(0), t.target(1)}}});
  }
  j["replay_capacity"] = est.buffer().capacity();
  return j.dump();
}

void checkpoint_from_json(const std::string& text, AntennaEstimator& est) {
  const json j = json::parse(text);
  const auto sizes = j.at("sizes").get<std::vector<int>>();
  AdamConfig adam;
  adam.lr = j.at("adam").at("lr").get<double>();
  adam.beta1 = j.at("adam").at("beta1").get<double>();
  adam.beta2 = j.at("adam").at("beta2").get<double>();
  adam.eps = j.at("adam").at("eps").get<double>();
  Mlp net(sizes, adam);
  net.set_step(j.at("adam").at("step").get<long>());
  const auto& layers = j.at("layers");
  if (layers.size() != net.layers().size())
    throw std::runtime_error("checkpoint: layer count mismatch");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto rows = layers[l].at("rows").get<Eigen::Index>();
    const auto cols = layers[l].at("cols").get<Eigen::Index>();
    net.layers()[l].W = matrix_from_json(layers[l].at("weights"), rows, cols);
    net.layers()[l].b = vector_from_json(layers[l].at("bias"), rows);
    net.first_moment()[l].W = matrix_from_json(layers[l].at("m_weights"), rows, cols);
    net.first_moment()[l].b = vector_from_json(layers[l].at("m_bias"), rows);
    net.second_moment()[l].W = matrix_from_json(layers[l].at("v_weights"), rows, cols);
    net.second_moment()[l].b = vector_from_json(layers[l].at("v_bias"), rows);
  }
  est.net() = std::move(net);
  est.set_episode(j.value("episode", 0L));
  if (j.contains("rng_state")) {
    std::istringstream in(j.at("rng_state").get<std::string>());
    in >> est.rng();
  }
  est.buffer() = ReplayBuffer(j.value("replay_capacity", std::size_t{10000}));
  if (j.contains("replay")) {
    for (const auto& t : j.at("replay")) {
      const auto in = t.at("input").get<std::vector<double>>();
      const auto tg = t.at("target").get<std::vector<double>>();
      est.buffer().push({Eigen::Map<const Eigen::VectorXd>(in.data(),
                                                           static_cast<Eigen::Index>(in.size())),
                         Eigen::Vector2d(tg.at(0), tg.at(1))});
    }
  }
  if (j.contains("errors")) {
    const auto errs = j.at("errors").get<std::vector<double>>();
    for (double e : errs) est.record_error(e, static_cast<int>(errs.size()));
  }
}

void EstimatorBank::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  json manifest;
  manifest["K"] = K_;
  manifest["region_km"] = region_km_;
  manifest["hidden"] = cfg_.hidden;
  manifest["minibatch"] = cfg_.minibatch;
  manifest["train_interval"] = cfg_.train_interval;
  manifest["capacity"] = cfg_.capacity;
  manifest["learning_rate"] = cfg_.learning_rate;
  manifest["pretrain_episodes"] = cfg_.pretrain_episodes;
  manifest["mape_window"] = cfg_.mape_window;
  manifest["target_mode"] = to_string(cfg_.target_mode);
  {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(1) << '\n';
  }
  for (int d = 0; d < 2; ++d) {
    for (int k = 1; k <= K_; ++k) {
      const auto path = dir / net_file_name(d, k);
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path.string());
      out << checkpoint_to_json(at(static_cast<Direction>(d), k)) << '\n';
    }
  }
}

EstimatorBank EstimatorBank::load(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream min(manifest_path);
  if (!min) throw std::runtime_error("cannot read " + manifest_path.string());
  const json m = json::parse(min);
  TrainConfig cfg;
  cfg.hidden = m.at("hidden").get<std::vector<int>>();
  cfg.minibatch = m.at("minibatch").get<int>();
  cfg.train_interval = m.at("train_interval").get<int>();
  cfg.capacity = m.at("capacity").get<int>();
  cfg.learning_rate = m.at("learning_rate").get<double>();
  cfg.pretrain_episodes = m.at("pretrain_episodes").get<int>();
  cfg.mape_window = m.at("mape_window").get<int>();
  cfg.target_mode = target_mode_from_string(m.at("target_mode").get<std::string>());
  EstimatorBank bank(m.at("K").get<int>(), m.at("region_km").get<double>(), cfg,
                     SeedPlan{});
  for (int d = 0; d < 2; ++d) {
    for (int k = 1; k <= bank.K_; ++k) {
      const auto path = dir / net_file_name(d, k);
      std::ifstream in(path);
      if (!in) throw std::runtime_error("cannot read " + path.string());
      std::stringstream ss;
      ss << in.rdbuf();
      checkpoint_from_json(ss.str(), bank.at(static_cast<Direction>(d), k));
    }
  }
  return bank;
}

}  // namespace uavpc
