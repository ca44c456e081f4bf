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

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "uavpc/channel.hpp"
#include "uavpc/env.hpp"
#include "uavpc/estimator.hpp"
#include "uavpc/hermitian_eigen.hpp"
#include "uavpc/mlp.hpp"
#include "uavpc/solver.hpp"

namespace {

using namespace uavpc;

Eigen::VectorXcd channel(int K, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1e-5);
  Eigen::VectorXcd h(K);
  for (int k = 0; k < K; ++k) h(k) = {nd(rng), nd(rng)};
  return h;
}

void BM_Solve(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const ConvexProblem prob = build_problem(channel(K, rng), 1e-10, LinkParams{});
  for (auto _ : state) benchmark::DoNotOptimize(solve(prob));
}
BENCHMARK(BM_Solve)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_JacobiEigen(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const Eigen::VectorXcd h = channel(K, rng);
  const Eigen::MatrixXcd A = h * h.adjoint() + 1e-14 * Eigen::MatrixXcd::Identity(K, K);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(A));
}
BENCHMARK(BM_JacobiEigen)->Arg(4)->Arg(8)->Arg(16);

void BM_TrainStep(benchmark::State& state) {
  TrainConfig cfg;
  AntennaEstimator est(14, cfg, Rng(3), Rng(4));
  std::normal_distribution<double> nd(0.0, 1.0);
  Rng data(5);
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd x(14);
    for (int j = 0; j < 14; ++j) x(j) = nd(data);
    est.buffer().push({x, Eigen::Vector2d(nd(data), nd(data))});
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(train_step(est.net(), est.buffer(), cfg, est.rng()));
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMicrosecond);

void BM_LosQuery(benchmark::State& state) {
  const EnvMap env = generate_env(BuildingParams{}, 6);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Position bs{0.25, 0.375, 0.025};
  for (auto _ : state) {
    const Position uav{u(rng), u(rng), 0.05 * u(rng)};
    benchmark::DoNotOptimize(is_los(bs, uav, env));
  }
}
BENCHMARK(BM_LosQuery);

}  // namespace

BENCHMARK_MAIN();
