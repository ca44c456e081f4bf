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

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "uavpc/link.hpp"
#include "uavpc/solver.hpp"

namespace uavpc {
namespace {

struct Instance {
  Eigen::VectorXcd h;
  double g = 0.0;
};

Instance random_instance(int K, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_real_distribution<double> la(-9.0, -5.0);
  std::uniform_real_distribution<double> lg(-13.0, -8.0);
  const double a = std::pow(10.0, la(rng));
  Instance in;
  in.h.resize(K);
  for (int k = 0; k < K; ++k) in.h(k) = {a * nd(rng), a * nd(rng)};
  in.g = std::pow(10.0, lg(rng));
  return in;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

TEST(Oracle, VMeetsTraceFloorWithMinimumPower) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int K : {2, 3, 8}) {
    const Eigen::VectorXcd h = random_instance(K, rng).h;
    const double c = 4e-12;
    const OracleV o = oracle_V(h, c);
    EXPECT_NEAR((h.adjoint() * o.V * h)(0, 0).real() / c, 1.0, 1e-12);
    EXPECT_NEAR(o.V.trace().real() / o.trace, 1.0, 1e-12);
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < 20000; ++s) {
      Eigen::VectorXcd u(K);
      for (int k = 0; k < K; ++k) u(k) = {nd(rng), nd(rng)};
      u.normalize();
      const double needed = c / std::norm(h.dot(u));
      EXPECT_GE(needed, o.trace * (1.0 - 1e-12));
      best = std::min(best, needed);
    }
    if (K == 2) {
      EXPECT_LT(best / o.trace, 1.01);
    }
  }
}

TEST(Oracle, PowerMaximisesScalarObjective) {
  LinkParams lp;
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const Instance in = random_instance(2, rng);
    const ConvexProblem prob = build_problem(in.h, in.g, lp);
    if (prob.R_max < lp.Re_th_bps) continue;
    const OracleP o = oracle_p(in.g, lp);
    const double at_oracle = relaxed_objective(prob, 0.0, o.p, o.phi);
    const double p_min =
        (std::pow(2.0, lp.Re_th_bps / lp.W_hz) - 1.0) * lp.noise_power_w() / in.g;
    EXPECT_GE(o.p, p_min * (1.0 - 1e-12));
    EXPECT_LE(o.p, lp.pv_max_w);
    for (int i = 0; i <= 2000; ++i) {
      const double p = p_min + (lp.pv_max_w - p_min) * i / 2000.0;
      const double val = relaxed_objective(prob, 0.0, p, downlink_rate(p, in.g, lp));
      EXPECT_LE(val, at_oracle + 1e-12);
    }
  }
}

TEST(Solver, MatchesOracleOnRandomInstances) {
  LinkParams lp;
  std::mt19937_64 rng(3);
  int solved = 0;
  for (int K : {2, 4, 8, 16}) {
    for (int rep = 0; rep < 150; ++rep) {
      const Instance in = random_instance(K, rng);
      const ConvexProblem prob = build_problem(in.h, in.g, lp);
      const PowerSolution s = solve(prob);
      if (s.status == SolveStatus::InfeasibleUplink ||
          s.status == SolveStatus::InfeasibleDownlink)
        continue;
      ASSERT_EQ(s.status, SolveStatus::Optimal) << "K=" << K;
      ++solved;
      const OracleV ov = oracle_V(in.h, prob.uplink_trace);
      const OracleP op = oracle_p(in.g, lp);
      EXPECT_LT(rel(s.trace_V(), ov.trace), 1e-6);
      EXPECT_LT(rel(s.p, op.p), 1e-6);
      EXPECT_LT(rel(relaxed_objective(prob, s.trace_V(), s.p, s.phi),
                    relaxed_objective(prob, ov.trace, op.p, op.phi)),
                1e-6);
      EXPECT_GE(s.tightness, 1.0 - 1e-6);
      EXPECT_NEAR(s.v.squaredNorm() / s.trace_V(), s.tightness, 1e-9);
      const FeasibilityReport r = check_feasible(s, in.h, in.g, lp);
      EXPECT_GE(r.worst(), -1e-9);
      EXPECT_GE(r.latency, 0.0);
    }
  }
  EXPECT_GE(solved, 150);
}

TEST(Solver, BeamformerReproducesCovariance) {
  LinkParams lp;
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    Instance in = random_instance(4, rng);
    in.h *= 1e-6 / in.h.norm();
    in.g = 1e-10;
    const ConvexProblem prob = build_problem(in.h, in.g, lp);
    const PowerSolution s = solve(prob);
    ASSERT_TRUE(s.feasible());
    const Eigen::MatrixXcd vv = s.v * s.v.adjoint();
    EXPECT_LT((vv - s.V).norm() / s.V.norm(), 1e-5);
  }
}

TEST(Solver, ReportsInfeasibleUplink) {
  LinkParams lp;
  Eigen::VectorXcd h(4);
  h.setConstant({1e-12, 0.0});
  const PowerSolution s = solve(build_problem(h, 1e-10, lp));
  EXPECT_EQ(s.status, SolveStatus::InfeasibleUplink);
  EXPECT_FALSE(s.feasible());
  EXPECT_EQ(s.V.rows(), 4);
  EXPECT_EQ(s.trace_V(), 0.0);
}

TEST(Solver, ReportsInfeasibleDownlink) {
  LinkParams lp;
  Eigen::VectorXcd h(4);
  h.setConstant({1e-6, 0.0});
  EXPECT_EQ(solve(build_problem(h, 1e-16, lp)).status, SolveStatus::InfeasibleDownlink);
  EXPECT_EQ(solve(build_problem(h, 0.0, lp)).status, SolveStatus::InfeasibleDownlink);
}

TEST(Solver, ExactDispersionSlackNonNegative) {
  LinkParams lp;
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const Instance in = random_instance(8, rng);
    const PowerSolution s = solve(build_problem(in.h, in.g, lp));
    if (!s.feasible()) continue;
    const FeasibilityReport r = check_feasible(s, in.h, in.g, lp);
    EXPECT_GE(r.latency, 0.0);
    EXPECT_LT(std::abs(r.dispersion - 1.0), 1e-4);
  }
}

TEST(Solver, RateFloorBindsWhenSnrFloorDisabled) {
  LinkParams lp;
  lp.snr_th_db = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(6);
  const Instance in = random_instance(4, rng);
  const ConvexProblem prob = build_problem(in.h, 1e-10, lp);
  EXPECT_EQ(prob.uplink_trace, uplink_rate_floor_trace(lp));
  const PowerSolution s = solve(prob);
  if (s.feasible()) {
    EXPECT_LT(rel(s.trace_V(), oracle_V(in.h, prob.uplink_trace).trace), 1e-6);
  }
}

TEST(Solver, EnergyUtilityUsesDownlinkRate) {
  LinkParams lp;
  Eigen::VectorXcd h(2);
  h << cdouble{3e-6, 1e-6}, cdouble{-2e-6, 4e-6};
  const ConvexProblem prob = build_problem(h, 5e-11, lp);
  const PowerSolution s = solve(prob);
  ASSERT_TRUE(s.feasible());
  const double want = downlink_rate(s.p, prob.g_dl, lp) / prob.R_max -
                      lp.eta * (s.p / lp.pv_max_w + s.trace_V() / lp.pB_max_w);
  EXPECT_NEAR(s.E_eu, want, 1e-12);
}

TEST(Beamformer, ZeroCovariance) {
  const Beamformer bf = extract_beamformer(Eigen::MatrixXcd::Zero(3, 3));
  EXPECT_EQ(bf.v.size(), 3);
  EXPECT_EQ(bf.v.norm(), 0.0);
  EXPECT_EQ(bf.tightness, 1.0);
}

TEST(Beamformer, HigherRankLowersTightness) {
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(3, 3);
  V(0, 0) = 2.0;
  V(1, 1) = 1.0;
  V(2, 2) = 1.0;
  EXPECT_NEAR(extract_beamformer(V).tightness, 0.5, 1e-12);
}

}  // namespace
}  // namespace uavpc
