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
#include <limits>
#include <stdexcept>

#include "uavpc/link.hpp"

namespace uavpc {
namespace {

long double tail(long double x) { return 0.5L * std::erfc(x / std::sqrt(2.0L)); }

// Plain bisection on the Gaussian tail, in extended precision.
double bisect_q_inv(double eps) {
  long double lo = -10.0L;
  long double hi = 10.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (tail(mid) > eps ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

TEST(QInv, ReferenceValues) {
  EXPECT_NEAR(q_inv(0.5), 0.0, 1e-12);
  EXPECT_NEAR(q_inv(1e-7), bisect_q_inv(1e-7), 1e-9);
  EXPECT_NEAR(q_inv(1e-7), 5.19934, 1e-5);
  EXPECT_NEAR(q_inv(0.02275), 2.0, 1e-3);
  EXPECT_NEAR(q_inv(0.02275), bisect_q_inv(0.02275), 1e-9);
}

TEST(QInv, InvertsTailOnGrid) {
  double prev = std::numeric_limits<double>::infinity();
  for (double le = -9.0; le <= std::log10(0.5) + 1e-12; le += 0.05) {
    const double eps = std::pow(10.0, le);
    const double x = q_inv(eps);
    EXPECT_NEAR(q_inv(q_function(x)), x, 1e-8);
    EXPECT_NEAR(q_function(x) / eps, 1.0, 1e-8);
    EXPECT_LT(x, prev);
    prev = x;
  }
}

TEST(QInv, RejectsOutOfRange) {
  EXPECT_THROW(q_inv(0.0), std::domain_error);
  EXPECT_THROW(q_inv(1.0), std::domain_error);
  EXPECT_THROW(q_inv(-0.2), std::domain_error);
}

TEST(Dispersion, MatchesDefinition) {
  EXPECT_EQ(channel_dispersion(0.0), 0.0);
  EXPECT_NEAR(channel_dispersion(100.0), 1.0 - 1.0 / (101.0 * 101.0), 1e-15);
  for (double snr = 100.0; snr < 1e6; snr *= 1.7)
    EXPECT_LT(std::abs(channel_dispersion(snr) - 1.0), 1e-4);
}

TEST(UplinkRate, ZeroTraceGivesZero) {
  LinkParams lp;
  EXPECT_EQ(uplink_rate(0.0, 1e-3, lp), 0.0);
}

TEST(UplinkRate, TwentyDbReference) {
  LinkParams lp;
  const long double W = 2e7L;
  const long double g = 100.0L;
  const long double B = 1.0L - 1.0L / ((1.0L + g) * (1.0L + g));
  const long double expected =
      W * std::log2(1.0L + g) -
      std::sqrt(W * B / 1e-3L) * bisect_q_inv(1e-7) / std::log(2.0L);
  const double rate = uplink_rate(100.0 * lp.noise_power_w(), 1e-3, lp);
  EXPECT_NEAR(rate, static_cast<double>(expected), 1e-6 * rate);
  EXPECT_NEAR(rate, 1.3210e8, 0.0001e8);
  const double unit = uplink_rate_unit_dispersion(100.0 * lp.noise_power_w(), 1e-3, lp);
  EXPECT_LT(std::abs(unit - rate) / rate, 5e-5);
}

TEST(UplinkRate, MonotoneAboveSnrFloor) {
  LinkParams lp;
  const double floor = uplink_snr_floor_trace(lp);
  double prev = uplink_rate(floor, lp.Du_s, lp);
  for (double tr = floor * 1.01; tr < floor * 1e6; tr *= 1.01) {
    const double r = uplink_rate(tr, lp.Du_s, lp);
    EXPECT_GE(r, prev);
    prev = r;
  }
}

TEST(DownlinkRate, ShannonReferences) {
  LinkParams lp;
  const double n = lp.noise_power_w();
  EXPECT_EQ(downlink_rate(0.0, 1e-9, lp), 0.0);
  EXPECT_NEAR(downlink_rate(1.0, n, lp), 2e7, 1e-6);
  const double snr_needed = std::sqrt(2.0) - 1.0;
  EXPECT_NEAR(snr_needed, 0.41421, 1e-5);
  EXPECT_NEAR(downlink_rate(snr_needed, n, lp), 1e7, 1e-4);
}

TEST(DownlinkRate, IncreasingAndConcave) {
  LinkParams lp;
  const double g = 1e-11;
  const double h = 1e-3;
  for (double p = 0.01; p < 1.0; p += 0.01) {
    const double f0 = downlink_rate(p - h, g, lp);
    const double f1 = downlink_rate(p, g, lp);
    const double f2 = downlink_rate(p + h, g, lp);
    EXPECT_GT(f2, f1);
    EXPECT_LT(f2 - 2.0 * f1 + f0, 0.0);
  }
}

TEST(RequiredTrace, DefaultParameterChain) {
  LinkParams lp;
  const double nw = lp.noise_power_w();
  EXPECT_NEAR(nw, 3.99e-14, 0.005e-14);
  const double penalty = std::sqrt(2e7 / 1e-3) * bisect_q_inv(1e-7) / std::log(2.0);
  EXPECT_NEAR(penalty, 1.0608e6, 0.0001e6);
  const double rate_floor = nw * (std::pow(2.0, (1e6 + penalty) / 2e7) - 1.0);
  EXPECT_NEAR(uplink_rate_floor_trace(lp), rate_floor, 1e-9 * rate_floor);
  EXPECT_NEAR(rate_floor / nw, 0.0740, 0.0005);
  EXPECT_NEAR(uplink_snr_floor_trace(lp), 100.0 * nw, 1e-9 * nw);
  EXPECT_EQ(required_uplink_trace(lp), uplink_snr_floor_trace(lp));
}

TEST(RequiredTrace, RateFloorBindsWithoutSnrFloor) {
  LinkParams lp;
  lp.snr_th_db = -std::numeric_limits<double>::infinity();
  EXPECT_EQ(required_uplink_trace(lp), uplink_rate_floor_trace(lp));
}

TEST(RequiredTrace, RateFloorMeetsLatencyWithUnitDispersion) {
  LinkParams lp;
  const double tr = uplink_rate_floor_trace(lp);
  EXPECT_NEAR(uplink_rate_unit_dispersion(tr, lp.Du_s, lp), lp.Fu_bits / lp.Du_s, 1e-3);
}

TEST(CheckFeasible, ZeroSolutionFailsDownlink) {
  LinkParams lp;
  PowerSolution sol;
  sol.V = Eigen::MatrixXcd::Zero(2, 2);
  sol.p = 0.0;
  Eigen::VectorXcd h(2);
  h << 1e-6, 1e-6;
  const auto r = check_feasible(sol, h, 1e-10, lp);
  EXPECT_LT(r.downlink, 0.0);
  EXPECT_FALSE(r.ok());
}

TEST(CheckFeasible, FlagsPowerCaps) {
  LinkParams lp;
  Eigen::VectorXcd h(2);
  h << 1e-5, 0.0;
  PowerSolution sol;
  sol.V = Eigen::MatrixXcd::Zero(2, 2);
  sol.V(0, 0) = lp.pB_max_w + 1e-3;
  sol.p = 0.5;
  auto r = check_feasible(sol, h, 1e-10, lp);
  EXPECT_LT(r.bs_power, 0.0);
  EXPECT_GE(r.uav_power, 0.0);
  sol.V(0, 0) = 1.0;
  sol.p = lp.pv_max_w * 1.01;
  r = check_feasible(sol, h, 1e-10, lp);
  EXPECT_GE(r.bs_power, 0.0);
  EXPECT_LT(r.uav_power, 0.0);
}

TEST(CheckFeasible, SnrFloorUsesExactDispersion) {
  LinkParams lp;
  Eigen::VectorXcd h(1);
  h << std::sqrt(uplink_snr_floor_trace(lp));
  PowerSolution sol;
  sol.V = Eigen::MatrixXcd::Identity(1, 1);
  sol.p = 0.5;
  const auto r = check_feasible(sol, h, 1e-10, lp);
  EXPECT_NEAR(r.snr, 0.0, 1e-12);
  EXPECT_NEAR(r.dispersion, 1.0 - 1.0 / (101.0 * 101.0), 1e-12);
  EXPECT_GT(r.latency, 0.0);
  EXPECT_TRUE(r.ok());
}

TEST(LinkParams, Validation) {
  LinkParams lp;
  EXPECT_NO_THROW(lp.validate());
  lp.eps = 0.6;
  EXPECT_THROW(lp.validate(), std::invalid_argument);
  lp = LinkParams{};
  lp.W_hz = 0.0;
  EXPECT_THROW(lp.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace uavpc
