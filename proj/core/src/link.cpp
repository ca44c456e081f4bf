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

#include "uavpc/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace uavpc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double relative_slack(double value, double bound) {
  if (bound == 0.0) return value >= 0.0 ? kInf : -kInf;
  return (value - bound) / std::abs(bound);
}

double dispersion_penalty(double dispersion, double tau_s,
                          const LinkParams& params) {
  return std::sqrt(params.W_hz * dispersion / tau_s) * q_inv(params.eps) *
         std::numbers::log2e;
}

}  // namespace

void LinkParams::validate() const {
  if (!(W_hz > 0.0 && N0_w_per_hz > 0.0 && Fu_bits > 0.0 && Du_s > 0.0 &&
        pB_max_w > 0.0 && pv_max_w > 0.0 && Tf_s > 0.0))
    throw std::invalid_argument("LinkParams: bandwidth, noise, packet, latency and power limits must be > 0");
  if (!(eps > 0.0 && eps < 0.5))
    throw std::invalid_argument("LinkParams: eps must lie in (0, 0.5)");
  if (!(Re_th_bps >= 0.0))
    throw std::invalid_argument("LinkParams: rate threshold must be >= 0");
  if (!(eta >= 0.0)) throw std::invalid_argument("LinkParams: eta must be >= 0");
  if (std::isnan(snr_th_db))
    throw std::invalid_argument("LinkParams: SNR threshold is NaN");
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inv(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::domain_error("q_inv: probability must lie in (0, 1)");
  double lo = -40.0;  // Q(lo) = 1
  double hi = 40.0;   // Q(hi) = 0
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (q_function(mid) > eps)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double channel_dispersion(double snr) {
  const double r = 1.0 / (1.0 + snr);
  return 1.0 - r * r;
}

double uplink_rate(double tr_hv, double tau_s, const LinkParams& params) {
  const double snr = tr_hv / params.noise_power_w();
  return params.W_hz * std::log2(1.0 + snr) -
         dispersion_penalty(channel_dispersion(snr), tau_s, params);
}

double uplink_rate_unit_dispersion(double tr_hv, double tau_s,
                                   const LinkParams& params) {
  const double snr = tr_hv / params.noise_power_w();
  return params.W_hz * std::log2(1.0 + snr) -
         dispersion_penalty(1.0, tau_s, params);
}

double downlink_rate(double p_w, double tr_hz, const LinkParams& params) {
  return params.W_hz * std::log2(1.0 + p_w * tr_hz / params.noise_power_w());
}

double uplink_rate_floor_trace(const LinkParams& params) {
  const double needed =
      params.Fu_bits / params.Du_s + dispersion_penalty(1.0, params.Du_s, params);
  return params.noise_power_w() *
         std::expm1(needed / params.W_hz * std::numbers::ln2);
}

double uplink_snr_floor_trace(const LinkParams& params) {
  return params.noise_power_w() * std::pow(10.0, params.snr_th_db / 10.0);
}

double required_uplink_trace(const LinkParams& params) {
  return std::max(uplink_rate_floor_trace(params), uplink_snr_floor_trace(params));
}

double FeasibilityReport::worst() const {
  return std::min({latency, snr, downlink, bs_power, uav_power});
}

FeasibilityReport check_feasible(const PowerSolution& sol,
                                 const Eigen::VectorXcd& h_ul, double g_dl,
                                 const LinkParams& params) {
  FeasibilityReport r;
  double tr_hv = 0.0;
  double tr_v = 0.0;
  if (sol.V.size() != 0) {
    if (sol.V.rows() != h_ul.size())
      throw std::invalid_argument("check_feasible: V and h_ul sizes differ");
    tr_hv = std::max(0.0, (h_ul.adjoint() * sol.V * h_ul)(0, 0).real());
    tr_v = sol.V.trace().real();
  }
  const double snr = tr_hv / params.noise_power_w();
  r.dispersion = channel_dispersion(snr);
  r.uplink_rate_bps = uplink_rate(tr_hv, params.Du_s, params);
  r.downlink_rate_bps = downlink_rate(sol.p, g_dl, params);

  r.latency = relative_slack(r.uplink_rate_bps, params.Fu_bits / params.Du_s);
  r.snr = relative_slack(tr_hv, uplink_snr_floor_trace(params));
  r.downlink = relative_slack(r.downlink_rate_bps, params.Re_th_bps);
  r.bs_power = (params.pB_max_w - tr_v) / params.pB_max_w;
  r.uav_power = (params.pv_max_w - sol.p) / params.pv_max_w;
  return r;
}

}  // namespace uavpc
