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

#include <cmath>

#include <Eigen/Dense>

#include "uavpc/power_solution.hpp"

namespace uavpc {

struct LinkParams {
  double W_hz = 2e7;
  double N0_w_per_hz = 1.9952623149688828e-21;  // -177 dBm/Hz
  double Fu_bits = 1000.0;
  double Du_s = 1e-3;
  double eps = 1e-7;
  double snr_th_db = 20.0;
  double Re_th_bps = 1e7;
  double pB_max_w = 5.0;
  double pv_max_w = 1.0;
  double Tf_s = 5.0;
  double eta = 0.5;

  double noise_power_w() const { return N0_w_per_hz * W_hz; }
  void set_noise_dbm_per_hz(double dbm) {
    N0_w_per_hz = std::pow(10.0, dbm / 10.0) * 1e-3;
  }
  void validate() const;
};

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

// Inverse of Q on (0, 1), bracketed bisection on erfc.
double q_inv(double eps);

// Channel dispersion 1 - (1 + snr)^-2.
double channel_dispersion(double snr);

// Finite-blocklength uplink rate (bit/s) at received power tr_hv = tr(H V)
// and latency tau. Uses the exact dispersion; may be negative at low SNR.
double uplink_rate(double tr_hv, double tau_s, const LinkParams& params);

// Same rate with the dispersion fixed to one.
double uplink_rate_unit_dispersion(double tr_hv, double tau_s,
                                   const LinkParams& params);

// Shannon downlink rate for UAV power p and combined gain tr(H_vB Z).
double downlink_rate(double p_w, double tr_hz, const LinkParams& params);

// Smallest tr(H V) meeting the latency constraint with unit dispersion.
double uplink_rate_floor_trace(const LinkParams& params);
// tr(H V) giving exactly the SNR threshold.
double uplink_snr_floor_trace(const LinkParams& params);
// The binding (larger) of the two floors.
double required_uplink_trace(const LinkParams& params);

struct FeasibilityReport {
  // Relative slacks; negative means violated.
  double latency = 0.0;   // R_ul(D_u) vs F_u / D_u, exact dispersion
  double snr = 0.0;       // tr(H V) vs SNR floor
  double downlink = 0.0;  // R_dl vs R_e^th
  double bs_power = 0.0;  // p_B^max vs tr(V)
  double uav_power = 0.0; // p_v^max vs p
  double uplink_rate_bps = 0.0;
  double downlink_rate_bps = 0.0;
  double dispersion = 0.0;

  double worst() const;
  bool ok(double tol = 1e-9) const { return worst() >= -tol; }
};

// Evaluates the latency, SNR, downlink-rate and power constraints of `sol`
// on the channel h_ul (BtU) and downlink gain g_dl = |sum_k h_k^v|^2.
FeasibilityReport check_feasible(const PowerSolution& sol,
                                 const Eigen::VectorXcd& h_ul, double g_dl,
                                 const LinkParams& params);

}  // namespace uavpc
