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

#include <Eigen/Dense>

#include "uavpc/channel.hpp"
#include "uavpc/link.hpp"
#include "uavpc/power_solution.hpp"

namespace uavpc {

// One slot of the relaxed joint power-control problem:
//
//   maximize   phi / R_max - eta (p / p_v^max + tr(V) / p_B^max)
//   subject to W log2(1 + p g_dl / (N0 W)) >= phi,   phi >= R_e^th
//              tr(H V) >= c,  tr(V) <= p_B^max,  p <= p_v^max,  V >= 0
//
// with H = h h^H the BtU channel and c the binding uplink trace floor.
struct ConvexProblem {
  int K = 0;
  Eigen::VectorXcd h_ul;
  Eigen::MatrixXcd H_ul;
  double g_dl = 0.0;
  double uplink_trace = 0.0;  // c
  double R_max = 0.0;         // downlink rate at p_v^max
  LinkParams params;
};

ConvexProblem build_problem(const Eigen::VectorXcd& h_ul, double g_dl,
                            const LinkParams& params);
ConvexProblem build_problem(const ChannelVector& ul, const ChannelVector& dl,
                            const LinkParams& params);

// |sum_k h_k|^2, the downlink gain seen by the all-ones combiner.
double downlink_gain(const ChannelVector& dl);
Eigen::VectorXcd to_eigen(const std::vector<cdouble>& h);

// Value of the objective at (tr V, p, phi).
double relaxed_objective(const ConvexProblem& prob, double trace_v, double p,
                         double phi);

struct SolverOptions {
  int max_iterations = 150;
  double tolerance = 1e-9;  // scaled residuals and relative matrix-block gap
  // The (p, phi) block is nearly flat when p approaches p_v^max, so its gap
  // is driven much lower to pin p itself.
  double scalar_gap_tolerance = 1e-13;
  double step_fraction = 0.99;  // fraction-to-boundary
};

// Primal-dual interior-point solution of the relaxed problem, followed by
// rank-one beamformer extraction.
PowerSolution solve(const ConvexProblem& prob, const SolverOptions& opts = {});

struct OracleV {
  Eigen::MatrixXcd V;
  double trace = 0.0;
};

// Minimal-trace PSD matrix with h^H V h = c: (c / |h|^4) h h^H.
OracleV oracle_V(const Eigen::VectorXcd& h, double c);

struct OracleP {
  double p = 0.0;
  double phi = 0.0;
};

// Closed-form maximizer of the (p, phi) block.
OracleP oracle_p(double g_dl, const LinkParams& params);

struct Beamformer {
  Eigen::VectorXcd v;
  double tightness = 1.0;
};

// Principal eigenvector scaled by sqrt(lambda_max). The first nonzero entry
// of v is made real and non-negative.
Beamformer extract_beamformer(const Eigen::MatrixXcd& V);

// Energy utility evaluated with the realized downlink rate R_dl(p).
double energy_utility(const PowerSolution& sol, const ConvexProblem& prob);

}  // namespace uavpc
