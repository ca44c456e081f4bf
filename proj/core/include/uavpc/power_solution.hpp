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

#include <Eigen/Dense>

namespace uavpc {

enum class SolveStatus { Optimal, InfeasibleUplink, InfeasibleDownlink, MaxIterations };

const char* to_string(SolveStatus s);

// Optimized transmit covariance and powers for one slot.
struct PowerSolution {
  Eigen::MatrixXcd V;  // BS transmit covariance (W), K x K Hermitian PSD
  double p = 0.0;      // UAV transmit power (W)
  double phi = 0.0;    // auxiliary downlink rate (bit/s)
  Eigen::VectorXcd v;  // extracted beamformer, ||v||^2 = lambda_max(V)
  double E_eu = 0.0;
  double tightness = 1.0;  // lambda_max(V) / tr(V)
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIterations;

  // Interior-point diagnostics at termination.
  double duality_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;

  bool feasible() const { return status == SolveStatus::Optimal; }
  double trace_V() const { return V.size() == 0 ? 0.0 : V.trace().real(); }
};

}  // namespace uavpc
