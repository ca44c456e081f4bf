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

namespace uavpc {

struct HermitianEigen {
  Eigen::VectorXd values;    // descending
  Eigen::MatrixXcd vectors;  // column i pairs with values(i)
  int sweeps = 0;
};

// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations on
// its 2K x 2K real symmetric embedding [Re -Im; Im Re].
HermitianEigen jacobi_eigen(const Eigen::MatrixXcd& A, double tol = 1e-15,
                            int max_sweeps = 64);

}  // namespace uavpc
