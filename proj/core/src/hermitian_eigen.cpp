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

#include "uavpc/hermitian_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace uavpc {

namespace {

// Cyclic Jacobi on a real symmetric matrix. On return `a` is (numerically)
// diagonal and the columns of `q` hold the eigenvectors.
int cyclic_jacobi(Eigen::MatrixXd& a, Eigen::MatrixXd& q, double tol,
                  int max_sweeps) {
  const Eigen::Index n = a.rows();
  q.setIdentity(n, n);
  const double scale = std::max(a.norm(), 1e-300);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(2.0 * off) <= tol * scale) break;

    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index r = p + 1; r < n; ++r) {
        const double apr = a(p, r);
        if (std::abs(apr) < 1e-300) continue;
        const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akr = a(k, r);
          a(k, p) = c * akp - s * akr;
          a(k, r) = s * akp + c * akr;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double ark = a(r, k);
          a(p, k) = c * apk - s * ark;
          a(r, k) = s * apk + c * ark;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double qkp = q(k, p);
          const double qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }
  return sweep;
}

}  // namespace

HermitianEigen jacobi_eigen(const Eigen::MatrixXcd& A, double tol,
                            int max_sweeps) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("jacobi_eigen: matrix must be square");
  const Eigen::Index K = A.rows();
  HermitianEigen out;
  if (K == 0) return out;

  const Eigen::MatrixXcd herm = 0.5 * (A + A.adjoint());
  Eigen::MatrixXd m(2 * K, 2 * K);
  m.topLeftCorner(K, K) = herm.real();
  m.topRightCorner(K, K) = -herm.imag();
  m.bottomLeftCorner(K, K) = herm.imag();
  m.bottomRightCorner(K, K) = herm.real();

  Eigen::MatrixXd q;
  out.sweeps = cyclic_jacobi(m, q, tol, max_sweeps);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(2 * K));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return m(i, i) > m(j, j);
  });

  // Every eigenvalue of the embedding appears twice, and each real
  // eigenvector (x; y) maps to the complex eigenvector x + iy. Walk the
  // real vectors in order and keep those that add a new complex direction.
  // The mapped vectors form a tight frame with constant 2, so while fewer
  // than K are kept some remaining residual exceeds sqrt(2 / (K + 1)).
  const double keep = 0.5 * std::sqrt(2.0 / static_cast<double>(K + 1));
  out.values.resize(K);
  out.vectors.resize(K, K);
  Eigen::Index found = 0;
  for (Eigen::Index idx : order) {
    if (found == K) break;
    Eigen::VectorXcd u(K);
    for (Eigen::Index k = 0; k < K; ++k) u(k) = {q(k, idx), q(K + k, idx)};
    for (Eigen::Index j = 0; j < found; ++j)
      u -= out.vectors.col(j).dot(u) * out.vectors.col(j);
    const double norm = u.norm();
    if (norm < keep) continue;
    out.vectors.col(found) = u / norm;
    out.values(found) = m(idx, idx);
    ++found;
  }
  if (found != K) throw std::runtime_error("jacobi_eigen: failed to recover a complex basis");
  return out;
}

}  // namespace uavpc
