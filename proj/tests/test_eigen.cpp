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

#include <random>

#include <Eigen/Dense>

#include "uavpc/hermitian_eigen.hpp"

namespace uavpc {
namespace {

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return 0.5 * (a + a.adjoint());
}

Eigen::VectorXcd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
  return v;
}

void expect_decomposes(const Eigen::MatrixXcd& A, const HermitianEigen& e) {
  const int n = static_cast<int>(A.rows());
  const double scale = std::max(1.0, A.norm());
  ASSERT_EQ(e.values.size(), n);
  ASSERT_EQ(e.vectors.cols(), n);
  for (int i = 1; i < n; ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  EXPECT_LT((e.vectors.adjoint() * e.vectors - I).norm(), 1e-10);
  const Eigen::MatrixXcd rebuilt =
      e.vectors * e.values.cast<std::complex<double>>().asDiagonal() * e.vectors.adjoint();
  EXPECT_LT((rebuilt - A).norm(), 1e-10 * scale);
}

TEST(JacobiEigen, MatchesReferenceSolver) {
  std::mt19937_64 rng(17);
  for (int n : {1, 2, 3, 4, 8, 16}) {
    for (int rep = 0; rep < 20; ++rep) {
      const Eigen::MatrixXcd A = random_hermitian(n, rng);
      const HermitianEigen e = jacobi_eigen(A);
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(A);
      const Eigen::VectorXd want = ref.eigenvalues().reverse();
      EXPECT_LT((e.values - want).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, A.norm()));
      expect_decomposes(A, e);
    }
  }
}

TEST(JacobiEigen, RankOneRecoversDirection) {
  std::mt19937_64 rng(3);
  for (int n : {2, 4, 8, 16}) {
    const Eigen::VectorXcd h = random_vector(n, rng);
    const Eigen::MatrixXcd A = h * h.adjoint();
    const HermitianEigen e = jacobi_eigen(A);
    EXPECT_NEAR(e.values(0), h.squaredNorm(), 1e-10 * h.squaredNorm());
    for (int i = 1; i < n; ++i) EXPECT_NEAR(e.values(i), 0.0, 1e-10 * h.squaredNorm());
    const double overlap = std::abs(e.vectors.col(0).dot(h)) / h.norm();
    EXPECT_NEAR(overlap, 1.0, 1e-10);
    expect_decomposes(A, e);
  }
}

TEST(JacobiEigen, TinyScaleRankOne) {
  std::mt19937_64 rng(5);
  const Eigen::VectorXcd h = 1e-7 * random_vector(8, rng);
  const Eigen::MatrixXcd A = h * h.adjoint();
  const HermitianEigen e = jacobi_eigen(A);
  EXPECT_NEAR(e.values(0) / h.squaredNorm(), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(e.vectors.col(0).dot(h)) / h.norm(), 1.0, 1e-10);
}

TEST(JacobiEigen, DegenerateSpectrum) {
  std::mt19937_64 rng(9);
  for (int n : {2, 5, 8}) {
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    const HermitianEigen e = jacobi_eigen(3.0 * I);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(e.values(i), 3.0, 1e-14);
    expect_decomposes(3.0 * I, e);
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_hermitian(n, rng));
    const Eigen::MatrixXcd Q = qr.householderQ();
    Eigen::VectorXd d = Eigen::VectorXd::Constant(n, 1.0);
    d(0) = 2.0;
    const Eigen::MatrixXcd A = Q * d.cast<std::complex<double>>().asDiagonal() * Q.adjoint();
    const HermitianEigen f = jacobi_eigen(A);
    EXPECT_NEAR(f.values(0), 2.0, 1e-12);
    expect_decomposes(A, f);
  }
}

TEST(JacobiEigen, RealSymmetricInput) {
  Eigen::MatrixXcd A(2, 2);
  A << 2.0, 1.0, 1.0, 2.0;
  const HermitianEigen e = jacobi_eigen(A);
  EXPECT_NEAR(e.values(0), 3.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
}

}  // namespace
}  // namespace uavpc
