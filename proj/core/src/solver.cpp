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

#include "uavpc/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "uavpc/hermitian_eigen.hpp"

namespace uavpc {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::InfeasibleUplink: return "infeasible_uplink";
    case SolveStatus::InfeasibleDownlink: return "infeasible_downlink";
    case SolveStatus::MaxIterations: return "max_iterations";
  }
  return "unknown";
}

Eigen::VectorXcd to_eigen(const std::vector<cdouble>& h) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(h.size()));
  for (std::size_t k = 0; k < h.size(); ++k) v(static_cast<Eigen::Index>(k)) = h[k];
  return v;
}

double downlink_gain(const ChannelVector& dl) {
  cdouble sum{0.0, 0.0};
  for (const auto& hk : dl.h) sum += hk;
  return std::norm(sum);
}

ConvexProblem build_problem(const Eigen::VectorXcd& h_ul, double g_dl,
                            const LinkParams& params) {
  params.validate();
  ConvexProblem prob;
  prob.K = static_cast<int>(h_ul.size());
  prob.h_ul = h_ul;
  prob.H_ul = h_ul * h_ul.adjoint();
  prob.g_dl = std::max(0.0, g_dl);
  prob.uplink_trace = required_uplink_trace(params);
  prob.R_max = downlink_rate(params.pv_max_w, prob.g_dl, params);
  prob.params = params;
  return prob;
}

ConvexProblem build_problem(const ChannelVector& ul, const ChannelVector& dl,
                            const LinkParams& params) {
  if (ul.slot != dl.slot)
    throw std::invalid_argument("build_problem: channels belong to different slots");
  if (ul.dir != Direction::BtU || dl.dir != Direction::UtB)
    throw std::invalid_argument("build_problem: expected a BtU and a UtB channel");
  return build_problem(to_eigen(ul.h), downlink_gain(dl), params);
}

double relaxed_objective(const ConvexProblem& prob, double trace_v, double p,
                         double phi) {
  const auto& lp = prob.params;
  const double rate_term = prob.R_max > 0.0 ? phi / prob.R_max : 0.0;
  return rate_term - lp.eta * (p / lp.pv_max_w + trace_v / lp.pB_max_w);
}

namespace {

double frobenius_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.adjoint() * b).trace().real();
}

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& a) {
  return 0.5 * (a + a.adjoint());
}

// Largest alpha in (0, 1] with X + alpha dX still positive definite,
// scaled by `fraction`. X = L L^H.
double psd_step(const Eigen::LLT<Eigen::MatrixXcd>& chol,
                const Eigen::MatrixXcd& dX, double fraction) {
  if (chol.info() != Eigen::Success) return 0.0;
  const auto& L = chol.matrixL();
  Eigen::MatrixXcd m = L.solve(dX);
  m = L.solve(m.adjoint().eval()).adjoint().eval();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      hermitian_part(m), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -fraction) return 1.0;
  return -fraction / lmin;
}

// Scaled variables: V = v_scale * Vs, p = pv_max * ps, phi = R_max * fs.
// Constraints are written g_i(x) - s_i = 0 with s_i >= 0:
//   g0 = f(ps) - fs                      f(ps) = log1p(a ps) / log1p(a)
//   g1 = <Hs, Vs> - 1                    Hs = H / tr(H)
//   g2 = 1 - tr(Vs) / b3
//   g3 = 1 - ps
//   g4 = fs - rth
// and the objective to minimize is wv tr(Vs) + eta ps - fs.
//
// Pairs (Vs, Z), (s1, l1), (s2, l2) form the matrix block and (s0, l0),
// (s3, l3), (s4, l4) the scalar block. Each block follows its own central
// path parameter so the (much smaller) matrix-block objective is resolved to
// full relative accuracy.
struct Iterate {
  Eigen::MatrixXcd V;
  Eigen::MatrixXcd Z;
  double p = 0.0;
  double phi = 0.0;
  std::array<double, 5> s{};
  std::array<double, 5> lam{};
};

struct Direction7 {
  Eigen::MatrixXcd dV;
  Eigen::MatrixXcd dZ;
  double dp = 0.0;
  double dphi = 0.0;
  std::array<double, 5> ds{};
  std::array<double, 5> dlam{};
};

constexpr std::array<bool, 5> kMatrixBlock{false, true, true, false, false};

class InteriorPoint {
 public:
  InteriorPoint(const ConvexProblem& prob, const SolverOptions& opts)
      : prob_(prob), opts_(opts) {
    const auto& lp = prob.params;
    K_ = prob.K;
    hn2_ = prob.H_ul.trace().real();
    v_scale_ = prob.uplink_trace / hn2_;
    Hs_ = prob.H_ul / hn2_;
    b3_ = lp.pB_max_w / v_scale_;
    wv_ = lp.eta * v_scale_ / lp.pB_max_w;
    eta_ = lp.eta;
    a_ = lp.pv_max_w * prob.g_dl / lp.noise_power_w();
    log1pa_ = std::log1p(a_);
    rth_ = lp.Re_th_bps / prob.R_max;
    block_scale_ = std::max(wv_, 1e-300);
  }

  PowerSolution run();

 private:
  double f(double p) const { return std::log1p(a_ * p) / log1pa_; }
  double df(double p) const { return a_ / ((1.0 + a_ * p) * log1pa_); }
  double d2f(double p) const {
    const double q = 1.0 + a_ * p;
    return -a_ * a_ / (q * q * log1pa_);
  }

  std::array<double, 5> primal_residual(const Iterate& x) const {
    return {f(x.p) - x.phi - x.s[0],
            frobenius_inner(Hs_, x.V) - 1.0 - x.s[1],
            1.0 - x.V.trace().real() / b3_ - x.s[2],
            1.0 - x.p - x.s[3],
            x.phi - rth_ - x.s[4]};
  }

  Eigen::MatrixXcd dual_matrix_residual(const Iterate& x) const {
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(K_, K_);
    return (wv_ + x.lam[2] / b3_) * I - x.lam[1] * Hs_ - x.Z;
  }

  double mu_matrix(const Iterate& x) const {
    return (frobenius_inner(x.V, x.Z) + x.s[1] * x.lam[1] + x.s[2] * x.lam[2]) /
           (K_ + 2);
  }
  double mu_scalar(const Iterate& x) const {
    return (x.s[0] * x.lam[0] + x.s[3] * x.lam[3] + x.s[4] * x.lam[4]) / 3.0;
  }

  Direction7 newton(const Iterate& x, const Eigen::MatrixXcd& Zinv,
                    double target_matrix, double target_scalar) const;
  double max_step(const Iterate& x, const Direction7& d) const;
  static Iterate advance(const Iterate& x, const Direction7& d, double alpha);

  const ConvexProblem& prob_;
  SolverOptions opts_;
  int K_ = 0;
  double hn2_ = 0.0, v_scale_ = 0.0, b3_ = 0.0, wv_ = 0.0, eta_ = 0.0;
  double a_ = 0.0, log1pa_ = 0.0, rth_ = 0.0, block_scale_ = 1.0;
  Eigen::MatrixXcd Hs_;
};

Direction7 InteriorPoint::newton(const Iterate& x, const Eigen::MatrixXcd& Zinv,
                                 double target_matrix,
                                 double target_scalar) const {
  const auto r = primal_residual(x);
  const Eigen::MatrixXcd Rd = dual_matrix_residual(x);
  const double fp = df(x.p);
  const double r_p = eta_ - x.lam[0] * fp + x.lam[3];
  const double r_phi = -1.0 + x.lam[0] - x.lam[4];

  std::array<double, 5> e{};
  std::array<double, 5> dd{};
  for (int i = 0; i < 5; ++i) {
    const double target = kMatrixBlock[i] ? target_matrix : target_scalar;
    e[i] = (target - x.s[i] * x.lam[i]) / x.lam[i];
    dd[i] = x.s[i] / x.lam[i];
  }

  // dV = D0 + dl1 D1 + dl2 D2 (HKM direction with dZ eliminated).
  const Eigen::MatrixXcd VZi = x.V * Zinv;
  const Eigen::MatrixXcd D0 =
      target_matrix * Zinv - x.V - hermitian_part(x.V * Rd * Zinv);
  const Eigen::MatrixXcd D1 = hermitian_part(x.V * Hs_ * Zinv);
  const Eigen::MatrixXcd D2 = -hermitian_part(VZi) / b3_;

  // Unknowns: dp, dphi, dl0, dl1, dl2, dl3, dl4.
  Eigen::Matrix<double, 7, 7> A = Eigen::Matrix<double, 7, 7>::Zero();
  Eigen::Matrix<double, 7, 1> b;
  // p stationarity
  A(0, 0) = -x.lam[0] * d2f(x.p);
  A(0, 2) = -fp;
  A(0, 5) = 1.0;
  b(0) = -r_p;
  // phi stationarity
  A(1, 2) = 1.0;
  A(1, 6) = -1.0;
  b(1) = -r_phi;
  // g0
  A(2, 0) = fp;
  A(2, 1) = -1.0;
  A(2, 2) = dd[0];
  b(2) = -r[0] + e[0];
  // g1
  A(3, 3) = frobenius_inner(Hs_, D1) + dd[1];
  A(3, 4) = frobenius_inner(Hs_, D2);
  b(3) = -r[1] - frobenius_inner(Hs_, D0) + e[1];
  // g2
  A(4, 3) = -D1.trace().real() / b3_;
  A(4, 4) = -D2.trace().real() / b3_ + dd[2];
  b(4) = -r[2] + D0.trace().real() / b3_ + e[2];
  // g3
  A(5, 0) = -1.0;
  A(5, 5) = dd[3];
  b(5) = -r[3] + e[3];
  // g4
  A(6, 1) = 1.0;
  A(6, 6) = dd[4];
  b(6) = -r[4] + e[4];

  const Eigen::Matrix<double, 7, 1> u = A.fullPivLu().solve(b);

  Direction7 d;
  d.dp = u(0);
  d.dphi = u(1);
  for (int i = 0; i < 5; ++i) {
    d.dlam[i] = u(2 + i);
    d.ds[i] = e[i] - dd[i] * d.dlam[i];
  }
  d.dV = hermitian_part(D0 + d.dlam[1] * D1 + d.dlam[2] * D2);
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(K_, K_);
  d.dZ = hermitian_part(Rd - d.dlam[1] * Hs_ + (d.dlam[2] / b3_) * I);
  return d;
}

double InteriorPoint::max_step(const Iterate& x, const Direction7& d) const {
  const double frac = opts_.step_fraction;
  double alpha = 1.0;
  for (int i = 0; i < 5; ++i) {
    if (d.ds[i] < 0.0) alpha = std::min(alpha, -frac * x.s[i] / d.ds[i]);
    if (d.dlam[i] < 0.0) alpha = std::min(alpha, -frac * x.lam[i] / d.dlam[i]);
  }
  // keep 1 + a p > 0
  if (d.dp < 0.0) alpha = std::min(alpha, frac * (x.p + 1.0 / a_) / -d.dp);
  const Eigen::LLT<Eigen::MatrixXcd> cv(x.V);
  const Eigen::LLT<Eigen::MatrixXcd> cz(x.Z);
  alpha = std::min(alpha, psd_step(cv, d.dV, frac));
  alpha = std::min(alpha, psd_step(cz, d.dZ, frac));
  return alpha;
}

Iterate InteriorPoint::advance(const Iterate& x, const Direction7& d,
                               double alpha) {
  Iterate y = x;
  y.V = hermitian_part(x.V + alpha * d.dV);
  y.Z = hermitian_part(x.Z + alpha * d.dZ);
  y.p += alpha * d.dp;
  y.phi += alpha * d.dphi;
  for (int i = 0; i < 5; ++i) {
    y.s[i] += alpha * d.ds[i];
    y.lam[i] += alpha * d.dlam[i];
  }
  return y;
}

PowerSolution InteriorPoint::run() {
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(K_, K_);
  Iterate x;
  x.V = I;
  x.Z = block_scale_ * I;
  x.p = 0.5;
  x.phi = 0.5 * (f(0.5) + rth_);
  x.s = {1.0, 1.0, 1.0, 0.5, 1.0};
  x.lam = {2.0, block_scale_, block_scale_, 1.0, 1.0};

  PowerSolution sol;
  sol.status = SolveStatus::MaxIterations;
  const double tol = opts_.tolerance;
  const double gtol = opts_.scalar_gap_tolerance;
  int it = 0;
  double primal_res = 0.0, dual_res = 0.0;
  double res0 = 1.0, mu_m0 = 0.0, mu_s0 = 0.0;
  std::optional<Iterate> best;
  double best_gap = std::numeric_limits<double>::infinity();
  int best_it = 0;
  std::array<double, 2> best_res{};
  for (; it < opts_.max_iterations; ++it) {
    const auto r = primal_residual(x);
    primal_res = 0.0;
    for (double ri : r) primal_res = std::max(primal_res, std::abs(ri));
    const double r_p = eta_ - x.lam[0] * df(x.p) + x.lam[3];
    const double r_phi = -1.0 + x.lam[0] - x.lam[4];
    const double rd_matrix = dual_matrix_residual(x).norm() / block_scale_;
    dual_res = std::max({std::abs(r_p), std::abs(r_phi), rd_matrix});
    const double mu_m = mu_matrix(x);
    const double mu_s = mu_scalar(x);
    const double gap_m = (K_ + 2) * mu_m;
    const double gap_s = 3.0 * mu_s;
    const double matrix_obj = wv_ * std::max(x.V.trace().real(), 1.0);
    if (it == 0) {
      res0 = std::max({primal_res, dual_res, 1e-300});
      mu_m0 = mu_m;
      mu_s0 = mu_s;
    }

    const double scalar_obj = 1.0 + std::abs(x.phi - eta_ * x.p);
    const bool acceptable = primal_res <= tol && dual_res <= tol &&
                            gap_m <= tol * matrix_obj && gap_s <= tol * scalar_obj;
    if (acceptable && gap_s <= gtol * scalar_obj) {
      sol.status = SolveStatus::Optimal;
      break;
    }
    // Rounding can stall the scalar gap above gtol; fall back to the best
    // acceptable iterate once progress stops.
    if (acceptable && gap_s < best_gap) {
      best = x;
      best_gap = gap_s;
      best_it = it;
      best_res = {primal_res, dual_res};
    }
    if (best && it - best_it >= 8) break;

    const Eigen::LLT<Eigen::MatrixXcd> cz(x.Z);
    if (cz.info() != Eigen::Success) break;
    const Eigen::MatrixXcd Zinv = cz.solve(I);

    // Predictor: pure Newton step towards the optimality conditions.
    const Direction7 aff = newton(x, Zinv, 0.0, 0.0);
    const double alpha_aff = max_step(x, aff);
    const Iterate xa = advance(x, aff, alpha_aff);
    const double sigma_m = std::clamp(std::pow(mu_matrix(xa) / mu_m, 3.0), 0.0, 1.0);
    const double sigma_s = std::clamp(std::pow(mu_scalar(xa) / mu_s, 3.0), 0.0, 1.0);

    // A block that has already met its gap target is held there rather
    // than driven further, which would only degrade the conditioning of Z.
    const double floor_m = 0.1 * tol * matrix_obj / (K_ + 2);
    const double floor_s = 0.1 * gtol * scalar_obj / 3.0;
    // Complementarity may not fall faster than the infeasibility.
    const double infeas = std::max(primal_res, dual_res) / res0;
    const double target_m = std::max({sigma_m * mu_m, std::min(mu_m, floor_m), 0.1 * infeas * mu_m0});
    const double target_s = std::max({sigma_s * mu_s, std::min(mu_s, floor_s), 0.1 * infeas * mu_s0});
    const Direction7 d = newton(x, Zinv, target_m, target_s);
    const double alpha = max_step(x, d);
    x = advance(x, d, alpha);
  }

  if (sol.status != SolveStatus::Optimal && best) {
    x = *best;
    primal_res = best_res[0];
    dual_res = best_res[1];
    sol.status = SolveStatus::Optimal;
  }
  sol.iterations = it;
  sol.primal_residual = primal_res;
  sol.dual_residual = dual_res;
  // Gap of the scaled problem, in objective (E_eu) units.
  sol.duality_gap = (K_ + 2) * mu_matrix(x) + 3.0 * mu_scalar(x);
  sol.V = v_scale_ * hermitian_part(x.V);
  sol.p = prob_.params.pv_max_w * x.p;
  sol.phi = prob_.R_max * x.phi;
  return sol;
}

}  // namespace

PowerSolution solve(const ConvexProblem& prob, const SolverOptions& opts) {
  const auto& lp = prob.params;
  PowerSolution sol;
  const double hn2 = prob.H_ul.size() == 0 ? 0.0 : prob.H_ul.trace().real();
  if (prob.K < 1 || !(hn2 > 0.0) ||
      prob.uplink_trace > lp.pB_max_w * hn2) {
    sol.status = SolveStatus::InfeasibleUplink;
  } else if (!(prob.g_dl > 0.0) || prob.R_max < lp.Re_th_bps) {
    sol.status = SolveStatus::InfeasibleDownlink;
  }
  if (sol.status != SolveStatus::MaxIterations) {
    sol.V = Eigen::MatrixXcd::Zero(std::max(prob.K, 0), std::max(prob.K, 0));
    sol.v = Eigen::VectorXcd::Zero(std::max(prob.K, 0));
    return sol;
  }

  InteriorPoint ipm(prob, opts);
  sol = ipm.run();
  const Beamformer bf = extract_beamformer(sol.V);
  sol.v = bf.v;
  sol.tightness = bf.tightness;
  sol.E_eu = energy_utility(sol, prob);
  return sol;
}

OracleV oracle_V(const Eigen::VectorXcd& h, double c) {
  const double n2 = h.squaredNorm();
  if (!(n2 > 0.0)) throw std::domain_error("oracle_V: zero channel");
  if (c < 0.0) throw std::domain_error("oracle_V: negative trace floor");
  OracleV out;
  out.V = (c / (n2 * n2)) * (h * h.adjoint());
  out.trace = c / n2;
  return out;
}

OracleP oracle_p(double g_dl, const LinkParams& params) {
  const double noise = params.noise_power_w();
  const double r_max = downlink_rate(params.pv_max_w, g_dl, params);
  if (!(g_dl > 0.0) || r_max < params.Re_th_bps)
    throw std::domain_error("oracle_p: downlink infeasible");
  const double p_min =
      std::expm1(params.Re_th_bps / params.W_hz * std::numbers::ln2) * noise / g_dl;
  double p_stat = std::numeric_limits<double>::infinity();
  if (params.eta > 0.0)
    p_stat = params.W_hz * params.pv_max_w /
                 (params.eta * r_max * std::numbers::ln2) -
             noise / g_dl;
  OracleP out;
  out.p = std::clamp(p_stat, p_min, params.pv_max_w);
  out.phi = downlink_rate(out.p, g_dl, params);
  return out;
}

Beamformer extract_beamformer(const Eigen::MatrixXcd& V) {
  Beamformer bf;
  const Eigen::Index K = V.rows();
  const double tr = K == 0 ? 0.0 : V.trace().real();
  if (!(tr > 0.0)) {
    bf.v = Eigen::VectorXcd::Zero(K);
    bf.tightness = 1.0;
    return bf;
  }
  const HermitianEigen eig = jacobi_eigen(V);
  const double lmax = std::max(eig.values(0), 0.0);
  Eigen::VectorXcd v = std::sqrt(lmax) * eig.vectors.col(0);
  const double cutoff = 1e-12 * v.norm();
  for (Eigen::Index k = 0; k < K; ++k) {
    if (std::abs(v(k)) > cutoff) {
      v *= std::conj(v(k)) / std::abs(v(k));
      v(k) = std::abs(v(k));
      break;
    }
  }
  bf.v = v;
  bf.tightness = lmax / tr;
  return bf;
}

double energy_utility(const PowerSolution& sol, const ConvexProblem& prob) {
  const double rate = downlink_rate(sol.p, prob.g_dl, prob.params);
  return relaxed_objective(prob, sol.trace_V(), sol.p, rate);
}

}  // namespace uavpc
