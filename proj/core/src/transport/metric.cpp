// Copyright 2026 qmstransport Authors
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

#include <algorithm>
#include <cmath>

#include "qmt/transport.hpp"
#include "transport_internal.hpp"

namespace qmt {

namespace detail {

Mat apply_metric(const DifferentialStructure& ds, const std::vector<OperatorSum2>& hat,
                 const Mat& A) {
  const int n = ds.algebra().ambient_dim();
  Mat out = Mat::Zero(n, n);
  for (int j = 0; j < ds.size(); ++j)
    out += partial_adjoint(ds, j, hat[j].contract(partial(ds, j, A)));
  return out;
}

RMat metric_matrix_from(const DifferentialStructure& ds, const std::vector<OperatorSum2>& hat) {
  const Algebra& alg = ds.algebra();
  RMat K = superop_from(alg, [&](const Mat& e) { return apply_metric(ds, hat, e); }).M;
  return 0.5 * (K + K.transpose());
}

PseudoSolve pseudo_solve(const RMat& K, const Vec& nu) {
  Eigen::SelfAdjointEigenSolver<RMat> es(K);
  const Vec& ev = es.eigenvalues();
  const double cut = 1e-11 * std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Vec c = es.eigenvectors().transpose() * nu;
  for (int k = 0; k < c.size(); ++k) c(k) = ev(k) > cut ? c(k) / ev(k) : 0.0;
  PseudoSolve out;
  out.x = es.eigenvectors() * c;
  out.residual = (K * out.x - nu).norm();
  return out;
}

}  // namespace detail

Mat metric_operator(const DifferentialStructure& ds, const ThetaAssignment& theta,
                    const Mat& rho, const Mat& A) {
  ds.require_validated();
  return detail::apply_metric(ds, rho_hat(ds, theta, rho), A);
}

RMat metric_matrix(const DifferentialStructure& ds, const ThetaAssignment& theta,
                   const Mat& rho) {
  ds.require_validated();
  return detail::metric_matrix_from(ds, rho_hat(ds, theta, rho));
}

Mat solve_continuity(const DifferentialStructure& ds, const ThetaAssignment& theta,
                     const Mat& rho, const Mat& nu) {
  const Algebra& alg = ds.algebra();
  Mat h = hermitize(nu, "source");
  if (!alg.contains(h)) throw Error("source not in algebra");
  if (min_eigenvalue(hermitize(rho, "state")) <= 0.0) throw Error("state not strictly positive");
  RMat K = metric_matrix(ds, theta, rho);
  Vec v = alg.real_coords(h);
  detail::PseudoSolve s = detail::pseudo_solve(K, v);
  if (s.residual > 1e-9 * std::max(1.0, v.norm())) throw Error("source not in divergence range");
  return alg.from_coords(s.x);
}

double action(const DifferentialStructure& ds, const ThetaAssignment& theta, const Mat& rho,
              const TangentField& B) {
  if (static_cast<int>(B.size()) != ds.size()) throw Error("tangent field shape mismatch");
  std::vector<OperatorSum2> chk = rho_check(ds, theta, rho);
  double s = 0.0;
  for (int j = 0; j < ds.size(); ++j)
    s += ds.direction(j).B.inner(B[j], chk[j].contract(B[j])).real();
  return s;
}

double norm_rho_sq(const DifferentialStructure& ds, const ThetaAssignment& theta,
                   const Mat& rho, const TangentField& B) {
  if (static_cast<int>(B.size()) != ds.size()) throw Error("tangent field shape mismatch");
  std::vector<OperatorSum2> hat = rho_hat(ds, theta, rho);
  double s = 0.0;
  for (int j = 0; j < ds.size(); ++j)
    s += ds.direction(j).B.inner(B[j], hat[j].contract(B[j])).real();
  return s;
}

double norm_rho(const DifferentialStructure& ds, const ThetaAssignment& theta,
                const Mat& rho, const TangentField& B) {
  return std::sqrt(std::max(0.0, norm_rho_sq(ds, theta, rho, B)));
}

double norm_minus1_rho(const DifferentialStructure& ds, const ThetaAssignment& theta,
                       const Mat& rho, const TangentField& B) {
  return std::sqrt(std::max(0.0, action(ds, theta, rho, B)));
}

double b2_norm(const DifferentialStructure& ds, const TangentField& B) {
  if (ds.size() == 0) throw Error("structure has no directions");
  if (static_cast<int>(B.size()) != ds.size()) throw Error("tangent field shape mismatch");
  double s = 0.0;
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Mat m = d.ell.adjoint(B[j] * B[j].adjoint()) + d.r.adjoint(B[j].adjoint() * B[j]);
    m = 0.5 * (m + m.adjoint());
    s += herm_eig(m).values.cwiseAbs().maxCoeff();
  }
  return std::sqrt(0.5 * s);
}

PhiForms metric_derivative_forms(const DifferentialStructure& ds, const ThetaAssignment& theta,
                                 const Mat& rho, const Mat& A) {
  ds.require_validated();
  if (theta.size() != ds.size()) throw Error("theta assignment does not match directions");
  const int n = ds.algebra().ambient_dim();
  PhiForms out{Mat::Zero(n, n), Mat::Zero(n, n)};
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Spectral L = spectral(d.ell(rho)), R = spectral(d.r(rho));
    Mat X = partial(ds, j, A);
    Mat yl = tree_left_dual(theta[j], L, R, X);
    Mat yr = tree_right_dual(theta[j], L, R, X);
    out.left += d.ell.adjoint(0.5 * (yl + yl.adjoint()));
    out.right += d.r.adjoint(0.5 * (yr + yr.adjoint()));
  }
  return out;
}

}  // namespace qmt
