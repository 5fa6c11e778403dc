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
#include <limits>

#include "../common/nelder_mead.hpp"
#include "qmt/entropyflow.hpp"

namespace qmt {

namespace {

struct TreeSide {
  std::vector<Spectral> L, R;
  std::vector<Mat> lnu, rnu;  // ell_j(L^dagger rho), r_j(L^dagger rho)
};

TreeSide tree_side(const DifferentialStructure& ds, const Mat& rho) {
  Mat nu = adjoint_generator_apply(ds, rho);
  TreeSide t;
  for (const Direction& d : ds.directions()) {
    t.L.push_back(spectral(d.ell(rho)));
    t.R.push_back(spectral(d.r(rho)));
    t.lnu.push_back(d.ell(nu));
    t.rnu.push_back(d.r(nu));
  }
  return t;
}

// sum_j tau_j[X_j* N^(eta) # Y_j] with X = grad A, Y = grad B.
cplx tree_term(const DifferentialStructure& ds, const ThetaAssignment& theta, const TreeSide& t,
               int eta, const Mat& A, const Mat& B) {
  cplx s = 0.0;
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Mat X = partial(ds, j, A), Y = partial(ds, j, B);
    Mat T = eta == 1 ? tree_left(theta[j], t.L[j], t.L[j], t.R[j], t.lnu[j], Y)
                     : tree_right(theta[j], t.L[j], t.R[j], t.R[j], t.rnu[j], Y);
    s += d.B.inner(X, T);
  }
  return s;
}

}  // namespace

HessianValue hessian_entropy(const DifferentialStructure& ds, const ThetaAssignment& theta,
                             const Mat& rho_in, const Mat& A) {
  ds.require_validated();
  const Algebra& alg = ds.algebra();
  Mat rho = hermitize(rho_in, "state");
  if (min_eigenvalue(rho) <= 0.0) throw Error("state not strictly positive");
  TreeSide t = tree_side(ds, rho);
  const double first = -alg.inner(generator_apply(ds, A), metric_operator(ds, theta, rho, A)).real();
  HessianValue h;
  h.eta1 = first + tree_term(ds, theta, t, 1, A, A).real();
  h.eta2 = first + tree_term(ds, theta, t, 2, A, A).real();
  return h;
}

double hessian_bilinear(const DifferentialStructure& ds, const ThetaAssignment& theta,
                        const Mat& rho, const Mat& A, const Mat& B) {
  const double p = hessian_entropy(ds, theta, rho, A + B).eta1;
  const double m = hessian_entropy(ds, theta, rho, A - B).eta1;
  return 0.25 * (p - m);
}

HessianPencil hessian_pencil(const DifferentialStructure& ds, const ThetaAssignment& theta,
                             const Mat& rho_in) {
  ds.require_validated();
  const Algebra& alg = ds.algebra();
  Mat rho = hermitize(rho_in, "state");
  if (min_eigenvalue(rho) <= 0.0) throw Error("state not strictly positive");
  std::vector<OperatorSum2> hat = rho_hat(ds, theta, rho);
  TreeSide t = tree_side(ds, rho);
  const int dim = alg.dim();
  const int n = alg.ambient_dim();
  HessianPencil P;
  P.metric = RMat(dim, dim);
  P.hess = RMat(dim, dim);
  std::vector<Mat> Ke(dim), Le(dim);
  auto apply_k = [&](const Mat& A) {
    Mat out = Mat::Zero(n, n);
    for (int j = 0; j < ds.size(); ++j)
      out += partial_adjoint(ds, j, hat[j].contract(partial(ds, j, A)));
    return out;
  };
  for (int b = 0; b < dim; ++b) {
    const Mat& e = alg.basis()[b];
    Mat ke = apply_k(e);
    Mat col = -0.5 * (adjoint_generator_apply(ds, ke) + apply_k(generator_apply(ds, e)));
    for (int j = 0; j < ds.size(); ++j) {
      Mat T = tree_left(theta[j], t.L[j], t.L[j], t.R[j], t.lnu[j], partial(ds, j, e));
      col += partial_adjoint(ds, j, T);
    }
    P.metric.col(b) = alg.real_coords(0.5 * (ke + ke.adjoint()));
    P.hess.col(b) = alg.coords(col).real();
  }
  P.metric = 0.5 * (P.metric + P.metric.transpose()).eval();
  P.hess = 0.5 * (P.hess + P.hess.transpose()).eval();
  return P;
}

RayleighMin rayleigh_minimum(const DifferentialStructure& ds, const ThetaAssignment& theta,
                             const Mat& rho) {
  HessianPencil P = hessian_pencil(ds, theta, rho);
  Eigen::SelfAdjointEigenSolver<RMat> ek(P.metric);
  const double top = ek.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<int> keep;
  for (int k = 0; k < ek.eigenvalues().size(); ++k)
    if (ek.eigenvalues()(k) > 1e-10 * top) keep.push_back(k);
  if (keep.empty()) throw Error("metric vanishes");
  RMat Z(P.metric.rows(), keep.size());
  for (size_t k = 0; k < keep.size(); ++k) Z.col(k) = ek.eigenvectors().col(keep[k]);
  RMat H = Z.transpose() * P.hess * Z, K = Z.transpose() * P.metric * Z;
  Eigen::GeneralizedSelfAdjointEigenSolver<RMat> ge(0.5 * (H + H.transpose()),
                                                    0.5 * (K + K.transpose()));
  RayleighMin out;
  out.value = ge.eigenvalues()(0);
  out.A = ds.algebra().from_coords(Vec(Z * ge.eigenvectors().col(0)));
  return out;
}

RicciEstimate ricci_scan(const DifferentialStructure& ds, const ThetaAssignment& theta,
                         const RicciScanOptions& opt) {
  ds.require_validated();
  if (!is_ergodic(ds)) throw Error("Ricci scan requires ergodicity");
  const Algebra& alg = ds.algebra();
  Rng rng(opt.seed);
  std::vector<RicciWitness> all;
  auto consider = [&](const Mat& rho) {
    RayleighMin r = rayleigh_minimum(ds, theta, rho);
    all.push_back({rho, r.A, r.value});
  };
  consider(ds.sigma());
  for (int k = 0; k < opt.samples; ++k) consider(random_state(alg, rng));
  for (int k = 0; k < opt.boundary_samples; ++k)
    consider(random_state(alg, rng, StateSampling{1e-6}));
  std::sort(all.begin(), all.end(),
            [](const RicciWitness& a, const RicciWitness& b) { return a.quotient < b.quotient; });
  RicciEstimate out;
  out.method = "rayleigh-scan";
  out.label = "estimate";
  out.scan_minimum = all.front().quotient;

  // Refinement over rho = exp(H) / tau[exp(H)], H orthogonal to the identity.
  const int d = alg.dim();
  Vec one = alg.identity_coords();
  RMat Proj = RMat::Identity(d, d) - one * one.transpose() / one.squaredNorm();
  Eigen::SelfAdjointEigenSolver<RMat> es(Proj);
  RMat Z = es.eigenvectors().rightCols(d - 1);
  auto state_of = [&](const Vec& x) {
    Mat H = alg.from_coords(Vec(Z * x));
    HermEig e = herm_eig(0.5 * (H + H.adjoint()));
    const double top = e.values.maxCoeff();
    Mat E = herm_func(e, [top](double v) { return std::exp(v - top); });
    return Mat(E / alg.trace(E).real());
  };
  std::vector<RicciWitness> refined;
  const int starts = std::min<int>(opt.refine, static_cast<int>(all.size()));
  for (int s = 0; s < starts; ++s) {
    Mat L = pos_log(all[s].rho, "state not strictly positive");
    Vec x0 = Z.transpose() * alg.real_coords(0.5 * (L + L.adjoint()));
    auto f = [&](const Vec& x) {
      try {
        Mat rho = state_of(x);
        if (min_eigenvalue(rho) <= 1e-13) return std::numeric_limits<double>::infinity();
        return rayleigh_minimum(ds, theta, rho).value;
      } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    detail::NelderMeadResult nm = detail::nelder_mead(f, x0, 0.3, opt.refine_evals);
    if (nm.f < all[s].quotient) {
      Mat rho = state_of(nm.x);
      RayleighMin r = rayleigh_minimum(ds, theta, rho);
      refined.push_back({rho, r.A, r.value});
    } else {
      refined.push_back(all[s]);
    }
  }
  std::sort(refined.begin(), refined.end(),
            [](const RicciWitness& a, const RicciWitness& b) { return a.quotient < b.quotient; });
  out.lambda_hat = std::min(out.scan_minimum, refined.empty() ? out.scan_minimum : refined.front().quotient);
  out.stable = out.scan_minimum - out.lambda_hat < 1e-6;
  out.witnesses = refined;
  return out;
}

IntertwiningResult intertwining_lambda(const DifferentialStructure& ds) {
  ds.require_validated();
  const Algebra& alg = ds.algebra();
  IntertwiningResult out;
  out.applicable = ds.size() > 0;
  for (const Direction& d : ds.directions())
    if (!d.B.same_as(alg)) out.applicable = false;
  if (!out.applicable) return out;
  const int dim = alg.dim();
  double num = 0.0, den = 0.0;
  std::vector<std::vector<Mat>> R(ds.size()), P(ds.size());
  for (int j = 0; j < ds.size(); ++j) {
    double nj = 0.0, dj = 0.0;
    for (int a = 0; a < dim; ++a) {
      const Mat& e = alg.basis()[a];
      Mat pe = partial(ds, j, e);
      Mat r = partial(ds, j, generator_apply(ds, e)) - generator_apply(ds, pe);
      nj -= alg.inner(pe, r).real();
      dj += alg.inner(pe, pe).real();
      R[j].push_back(r);
      P[j].push_back(pe);
    }
    num += nj;
    den += dj;
    out.per_direction.push_back(dj > 0.0 ? nj / dj : 0.0);
  }
  if (den <= 0.0) {
    out.applicable = false;
    return out;
  }
  const double lambda = num / den;
  out.fitted = lambda;
  for (int j = 0; j < ds.size(); ++j) {
    double err = 0.0, scale = 0.0;
    for (int a = 0; a < dim; ++a) {
      Mat gap = R[j][a] + lambda * P[j][a];
      err += alg.inner(gap, gap).real();
      scale += alg.inner(P[j][a], P[j][a]).real();
    }
    if (scale > 0.0) out.residual = std::max(out.residual, std::sqrt(err / scale));
  }
  if (out.residual < 1e-9) out.lambda = lambda;
  return out;
}

RicciEstimate ricci_estimate(const DifferentialStructure& ds, const ThetaAssignment& theta,
                             const RicciScanOptions& opt) {
  IntertwiningResult it = intertwining_lambda(ds);
  if (it.lambda && *it.lambda > 0.0) {
    RicciEstimate out;
    out.lambda_hat = *it.lambda;
    out.method = "intertwining";
    out.label = "certificate";
    out.residual = it.residual;
    out.scan_minimum = *it.lambda;
    out.stable = true;
    return out;
  }
  return ricci_scan(ds, theta, opt);
}

GradientEstimateReport gradient_estimate_check(const DifferentialStructure& ds,
                                               const ThetaAssignment& theta, double lambda,
                                               const Mat& rho, const Mat& A,
                                               const std::vector<double>& t_grid, double slack) {
  ds.require_validated();
  GradientEstimateReport rep;
  for (double t : t_grid) {
    GradientEstimatePoint p;
    p.t = t;
    p.lhs = norm_rho_sq(ds, theta, rho, gradient(ds, semigroup_apply(ds, t, A)));
    Mat rt = semigroup_dual_apply(ds, t, rho);
    p.rhs = std::exp(-2.0 * lambda * t) * norm_rho_sq(ds, theta, 0.5 * (rt + rt.adjoint()), gradient(ds, A));
    const double v = (p.lhs - p.rhs) / std::max(p.rhs, 1e-300);
    rep.max_violation = std::max(rep.max_violation, v);
    rep.points.push_back(p);
  }
  rep.holds = rep.max_violation <= slack;
  return rep;
}

ContractionResult contraction_check(const DifferentialStructure& ds,
                                    const ThetaAssignment& theta, double lambda,
                                    const Mat& rho0, const Mat& rho1, double t,
                                    const DistanceOptions& opt) {
  ds.require_validated();
  Mat a = semigroup_dual_apply(ds, t, rho0), b = semigroup_dual_apply(ds, t, rho1);
  DistanceResult after = distance(ds, theta, 0.5 * (a + a.adjoint()), 0.5 * (b + b.adjoint()), opt);
  DistanceResult before = distance(ds, theta, rho0, rho1, opt);
  ContractionResult out;
  out.lhs = after.extrapolated;
  out.rhs = std::exp(-lambda * t) * before.extrapolated;
  out.slack = 2.0 * (after.residual + before.residual);
  out.holds = out.lhs <= out.rhs + out.slack;
  return out;
}

}  // namespace qmt
