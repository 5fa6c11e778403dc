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

#include "../common/lbfgs.hpp"
#include "qmt/transport.hpp"

namespace qmt {

namespace {

Mat square_term(const Direction& d, const Mat& X, const Mat& Y) {
  // Symmetric bilinear part: l^dagger(X Y*) + r^dagger(X* Y).
  return d.ell.adjoint(X * Y.adjoint()) + d.r.adjoint(X.adjoint() * Y);
}

double b2_sq_of(const DifferentialStructure& ds, const Mat& A) {
  double s = 0.0;
  for (int j = 0; j < ds.size(); ++j) {
    Mat X = partial(ds, j, A);
    Mat m = square_term(ds.direction(j), X, X);
    s += herm_eig(0.5 * (m + m.adjoint())).values.cwiseAbs().maxCoeff();
  }
  return 0.5 * s;
}

// Smoothed 1/2 sum_j lambda_max(M_j(A)) with its gradient in the coordinates c,
// A = base + Z c.
double smoothed(const DifferentialStructure& ds, const RMat& Z, const Vec& base,
                const std::vector<std::vector<Mat>>& dparts, double mu, const Vec& c, Vec& g) {
  const Algebra& alg = ds.algebra();
  Vec x = base + Z * c;
  Mat A = alg.from_coords(x);
  double f = 0.0;
  Vec gx = Vec::Zero(x.size());
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Mat X = partial(ds, j, A);
    Mat m = square_term(d, X, X);
    HermEig e = herm_eig(0.5 * (m + m.adjoint()));
    const double top = e.values.maxCoeff();
    Vec w = ((e.values.array() - top) / mu).exp();
    const double z = w.sum();
    f += top + mu * std::log(z);
    w /= z;
    Mat P = e.vectors * w.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    for (int a = 0; a < alg.dim(); ++a) {
      const Mat& Xa = dparts[j][a];
      Mat dm = square_term(d, Xa, X);
      dm += dm.adjoint().eval();
      gx(a) += (P.cwiseProduct(dm.transpose())).sum().real();
    }
  }
  g = 0.5 * Z.transpose() * gx;
  return 0.5 * f;
}

}  // namespace

W1Result w1(const DifferentialStructure& ds, const Mat& rho0, const Mat& rho1) {
  ds.require_validated();
  if (ds.size() == 0) throw Error("structure has no directions");
  const Algebra& alg = ds.algebra();
  const int d = alg.dim();
  Mat nu = hermitize(rho1 - rho0, "state difference");
  Vec v = alg.real_coords(nu);
  W1Result out;
  out.potential = Mat::Zero(alg.ambient_dim(), alg.ambient_dim());
  if (v.norm() < 1e-14) return out;

  // Orthonormal basis of the complement of span{1, nu}.
  Vec one = alg.identity_coords();
  RMat F(d, 2);
  F.col(0) = one.normalized();
  F.col(1) = v - v.dot(F.col(0)) * F.col(0);
  if (F.col(1).norm() < 1e-14) throw Error("state difference must be trace free");
  F.col(1).normalize();
  RMat P = RMat::Identity(d, d) - F * F.transpose();
  Eigen::SelfAdjointEigenSolver<RMat> es(P);
  RMat Z = es.eigenvectors().rightCols(std::max(0, d - 2));
  const Vec base = v / v.squaredNorm();

  std::vector<std::vector<Mat>> dparts(ds.size());
  for (int j = 0; j < ds.size(); ++j)
    for (int a = 0; a < d; ++a) dparts[j].push_back(partial(ds, j, alg.basis()[a]));

  // Start from the sign potential of nu.
  Mat s = herm_func(nu, [](double x) { return x > 0 ? 1.0 : x < 0 ? -1.0 : 0.0; });
  Vec sx = alg.real_coords(alg.project(s));
  const double tn = sx.dot(v);
  Vec c = Vec::Zero(Z.cols());
  if (tn > 1e-14) c = Z.transpose() * (sx / tn - base);

  double best_g = b2_sq_of(ds, alg.from_coords(Vec(base + Z * c)));
  Vec best_c = c;
  if (Z.cols() > 0) {
    const double scale = std::max(best_g, 1e-300);
    for (double mu = 1e-1 * scale; mu >= 1e-9 * scale; mu *= 0.1) {
      detail::LbfgsOptions lo;
      lo.max_iter = 400;
      lo.rel_tol = 1e-14;
      detail::Objective fn = [&](const Vec& cc, Vec& g) {
        return smoothed(ds, Z, base, dparts, mu, cc, g);
      };
      detail::LbfgsResult r = detail::lbfgs(fn, c, lo);
      c = r.x;
      out.iterations += r.iterations;
      const double gv = b2_sq_of(ds, alg.from_coords(Vec(base + Z * c)));
      if (gv < best_g) best_g = gv, best_c = c;
    }
  }
  if (!(best_g > 0.0)) throw Error("state difference not detected by the gradient");
  const double norm = std::sqrt(best_g);
  out.value = 1.0 / norm;
  out.potential = alg.from_coords(Vec((base + Z * best_c) / norm));
  return out;
}

ComparisonConstants comparison_constants(const DifferentialStructure& ds,
                                         const ThetaAssignment& theta, int samples,
                                         std::uint64_t seed) {
  ds.require_validated();
  if (ds.size() == 0) throw Error("structure has no directions");
  const Algebra& alg = ds.algebra();
  Rng rng(seed);
  ComparisonConstants out;
  out.samples = samples;
  out.M_is_one = check_theta(ds, theta).arithmetic_bound;

  auto random_field = [&]() {
    TangentField B;
    for (const Direction& d : ds.directions()) {
      const int m = d.B.ambient_dim();
      B.push_back(d.B.project(random_ginibre(m, m, rng)));
    }
    return B;
  };
  auto ratio = [&](const Mat& rho, const TangentField& B) {
    const double b2 = b2_norm(ds, B);
    return b2 > 1e-300 ? norm_rho(ds, theta, rho, B) / b2 : 0.0;
  };
  auto perturb_field = [&](const TangentField& B, double h) {
    TangentField C = B;
    for (int j = 0; j < ds.size(); ++j) {
      const int m = ds.direction(j).B.ambient_dim();
      C[j] += h * ds.direction(j).B.project(random_ginibre(m, m, rng)) * B[j].norm();
    }
    return C;
  };

  Mat best_rho;
  TangentField best_B;
  double best = -1.0;
  for (int k = 0; k < samples; ++k) {
    StateSampling ss;
    if (k % 4 == 3) ss.boundary_eig = 1e-4;
    Mat rho = random_state(alg, rng, ss);
    TangentField B = random_field();
    const double q = ratio(rho, B);
    if (q > best) best = q, best_rho = rho, best_B = B;
  }
  for (int it = 0; it < 4 * samples; ++it) {
    const double h = 0.3 * std::pow(0.5, it / samples);
    TangentField B = perturb_field(best_B, h);
    const double q = ratio(best_rho, B);
    if (q > best) best = q, best_B = B;
  }
  out.M = out.M_is_one ? std::max(1.0, best) : best;

  // N over the extreme points of the unit ball: Hermitian unitaries and unitaries.
  auto grad_b2 = [&](const Mat& A) { return std::sqrt(b2_sq_of(ds, A)); };
  double bestN = 0.0;
  Mat bestH;
  auto try_h = [&](const Mat& H) {
    Spectral sp = spectral(H);
    const int K = sp.clusters();
    std::vector<Mat> E;
    for (int k = 0; k < K; ++k) E.push_back(sp.projector(k));
    const int patterns = K <= 10 ? (1 << K) : 256;
    std::uniform_int_distribution<long> pick(0, (1L << std::min(K, 30)) - 1);
    double top = 0.0;
    for (int p = 0; p < patterns; ++p) {
      const long bits = K <= 10 ? p : pick(rng);
      Mat A = Mat::Zero(H.rows(), H.cols());
      for (int k = 0; k < K; ++k) A += ((bits >> k) & 1 ? 1.0 : -1.0) * E[k];
      top = std::max(top, grad_b2(A));
    }
    Mat U = herm_func(H, [](double x) { return std::cos(x); }).cast<cplx>() +
            cplx(0, 1) * herm_func(H, [](double x) { return std::sin(x); });
    top = std::max(top, grad_b2(alg.project(U)));
    return top;
  };
  for (int k = 0; k < samples; ++k) {
    Mat H = random_hermitian(alg, rng);
    const double q = try_h(H);
    if (q > bestN) bestN = q, bestH = H;
  }
  for (int it = 0; it < samples; ++it) {
    const double h = 0.3 * std::pow(0.5, 4.0 * it / samples);
    Mat H = bestH + h * random_hermitian(alg, rng);
    const double q = try_h(H);
    if (q > bestN) bestN = q, bestH = H;
  }
  out.N = bestN;
  return out;
}

MetricComparison compare_metrics(const DifferentialStructure& a, const DifferentialStructure& b,
                                 const std::vector<Mat>& states, const DistanceOptions& opt) {
  if (!a.algebra().same_as(b.algebra())) throw Error("structures live on different algebras");
  MetricComparison out;
  const RMat& La = a.generator().M;
  const RMat& Lb = b.generator().M;
  out.generator_gap = (La - Lb).norm() / std::max(La.norm(), 1e-300);
  const int k = static_cast<int>(states.size());
  out.first = RMat::Zero(k, k);
  out.second = RMat::Zero(k, k);
  ThetaAssignment ta = ThetaAssignment::default_for(a), tb = ThetaAssignment::default_for(b);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      out.first(i, j) = out.first(j, i) = distance(a, ta, states[i], states[j], opt).extrapolated;
      out.second(i, j) = out.second(j, i) = distance(b, tb, states[i], states[j], opt).extrapolated;
      const double m = std::max(out.first(i, j), out.second(i, j));
      if (m > 0.0)
        out.max_relative_difference =
            std::max(out.max_relative_difference, std::abs(out.first(i, j) - out.second(i, j)) / m);
    }
  return out;
}

}  // namespace qmt
