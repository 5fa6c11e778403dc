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

#include <Eigen/Eigenvalues>

#include "qmt/matalg.hpp"

namespace qmt {

double rel_asymmetry(const Mat& A) {
  const double nrm = A.norm();
  if (nrm == 0.0) return 0.0;
  return (A - A.adjoint()).norm() / nrm;
}

Mat hermitize(const Mat& A, const std::string& what) {
  if (A.rows() != A.cols()) throw Error(what + " must be square");
  if (rel_asymmetry(A) > tol::hermitian)
    throw Error(what + " is not Hermitian");
  return 0.5 * (A + A.adjoint());
}

HermEig herm_eig(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A + A.adjoint()));
  if (es.info() != Eigen::Success) throw Error("eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat herm_func(const HermEig& e, const std::function<double(double)>& f) {
  Vec fv(e.values.size());
  for (int i = 0; i < e.values.size(); ++i) fv(i) = f(e.values(i));
  return e.vectors * fv.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

Mat herm_func(const Mat& A, const std::function<double(double)>& f) {
  return herm_func(herm_eig(A), f);
}

double min_eigenvalue(const Mat& A) { return herm_eig(A).values.minCoeff(); }

namespace {

void require_positive(const HermEig& e, const std::string& what) {
  const double top = std::max(e.values.cwiseAbs().maxCoeff(), 1.0);
  if (e.values.minCoeff() < tol::min_eig * top) throw Error(what);
}

}  // namespace

Mat pos_power(const Mat& sigma, double p, const std::string& what) {
  HermEig e = herm_eig(sigma);
  require_positive(e, what);
  return herm_func(e, [p](double x) { return std::pow(x, p); });
}

Mat pos_log(const Mat& rho, const std::string& what) {
  HermEig e = herm_eig(rho);
  require_positive(e, what);
  return herm_func(e, [](double x) { return std::log(x); });
}

double log_mean(double x, double y) {
  if (x <= 0.0 || y <= 0.0) return 0.0;
  const double u = std::log(x / y);
  if (std::abs(u) < 1e-4) return y * (1.0 + u * (0.5 + u * (1.0 / 6.0 + u / 24.0)));
  return y * std::expm1(u) / u;
}

double dlog(double x, double y) {
  if (x <= 0.0 || y <= 0.0) throw Error("singular reference state");
  return 1.0 / log_mean(x, y);
}

std::string InnerProductKind::name() const {
  switch (tag) {
    case InnerTag::gns:
      return "GNS";
    case InnerTag::kms:
      return "KMS";
    case InnerTag::bkm:
      return "BKM";
    case InnerTag::s_family:
      return "s=" + std::to_string(s);
  }
  return "?";
}

cplx s_inner(const Algebra& alg, const Mat& sigma, double s, const Mat& A,
             const Mat& B) {
  if (s < 0.0 || s > 1.0) throw Error("s must lie in [0,1]");
  Mat sig = hermitize(sigma, "reference state");
  Mat left, right;
  if (s == 0.0) {
    left = Mat::Identity(sig.rows(), sig.cols());
    right = sig;
  } else if (s == 1.0) {
    left = sig;
    right = Mat::Identity(sig.rows(), sig.cols());
  } else {
    left = pos_power(sig, s);
    right = pos_power(sig, 1.0 - s);
  }
  return alg.inner(A, left * B * right);
}

namespace {

Mat spectral_multiply(const Mat& sigma, const Mat& A,
                      double (*coef)(double, double)) {
  HermEig e = herm_eig(hermitize(sigma, "reference state"));
  require_positive(e, "singular reference state");
  Mat t = e.vectors.adjoint() * A * e.vectors;
  for (int i = 0; i < t.rows(); ++i)
    for (int k = 0; k < t.cols(); ++k) t(i, k) *= coef(e.values(i), e.values(k));
  return e.vectors * t * e.vectors.adjoint();
}

}  // namespace

Mat bkm_map(const Mat& sigma, const Mat& A) {
  return spectral_multiply(sigma, A, &log_mean);
}

Mat bkm_inverse(const Mat& sigma, const Mat& A) {
  return spectral_multiply(sigma, A, &dlog);
}

cplx bkm_inner(const Algebra& alg, const Mat& sigma, const Mat& A,
               const Mat& B) {
  return alg.inner(A, bkm_map(sigma, B));
}

Mat relative_modular(const Mat& sigma, const Mat& rho, const Mat& A) {
  Mat rinv = pos_power(hermitize(rho, "state"), -1.0,
                       "singular state in modular operator");
  HermEig es = herm_eig(hermitize(sigma, "reference state"));
  require_positive(es, "singular state in modular operator");
  return sigma * A * rinv;
}

MoreauParts moreau_kms(const Mat& sigma, const Mat& X) {
  if (X.rows() != X.cols() || rel_asymmetry(X) > tol::hermitian)
    throw Error("Moreau requires self-adjoint input");
  Mat h = 0.5 * (X + X.adjoint());
  HermEig es = herm_eig(hermitize(sigma, "reference state"));
  require_positive(es, "singular reference state");
  Mat q = herm_func(es, [](double x) { return std::pow(x, 0.25); });
  Mat qi = herm_func(es, [](double x) { return std::pow(x, -0.25); });
  HermEig ey = herm_eig(q * h * q);
  Mat yp = herm_func(ey, [](double x) { return x > 0.0 ? x : 0.0; });
  Mat ym = herm_func(ey, [](double x) { return x < 0.0 ? -x : 0.0; });
  return {qi * yp * qi, qi * ym * qi};
}

Superop superop_from(const Algebra& alg,
                     const std::function<Mat(const Mat&)>& map,
                     const std::string& meta) {
  const int d = alg.dim();
  Superop K;
  K.M.resize(d, d);
  K.meta = meta;
  for (int b = 0; b < d; ++b) {
    CVec c = alg.coords(map(alg.basis()[b]));
    K.M.col(b) = c.real();
    const double scale = std::max(1.0, c.norm());
    K.imag_residual = std::max(K.imag_residual, c.imag().norm() / scale);
  }
  return K;
}

Mat superop_apply(const Algebra& alg, const Superop& K, const Mat& A) {
  CVec c = alg.coords(A);
  return alg.from_coords(CVec(K.M.cast<cplx>() * c));
}

Mat complex_superop(const Algebra& alg,
                    const std::function<Mat(const Mat&)>& map) {
  const int d = alg.dim();
  Mat out(d, d);
  for (int b = 0; b < d; ++b) out.col(b) = alg.coords(map(alg.basis()[b]));
  return out;
}

Mat gram(const Algebra& alg, const Mat& sigma, InnerProductKind kind) {
  Mat sig = hermitize(sigma, "reference state");
  if (kind.tag == InnerTag::bkm) {
    HermEig e = herm_eig(sig);
    require_positive(e, "singular reference state");
    return complex_superop(alg, [&](const Mat& A) { return bkm_map(sig, A); });
  }
  const double s = kind.tag == InnerTag::gns ? 0.0
                   : kind.tag == InnerTag::kms ? 0.5
                                               : kind.s;
  if (s < 0.0 || s > 1.0) throw Error("s must lie in [0,1]");
  const int n = alg.ambient_dim();
  Mat left = s == 0.0 ? Mat(Mat::Identity(n, n)) : pos_power(sig, s);
  Mat right = s == 1.0 ? Mat(Mat::Identity(n, n)) : pos_power(sig, 1.0 - s);
  return complex_superop(alg, [&](const Mat& A) { return Mat(left * A * right); });
}

double selfadjoint_residual(const RMat& M, const Mat& G) {
  Mat Mc = M.cast<cplx>();
  const double denom = std::max(M.norm() * G.norm(), 1e-300);
  return (Mc.transpose() * G - G * Mc).norm() / denom;
}

double selfadjoint_residual(const Algebra& alg, const Mat& sigma,
                            const Superop& K, InnerProductKind kind) {
  return selfadjoint_residual(K.M, gram(alg, sigma, kind));
}

double modular_commutator_residual(const Algebra& alg, const Mat& sigma,
                                   const Superop& K) {
  Mat sig = hermitize(sigma, "reference state");
  Mat sinv = pos_power(sig, -1.0);
  Mat D = complex_superop(alg, [&](const Mat& A) { return Mat(sig * A * sinv); });
  Mat Kc = K.M.cast<cplx>();
  const double denom = std::max(K.M.norm() * D.norm(), 1e-300);
  return (Kc * D - D * Kc).norm() / denom;
}

Superop kms_tilde_map(const Algebra& alg, const Mat& sigma, const Superop& P) {
  Mat one = alg.identity();
  Mat p1 = superop_apply(alg, P, one);
  if ((p1 - one).norm() > 1e-9 * one.norm()) throw Error("non-unital input map");
  Mat sig = hermitize(sigma, "reference state");
  Mat half = pos_power(sig, 0.5);
  return superop_from(
      alg,
      [&](const Mat& A) {
        return bkm_inverse(sig, half * superop_apply(alg, P, A) * half);
      },
      "kms-tilde");
}

Mat choi_matrix(int n, const std::function<Mat(const Mat&)>& map) {
  Mat C = Mat::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = 1.0;
      C.block(i * n, j * n, n, n) = map(e);
    }
  }
  return C;
}

Mat choi_matrix(const Algebra& alg, const Superop& K) {
  return choi_matrix(alg.ambient_dim(), [&](const Mat& A) {
    return superop_apply(alg, K, alg.project(A));
  });
}

}  // namespace qmt
