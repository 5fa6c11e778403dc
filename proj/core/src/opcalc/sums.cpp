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

#include "qmt/opcalc.hpp"

namespace qmt {

Mat Spectral::projector(int k) const {
  const int n = size();
  Mat P = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    if (label[i] == k) P += vectors.col(i) * vectors.col(i).adjoint();
  return P;
}

Mat Spectral::reconstruct() const {
  return apply([](double x) { return x; });
}

Mat Spectral::apply(const std::function<double(double)>& f) const {
  Vec fv(clusters());
  for (int k = 0; k < clusters(); ++k) fv(k) = f(values(k));
  CVec col(size());
  for (int i = 0; i < size(); ++i) col(i) = fv(label[i]);
  return vectors * col.asDiagonal() * vectors.adjoint();
}

Spectral spectral(const Mat& A, double tol) {
  if (A.rows() != A.cols() || rel_asymmetry(A) > tol::hermitian)
    throw Error("spectral decomposition requires Hermitian input");
  HermEig e = herm_eig(A);
  const int n = static_cast<int>(e.values.size());
  Spectral s;
  s.vectors = e.vectors;
  s.label.assign(n, 0);
  if (n == 0) return s;
  const double scale = e.values.cwiseAbs().maxCoeff();
  std::vector<double> sums;
  std::vector<int> counts;
  double start = e.values(0);
  sums.push_back(e.values(0));
  counts.push_back(1);
  for (int i = 1; i < n; ++i) {
    if (e.values(i) - start <= tol * scale) {
      sums.back() += e.values(i);
      counts.back() += 1;
    } else {
      start = e.values(i);
      sums.push_back(e.values(i));
      counts.push_back(1);
    }
    s.label[i] = static_cast<int>(sums.size()) - 1;
  }
  s.values.resize(static_cast<int>(sums.size()));
  for (size_t k = 0; k < sums.size(); ++k) s.values(k) = sums[k] / counts[k];
  return s;
}

// ---------------------------------------------------------------------------

namespace {

RMat expand(const RMat& c, const std::vector<int>& li, const std::vector<int>& lk) {
  RMat w(li.size(), lk.size());
  for (size_t i = 0; i < li.size(); ++i)
    for (size_t k = 0; k < lk.size(); ++k) w(i, k) = c(li[i], lk[k]);
  return w;
}

bool close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

}  // namespace

Mat OperatorSum2::contract(const Mat& C) const {
  Mat t = left.vectors.adjoint() * C * right.vectors;
  RMat w = expand(coeffs, left.label, right.label);
  t = t.cwiseProduct(w.cast<cplx>());
  return left.vectors * t * right.vectors.adjoint();
}

OperatorSum2 OperatorSum2::times(const OperatorSum2& other) const {
  if (coeffs.rows() != other.coeffs.rows() || coeffs.cols() != other.coeffs.cols())
    throw Error("operator sums live on different spectral grids");
  OperatorSum2 out = *this;
  out.coeffs = coeffs.cwiseProduct(other.coeffs);
  return out;
}

OperatorSum2 OperatorSum2::map(const std::function<double(double)>& f) const {
  OperatorSum2 out = *this;
  out.coeffs = coeffs.unaryExpr(f);
  return out;
}

OperatorSum2 make_sum(const Spectral& A, const Spectral& B,
                      const std::function<double(double, double)>& c) {
  OperatorSum2 s{A, B, RMat(A.clusters(), B.clusters())};
  for (int i = 0; i < A.clusters(); ++i)
    for (int k = 0; k < B.clusters(); ++k) s.coeffs(i, k) = c(A.values(i), B.values(k));
  return s;
}

OperatorSum2 doubsum(const MeanFunction& theta, const Spectral& A,
                     const Spectral& B) {
  return make_sum(A, B, [&](double x, double y) { return theta(x, y); });
}

OperatorSum2 doubsum(const MeanFunction& theta, const Mat& A, const Mat& B) {
  return doubsum(theta, spectral(A), spectral(B));
}

// ---------------------------------------------------------------------------

ScalarFunction ScalarFunction::identity() {
  return {[](double x) { return x; }, [](double) { return 1.0; },
          [](double) { return 0.0; }, "identity"};
}

ScalarFunction ScalarFunction::log() {
  return {[](double x) {
            if (!(x > 0.0)) throw Error("log undefined on spectrum");
            return std::log(x);
          },
          [](double x) { return 1.0 / x; }, [](double x) { return -1.0 / (x * x); },
          "log"};
}

ScalarFunction ScalarFunction::exp() {
  return {[](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
          [](double x) { return std::exp(x); }, "exp"};
}

ScalarFunction ScalarFunction::square() {
  return {[](double x) { return x * x; }, [](double x) { return 2.0 * x; },
          [](double) { return 2.0; }, "square"};
}

ScalarFunction ScalarFunction::xlogx() {
  return {[](double x) { return x > 0.0 ? x * std::log(x) : 0.0; },
          [](double x) { return std::log(x) + 1.0; }, [](double x) { return 1.0 / x; },
          "xlogx"};
}

ScalarFunction ScalarFunction::power(double p) {
  return {[p](double x) { return std::pow(x, p); },
          [p](double x) { return p * std::pow(x, p - 1.0); },
          [p](double x) { return p * (p - 1.0) * std::pow(x, p - 2.0); },
          "power"};
}

double discrete_derivative(const ScalarFunction& f, double lambda, double mu,
                           double tol) {
  if (close(lambda, mu, tol)) return f.df(0.5 * (lambda + mu));
  return (f.f(lambda) - f.f(mu)) / (lambda - mu);
}

OperatorSum2 divided_difference(const ScalarFunction& f, const Spectral& A,
                                const Spectral& B) {
  return make_sum(A, B, [&](double x, double y) { return discrete_derivative(f, x, y); });
}

Mat chain_partial(const ScalarFunction& f, const Mat& ell_A, const Mat& r_A,
                  const Mat& partial_A) {
  return divided_difference(f, spectral(ell_A), spectral(r_A)).contract(partial_A);
}

// ---------------------------------------------------------------------------

double tree_coeff(const MeanFunction& theta, TreeShape shape, double x,
                  double y, double z, double w, double tol) {
  switch (shape) {
    case TreeShape::left3:
      if (close(x, y, tol)) return theta.d1(0.5 * (x + y), z);
      return (theta(x, z) - theta(y, z)) / (x - y);
    case TreeShape::right3:
      if (close(y, z, tol)) return theta.d2(x, 0.5 * (y + z));
      return (theta(x, y) - theta(x, z)) / (y - z);
    case TreeShape::left4: {
      // Second divided difference of g = theta(., w) at x, y, z.
      auto g = [&](double a) { return theta(a, w); };
      auto g1 = [&](double a) { return theta.d1(a, w); };
      auto g2 = [&](double a) { return theta.d11(a, w); };
      auto dd = [&](double a, double b) { return (g(a) - g(b)) / (a - b); };
      const bool xy = close(x, y, tol), xz = close(x, z, tol), yz = close(y, z, tol);
      if (xy && yz) return 0.5 * g2((x + y + z) / 3.0);
      if (xy) {
        const double a = 0.5 * (x + y);
        return (g1(a) - dd(a, z)) / (a - z);
      }
      if (xz) {
        const double a = 0.5 * (x + z);
        return (g1(a) - dd(a, y)) / (a - y);
      }
      if (yz) {
        const double a = 0.5 * (y + z);
        return (g1(a) - dd(a, x)) / (a - x);
      }
      return (dd(x, z) - dd(y, z)) / (x - y);
    }
  }
  throw Error("unsupported tree shape");
}

namespace {

// Cluster-level coefficient cube, indexed [k1][k2][k3] in a flat vector.
std::vector<double> cube(const MeanFunction& theta, TreeShape shape,
                         const Vec& v1, const Vec& v2, const Vec& v3) {
  const int a = v1.size(), b = v2.size(), c = v3.size();
  std::vector<double> t(static_cast<size_t>(a) * b * c);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j)
      for (int k = 0; k < c; ++k)
        t[(static_cast<size_t>(i) * b + j) * c + k] =
            tree_coeff(theta, shape, v1(i), v2(j), v3(k));
  return t;
}

}  // namespace

Mat tree_left(const MeanFunction& theta, const Spectral& s1, const Spectral& s2,
              const Spectral& s3, const Mat& X, const Mat& C) {
  std::vector<double> t = cube(theta, TreeShape::left3, s1.values, s2.values, s3.values);
  const int K2 = s2.clusters(), K3 = s3.clusters();
  Mat xt = s1.vectors.adjoint() * X * s2.vectors;
  Mat ct = s2.vectors.adjoint() * C * s3.vectors;
  const int n1 = s1.size(), n2 = s2.size(), n3 = s3.size();
  Mat r = Mat::Zero(n1, n3);
  for (int a = 0; a < n1; ++a) {
    const size_t base = static_cast<size_t>(s1.label[a]) * K2;
    for (int b = 0; b < n2; ++b) {
      const cplx xv = xt(a, b);
      if (xv == 0.0) continue;
      const size_t row = (base + s2.label[b]) * K3;
      for (int c = 0; c < n3; ++c) r(a, c) += t[row + s3.label[c]] * xv * ct(b, c);
    }
  }
  return s1.vectors * r * s3.vectors.adjoint();
}

Mat tree_right(const MeanFunction& theta, const Spectral& s1, const Spectral& s2,
               const Spectral& s3, const Mat& X, const Mat& C) {
  std::vector<double> t = cube(theta, TreeShape::right3, s1.values, s2.values, s3.values);
  const int K2 = s2.clusters(), K3 = s3.clusters();
  Mat ct = s1.vectors.adjoint() * C * s2.vectors;
  Mat xt = s2.vectors.adjoint() * X * s3.vectors;
  const int n1 = s1.size(), n2 = s2.size(), n3 = s3.size();
  Mat r = Mat::Zero(n1, n3);
  for (int a = 0; a < n1; ++a) {
    const size_t base = static_cast<size_t>(s1.label[a]) * K2;
    for (int b = 0; b < n2; ++b) {
      const cplx cv = ct(a, b);
      if (cv == 0.0) continue;
      const size_t row = (base + s2.label[b]) * K3;
      for (int c = 0; c < n3; ++c) r(a, c) += t[row + s3.label[c]] * cv * xt(b, c);
    }
  }
  return s1.vectors * r * s3.vectors.adjoint();
}

Mat tree_left4(const MeanFunction& theta, const Spectral& s1, const Spectral& s2,
               const Spectral& s3, const Spectral& s4, const Mat& X,
               const Mat& Y, const Mat& C) {
  const int K1 = s1.clusters(), K2 = s2.clusters(), K3 = s3.clusters(),
            K4 = s4.clusters();
  std::vector<double> t(static_cast<size_t>(K1) * K2 * K3 * K4);
  for (int i = 0; i < K1; ++i)
    for (int j = 0; j < K2; ++j)
      for (int k = 0; k < K3; ++k)
        for (int l = 0; l < K4; ++l)
          t[((static_cast<size_t>(i) * K2 + j) * K3 + k) * K4 + l] =
              tree_coeff(theta, TreeShape::left4, s1.values(i), s2.values(j),
                         s3.values(k), s4.values(l));
  Mat xt = s1.vectors.adjoint() * X * s2.vectors;
  Mat yt = s2.vectors.adjoint() * Y * s3.vectors;
  Mat ct = s3.vectors.adjoint() * C * s4.vectors;
  const int n1 = s1.size(), n2 = s2.size(), n3 = s3.size(), n4 = s4.size();
  Mat r = Mat::Zero(n1, n4);
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      const cplx xv = xt(a, b);
      if (xv == 0.0) continue;
      for (int c = 0; c < n3; ++c) {
        const cplx xy = xv * yt(b, c);
        if (xy == 0.0) continue;
        const size_t row =
            ((static_cast<size_t>(s1.label[a]) * K2 + s2.label[b]) * K3 + s3.label[c]) * K4;
        for (int d = 0; d < n4; ++d) r(a, d) += t[row + s4.label[d]] * xy * ct(c, d);
      }
    }
  return s1.vectors * r * s4.vectors.adjoint();
}

Mat tree_left_dual(const MeanFunction& theta, const Spectral& L, const Spectral& R,
                   const Mat& X) {
  std::vector<double> t = cube(theta, TreeShape::left3, L.values, L.values, R.values);
  const int KL = L.clusters(), KR = R.clusters();
  Mat xt = L.vectors.adjoint() * X * R.vectors;
  const int nl = L.size(), nr = R.size();
  Mat y = Mat::Zero(nl, nl);
  for (int a = 0; a < nl; ++a)
    for (int b = 0; b < nl; ++b) {
      // c(k = label b, m = label a, p = label c)
      const size_t row = (static_cast<size_t>(L.label[b]) * KL + L.label[a]) * KR;
      cplx s = 0.0;
      for (int c = 0; c < nr; ++c) s += t[row + R.label[c]] * xt(a, c) * std::conj(xt(b, c));
      y(a, b) = s;
    }
  return L.vectors * y * L.vectors.adjoint();
}

Mat tree_right_dual(const MeanFunction& theta, const Spectral& L, const Spectral& R,
                    const Mat& X) {
  std::vector<double> t = cube(theta, TreeShape::right3, L.values, R.values, R.values);
  const int KR = R.clusters();
  Mat xt = L.vectors.adjoint() * X * R.vectors;
  const int nl = L.size(), nr = R.size();
  Mat y = Mat::Zero(nr, nr);
  for (int a = 0; a < nr; ++a)
    for (int b = 0; b < nr; ++b) {
      cplx s = 0.0;
      for (int c = 0; c < nl; ++c) {
        // c(k = label c, m = label b, p = label a)
        const size_t idx =
            (static_cast<size_t>(L.label[c]) * KR + R.label[b]) * KR + R.label[a];
        s += t[idx] * std::conj(xt(c, a)) * xt(c, b);
      }
      y(a, b) = s;
    }
  return R.vectors * y * R.vectors.adjoint();
}

}  // namespace qmt
