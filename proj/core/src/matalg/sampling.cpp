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

#include "qmt/matalg.hpp"

namespace qmt {

Mat random_hermitian(const Algebra& alg, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec c(alg.dim());
  for (int a = 0; a < c.size(); ++a) c(a) = g(rng);
  Mat h = alg.from_coords(c);
  return 0.5 * (h + h.adjoint());
}

Mat random_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

Mat haar_unitary(int n, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(random_ginibre(n, n, rng));
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

Vec dirichlet(int k, Rng& rng) {
  std::exponential_distribution<double> ex(1.0);
  Vec p(k);
  for (int i = 0; i < k; ++i) p(i) = ex(rng);
  return p / p.sum();
}

Mat random_state(const Algebra& alg, Rng& rng, StateSampling opt) {
  const int n = alg.ambient_dim();
  HermEig e = herm_eig(random_hermitian(alg, rng));
  // Cluster the eigenvalues; the spectral projectors lie in the algebra.
  const double scale = std::max(e.values.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    if (!groups.empty() &&
        std::abs(e.values(i) - e.values(groups.back().front())) <= 1e-9 * scale)
      groups.back().push_back(i);
    else
      groups.push_back({i});
  }
  const int k = static_cast<int>(groups.size());
  Vec p = dirichlet(k, rng);
  std::vector<double> tr(k);
  for (int c = 0; c < k; ++c) {
    double t = 0.0;
    for (int i : groups[c]) {
      Mat v = e.vectors.col(i);
      t += alg.trace(v * v.adjoint()).real();
    }
    tr[c] = t;
  }
  Vec lam(k);
  if (opt.boundary_eig > 0.0 && k > 1) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    const int c0 = pick(rng);
    const double mass = opt.boundary_eig * tr[c0];
    double rest = 0.0;
    for (int c = 0; c < k; ++c)
      if (c != c0) rest += p(c);
    for (int c = 0; c < k; ++c)
      lam(c) = c == c0 ? opt.boundary_eig : p(c) * (1.0 - mass) / (rest * tr[c]);
  } else {
    for (int c = 0; c < k; ++c) lam(c) = p(c) / tr[c];
  }
  Mat rho = Mat::Zero(n, n);
  for (int c = 0; c < k; ++c)
    for (int i : groups[c]) rho += lam(c) * e.vectors.col(i) * e.vectors.col(i).adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return rho / alg.trace(rho).real();
}

std::vector<Mat> random_kraus(int n, int count, Rng& rng) {
  // Stack Ginibre blocks into an isometry.
  Mat g = random_ginibre(n * count, n, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n * count, n);
  std::vector<Mat> out;
  for (int k = 0; k < count; ++k) out.push_back(q.block(k * n, 0, n, n));
  return out;
}

Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& A) {
  Mat out = Mat::Zero(A.rows(), A.cols());
  for (const Mat& k : kraus) out += k * A * k.adjoint();
  return out;
}

Mat apply_kraus_dual(const std::vector<Mat>& kraus, const Mat& A) {
  Mat out = Mat::Zero(A.rows(), A.cols());
  for (const Mat& k : kraus) out += k.adjoint() * A * k;
  return out;
}

}  // namespace qmt
