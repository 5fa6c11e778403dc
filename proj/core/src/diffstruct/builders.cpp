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

#include <cmath>
#include <sstream>

#include "qmt/diffstruct.hpp"

namespace qmt {

namespace {

DifferentialStructure finish(DifferentialStructure ds) {
  ValidationReport rep = validate_structure(ds);
  if (!rep.valid) {
    std::ostringstream os;
    os << "structure failed validation:";
    for (const auto& f : rep.failures()) os << " " << f;
    throw Error(os.str());
  }
  return ds;
}

Mat unit(int n, int k, int l) {
  Mat e = Mat::Zero(n, n);
  e(k, l) = 1.0;
  return e;
}

Vec normalized_pi(const Vec& pi, int n) {
  if (pi.size() != n) throw Error("stationary weights have the wrong length");
  if (pi.minCoeff() <= 0.0) throw Error("stationary weights must be positive");
  return pi / pi.sum();
}

void check_rates(const RMat& q, const Vec& pi) {
  const int n = static_cast<int>(q.rows());
  if (q.cols() != n) throw Error("rate matrix must be square");
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < n; ++p) {
      if (k == p) continue;
      if (q(k, p) < 0.0) throw Error("rates must be nonnegative");
      const double a = pi(k) * q(k, p), b = pi(p) * q(p, k);
      if (std::abs(a - b) > 1e-10 * std::max({a, b, 1e-300})) throw Error("rates not reversible w.r.t. π");
    }
}

}  // namespace

DifferentialStructure build_lindblad(const std::vector<Mat>& V, const Mat& sigma) {
  const int n = static_cast<int>(sigma.rows());
  Algebra alg = Algebra::full(n);
  Mat sig = hermitize(sigma, "reference state");
  sig /= alg.trace(sig).real();
  Mat sinv = pos_power(sig, -1.0);
  std::vector<Direction> dirs;
  const int J = static_cast<int>(V.size());
  for (int j = 0; j < J; ++j) {
    const Mat& v = V[j];
    if (v.rows() != n || v.cols() != n) throw Error("jump operator has the wrong shape");
    const double nv = v.norm();
    if (nv == 0.0) throw Error("jump operators must be nonzero");
    Mat dv = sig * v * sinv;
    const cplx lam = v.cwiseProduct(dv.conjugate()).sum() / (nv * nv);
    const double lr = std::conj(lam).real();
    if (!(lr > 0.0) || (dv - lr * v).norm() > 1e-9 * nv)
      throw Error("V_j must satisfy Δ_σV = e^{−ω}V");
    int js = -1;
    for (int k = 0; k < J; ++k)
      if ((V[k] - v.adjoint()).norm() <= 1e-10 * nv) {
        js = k;
        break;
      }
    if (js < 0) throw Error("missing adjoint partner for V_" + std::to_string(j));
    dirs.push_back({alg, Homomorphism::identity(alg), Homomorphism::identity(alg), v,
                    -std::log(lr), js, "V" + std::to_string(j)});
  }
  return finish(DifferentialStructure(alg, std::move(dirs), sig, "lindblad"));
}

DifferentialStructure random_lindblad(int n, std::uint64_t seed) {
  Rng rng(seed);
  Algebra alg = Algebra::full(n);
  Mat U = haar_unitary(n, rng);
  Vec p = dirichlet(n, rng);
  p = (0.8 * p.array() + 0.2 / n).matrix();  // keep the spectrum away from zero
  Mat sigma = U * (n * p).cast<cplx>().asDiagonal() * U.adjoint();
  std::uniform_real_distribution<double> u(0.3, 1.5);
  std::vector<Mat> V;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      const double c = u(rng);
      V.push_back(c * U * unit(n, k, l) * U.adjoint());
      V.push_back(c * U * unit(n, l, k) * U.adjoint());
    }
  Vec d(n);
  for (int k = 0; k < n; ++k) d(k) = u(rng);
  V.push_back(U * d.cast<cplx>().asDiagonal() * U.adjoint());
  DifferentialStructure ds = build_lindblad(V, sigma);
  return finish(DifferentialStructure(ds.algebra(), ds.directions(), ds.sigma(), "random_lindblad"));
}

DifferentialStructure build_markov_lindblad(const RMat& q, const Vec& pi_in) {
  const int n = static_cast<int>(q.rows());
  Vec pi = normalized_pi(pi_in, n);
  check_rates(q, pi);
  Algebra alg = Algebra::diagonal(n);
  Algebra B = Algebra::full(n);
  Homomorphism emb = Homomorphism::embedding(alg, B);
  std::vector<Direction> dirs;
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < n; ++p)
      if (k != p && q(k, p) > 0.0) edges.push_back({k, p});
  for (auto [k, p] : edges) {
    int js = -1;
    for (size_t e = 0; e < edges.size(); ++e)
      if (edges[e].first == p && edges[e].second == k) js = static_cast<int>(e);
    const double c = std::pow(q(k, p) * q(p, k), 0.25) / std::sqrt(2.0);
    dirs.push_back({B, emb, emb, c * unit(n, k, p), std::log(pi(p) / pi(k)), js,
                    std::to_string(k) + "->" + std::to_string(p)});
  }
  Mat sigma = (n * pi).cast<cplx>().asDiagonal();
  return finish(DifferentialStructure(alg, std::move(dirs), sigma, "markov_lindblad"));
}

DifferentialStructure build_markov_graph(const RMat& q, const Vec& pi_in) {
  const int n = static_cast<int>(q.rows());
  Vec pi = normalized_pi(pi_in, n);
  check_rates(q, pi);
  Algebra alg = Algebra::diagonal(pi);
  std::vector<Direction> dirs;
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < n; ++p)
      if (k != p && q(k, p) > 0.0) edges.push_back({k, p});
  for (auto [k, p] : edges) {
    int js = -1;
    for (size_t e = 0; e < edges.size(); ++e)
      if (edges[e].first == p && edges[e].second == k) js = static_cast<int>(e);
    const double w = 0.25 * (pi(k) * q(k, p) + pi(p) * q(p, k));
    Algebra B = Algebra::diagonal(Vec::Constant(1, w));
    dirs.push_back({B, Homomorphism::coordinate_eval(alg, k, B),
                    Homomorphism::coordinate_eval(alg, p, B), Mat::Identity(1, 1), 0.0, js,
                    std::to_string(k) + "->" + std::to_string(p)});
  }
  return finish(DifferentialStructure(alg, std::move(dirs), Mat::Identity(n, n), "markov_graph"));
}

DifferentialStructure build_hypercube(int n) {
  if (n < 1 || n > 6) throw Error("hypercube dimension must be in [1, 6]");
  const int N = 1 << n;
  Algebra alg = Algebra::diagonal(N);
  std::vector<Direction> dirs;
  for (int j = 0; j < n; ++j) {
    std::vector<int> perm(N);
    for (int i = 0; i < N; ++i) perm[i] = i ^ (1 << j);
    dirs.push_back({alg, Homomorphism::identity(alg), Homomorphism::coordinate_swap(alg, perm),
                    Mat::Identity(N, N), 0.0, j, "flip" + std::to_string(j)});
  }
  return finish(DifferentialStructure(alg, std::move(dirs), Mat::Identity(N, N), "hypercube"));
}

DifferentialStructure build_fermion_ou(int n) {
  Algebra alg = Algebra::clifford(n);
  Homomorphism gam = Homomorphism::parity(alg);
  Homomorphism id = Homomorphism::identity(alg);
  std::vector<Direction> dirs;
  for (int j = 0; j < n; ++j)
    dirs.push_back({alg, gam, id, alg.generators()[j], 0.0, j, "Q" + std::to_string(j)});
  const int N = alg.ambient_dim();
  return finish(DifferentialStructure(alg, std::move(dirs), Mat::Identity(N, N), "fermion_ou"));
}

DifferentialStructure build_depolarizing(double gamma, int n, bool matrix_units) {
  if (!(gamma > 0.0)) throw Error("depolarizing rate must be positive");
  Algebra alg = Algebra::full(n);
  Homomorphism id = Homomorphism::identity(alg);
  std::vector<Direction> dirs;
  if (n == 2 && !matrix_units) {
    const double c = std::sqrt(gamma / 8.0);
    Mat sx = Mat::Zero(2, 2), sy = Mat::Zero(2, 2), sz = Mat::Zero(2, 2);
    sx(0, 1) = sx(1, 0) = 1.0;
    sy(0, 1) = cplx(0, -1);
    sy(1, 0) = cplx(0, 1);
    sz(0, 0) = 1.0;
    sz(1, 1) = -1.0;
    dirs.push_back({alg, id, id, c * sx, 0.0, 0, "x"});
    dirs.push_back({alg, id, id, c * sy, 0.0, 1, "y"});
    dirs.push_back({alg, id, id, c * sz, 0.0, 2, "z"});
  } else {
    const double c = std::sqrt(gamma / (2.0 * n));
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        dirs.push_back({alg, id, id, c * unit(n, k, l), 0.0, l * n + k,
                        "E" + std::to_string(k) + std::to_string(l)});
  }
  return finish(DifferentialStructure(alg, std::move(dirs), Mat::Identity(n, n), "depolarizing"));
}

}  // namespace qmt
