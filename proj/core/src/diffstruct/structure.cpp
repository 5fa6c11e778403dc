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
#include <atomic>
#include <cmath>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "qmt/diffstruct.hpp"

namespace qmt {

struct DifferentialStructure::Impl {
  Impl(Algebra a, std::vector<Direction> d, Mat s, std::string i)
      : alg(std::move(a)), dirs(std::move(d)), sigma(std::move(s)), id(std::move(i)) {}
  Algebra alg;
  std::vector<Direction> dirs;
  Mat sigma;
  std::string id;
  std::atomic<bool> validated{false};
  std::once_flag gen_once, adj_once, sg_once;
  Superop gen, adj;
  SemigroupData sg;
};

DifferentialStructure::DifferentialStructure(Algebra alg, std::vector<Direction> dirs,
                                             Mat sigma, std::string id)
    : p_(std::make_shared<Impl>(std::move(alg), std::move(dirs), std::move(sigma),
                                std::move(id))) {}

const Algebra& DifferentialStructure::algebra() const { return p_->alg; }
const std::vector<Direction>& DifferentialStructure::directions() const { return p_->dirs; }
int DifferentialStructure::size() const { return static_cast<int>(p_->dirs.size()); }
const Mat& DifferentialStructure::sigma() const { return p_->sigma; }
const std::string& DifferentialStructure::id() const { return p_->id; }
bool DifferentialStructure::validated() const { return p_->validated.load(); }

const Direction& DifferentialStructure::direction(int j) const {
  if (j < 0 || j >= size()) throw Error("direction index out of range");
  return p_->dirs[j];
}

void DifferentialStructure::mark_validated() const { p_->validated.store(true); }

void DifferentialStructure::require_validated() const {
  if (!validated()) throw Error("structure not validated");
}

const Superop& DifferentialStructure::generator() const {
  require_validated();
  std::call_once(p_->gen_once, [this] {
    p_->gen = superop_from(p_->alg, [this](const Mat& A) { return generator_apply(*this, A); },
                           "generator");
  });
  return p_->gen;
}

const Superop& DifferentialStructure::adjoint_generator() const {
  require_validated();
  std::call_once(p_->adj_once, [this] {
    p_->adj = superop_from(
        p_->alg, [this](const Mat& A) { return adjoint_generator_apply(*this, A); },
        "adjoint generator");
  });
  return p_->adj;
}

const DifferentialStructure::SemigroupData& DifferentialStructure::semigroup_data() const {
  const Superop& L = generator();
  std::call_once(p_->sg_once, [this, &L] {
    RMat G = gram(p_->alg, p_->sigma, InnerProductKind::kms()).real();
    G = 0.5 * (G + G.transpose());
    Eigen::SelfAdjointEigenSolver<RMat> eg(G);
    Vec ev = eg.eigenvalues();
    RMat U = eg.eigenvectors();
    SemigroupData sg;
    sg.half = U * ev.cwiseSqrt().asDiagonal() * U.transpose();
    sg.half_inv = U * ev.cwiseSqrt().cwiseInverse().asDiagonal() * U.transpose();
    RMat S = sg.half * L.M * sg.half_inv;
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<RMat> es(S);
    sg.eigenvalues = es.eigenvalues();
    sg.eigenvectors = es.eigenvectors();
    p_->sg = std::move(sg);
  });
  return p_->sg;
}

// ---------------------------------------------------------------------------

Mat partial(const DifferentialStructure& ds, int j, const Mat& A) {
  const Direction& d = ds.direction(j);
  return d.V * d.r(A) - d.ell(A) * d.V;
}

TangentField gradient(const DifferentialStructure& ds, const Mat& A) {
  TangentField out;
  out.reserve(ds.size());
  for (int j = 0; j < ds.size(); ++j) out.push_back(partial(ds, j, A));
  return out;
}

Mat partial_adjoint_s(const DifferentialStructure& ds, int j, double s, const Mat& B) {
  ds.require_validated();
  const Direction& d = ds.direction(j);
  Mat Vs = d.V.adjoint();
  return std::exp(-s * d.omega) * d.r.adjoint(Vs * B) -
         std::exp((1.0 - s) * d.omega) * d.ell.adjoint(B * Vs);
}

Mat partial_adjoint(const DifferentialStructure& ds, int j, const Mat& B) {
  const Direction& d = ds.direction(j);
  Mat Vs = d.V.adjoint();
  return d.r.adjoint(Vs * B) - d.ell.adjoint(B * Vs);
}

Mat divergence(const DifferentialStructure& ds, const TangentField& B) {
  if (static_cast<int>(B.size()) != ds.size()) throw Error("tangent field shape mismatch");
  const int n = ds.algebra().ambient_dim();
  Mat out = Mat::Zero(n, n);
  for (int j = 0; j < ds.size(); ++j) out -= partial_adjoint(ds, j, B[j]);
  return out;
}

Mat generator_apply(const DifferentialStructure& ds, const Mat& A) {
  const int n = ds.algebra().ambient_dim();
  Mat out = Mat::Zero(n, n);
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Mat Vs = d.V.adjoint();
    Mat dA = d.V * d.r(A) - d.ell(A) * d.V;
    out -= std::exp(-0.5 * d.omega) * d.r.adjoint(Vs * dA) -
           std::exp(0.5 * d.omega) * d.ell.adjoint(dA * Vs);
  }
  return out;
}

Mat generator_apply_alt(const DifferentialStructure& ds, const Mat& A) {
  const int n = ds.algebra().ambient_dim();
  Mat out = Mat::Zero(n, n);
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Mat Vs = d.V.adjoint();
    Mat VsV = Vs * d.V;
    Mat rA = d.r(A);
    out += std::exp(-0.5 * d.omega) *
           d.r.adjoint(-rA * VsV + 2.0 * Vs * d.ell(A) * d.V - VsV * rA);
  }
  return out;
}

Mat adjoint_generator_apply(const DifferentialStructure& ds, const Mat& rho) {
  const int n = ds.algebra().ambient_dim();
  Mat out = Mat::Zero(n, n);
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Mat Vs = d.V.adjoint();
    Mat VsV = Vs * d.V;
    Mat rr = d.r(rho);
    out += std::exp(-0.5 * d.omega) *
           (-d.r.adjoint(rr * VsV) + 2.0 * d.ell.adjoint(d.V * rr * Vs) - d.r.adjoint(VsV * rr));
  }
  return out;
}

double generator_form_gap(const DifferentialStructure& ds) {
  const Algebra& alg = ds.algebra();
  Superop a = superop_from(alg, [&](const Mat& A) { return generator_apply(ds, A); });
  Superop b = superop_from(alg, [&](const Mat& A) { return generator_apply_alt(ds, A); });
  return (a.M - b.M).norm() / std::max(a.M.norm(), 1e-300);
}

Superop semigroup(const DifferentialStructure& ds, double t) {
  if (t < 0.0) throw Error("semigroup time must be nonnegative");
  const auto& sg = ds.semigroup_data();
  Vec e = (t * sg.eigenvalues).array().exp();
  RMat S = sg.eigenvectors * e.asDiagonal() * sg.eigenvectors.transpose();
  Superop P;
  P.M = sg.half_inv * S * sg.half;
  P.meta = "semigroup(" + std::to_string(t) + ")";
  return P;
}

Mat semigroup_apply(const DifferentialStructure& ds, double t, const Mat& A) {
  return superop_apply(ds.algebra(), semigroup(ds, t), A);
}

Mat semigroup_dual_apply(const DifferentialStructure& ds, double t, const Mat& rho) {
  Superop P = semigroup(ds, t);
  P.M.transposeInPlace();
  return superop_apply(ds.algebra(), P, rho);
}

double semigroup_cp_margin(const DifferentialStructure& ds, double t) {
  Mat C = choi_matrix(ds.algebra(), semigroup(ds, t));
  Vec ev = herm_eig(C).values;
  return ev.minCoeff() / std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
}

int kernel_dimension(const DifferentialStructure& ds, double tol) {
  const auto& sg = ds.semigroup_data();
  const double scale = std::max(1.0, sg.eigenvalues.cwiseAbs().maxCoeff());
  int k = 0;
  for (int i = 0; i < sg.eigenvalues.size(); ++i)
    if (std::abs(sg.eigenvalues(i)) <= tol * scale) ++k;
  return k;
}

bool is_ergodic(const DifferentialStructure& ds) { return kernel_dimension(ds) == 1; }

DifferentialStructure with_directions(const DifferentialStructure& ds,
                                      std::vector<Direction> dirs) {
  return DifferentialStructure(ds.algebra(), std::move(dirs), ds.sigma(), ds.id() + "*");
}

}  // namespace qmt
