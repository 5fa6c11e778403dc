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

#include "qmt/diffstruct.hpp"

namespace qmt {

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.passed && c.gating)
      out.push_back(c.axiom + (c.direction >= 0 ? "[" + std::to_string(c.direction) + "]" : ""));
  return out;
}

namespace {

double rel(double num, double den) { return num / std::max(den, 1e-300); }

Mat random_element(const Algebra& alg, Rng& rng) {
  return random_hermitian(alg, rng) + cplx(0.0, 1.0) * random_hermitian(alg, rng);
}

struct HomResiduals {
  double unital = 0.0, mult = 0.0, star = 0.0, compat = 0.0;
};

HomResiduals check_hom(const Homomorphism& h, const Algebra& src, const Algebra& tgt,
                       Rng& rng) {
  HomResiduals r;
  Mat one_t = Mat::Identity(tgt.ambient_dim(), tgt.ambient_dim());
  r.unital = rel((h(src.identity()) - one_t).norm(), one_t.norm());
  for (int k = 0; k < 20; ++k) {
    Mat a = random_element(src, rng), b = random_element(src, rng);
    Mat ha = h(a), hb = h(b);
    const double scale = ha.norm() * hb.norm();
    r.mult = std::max(r.mult, rel((h(a * b) - ha * hb).norm(), scale));
    r.star = std::max(r.star, rel((h(Mat(a.adjoint())) - ha.adjoint()).norm(), ha.norm()));
    r.compat = std::max(r.compat, rel(std::abs(tgt.trace(ha) - src.trace(a)), a.norm()));
  }
  return r;
}

void add(ValidationReport& rep, const std::string& axiom, int j, double residual,
         bool gating = true, double tol = tol::axiom) {
  rep.checks.push_back({axiom, j, residual, std::isfinite(residual) && residual <= tol, gating});
}

}  // namespace

ValidationReport validate_structure(const DifferentialStructure& ds) {
  ValidationReport rep;
  const Algebra& alg = ds.algebra();
  const Mat& sig = ds.sigma();
  Rng rng(20260101);

  const bool square = sig.rows() == alg.ambient_dim() && sig.cols() == alg.ambient_dim();
  add(rep, "sigma.shape", -1, square ? 0.0 : 1.0);
  if (!square) {
    rep.valid = false;
    return rep;
  }
  add(rep, "sigma.hermitian", -1, rel_asymmetry(sig), true, tol::hermitian);
  add(rep, "sigma.membership", -1, alg.membership_residual(sig), true, tol::membership);
  add(rep, "sigma.trace", -1, std::abs(alg.trace(sig) - 1.0));
  const Mat sh = 0.5 * (sig + sig.adjoint());
  HermEig es = herm_eig(sh);
  const double lo = es.values.minCoeff();
  add(rep, "sigma.positive", -1, lo > tol::min_eig * es.values.maxCoeff() ? 0.0 : 1.0);
  if (ds.size() == 0) add(rep, "directions.nonempty", -1, 1.0);

  const int J = ds.size();
  for (int j = 0; j < J; ++j) {
    const Direction& d = ds.direction(j);
    const int m = d.B.ambient_dim();
    const bool shape = d.V.rows() == m && d.V.cols() == m;
    add(rep, "V.shape", j, shape ? 0.0 : 1.0);
    if (!shape) continue;
    add(rep, "V.nonzero", j, d.V.norm() > 0.0 ? 0.0 : 1.0);
    add(rep, "V.membership", j, d.B.membership_residual(d.V), true, tol::membership);

    HomResiduals hl = check_hom(d.ell, alg, d.B, rng);
    HomResiduals hr = check_hom(d.r, alg, d.B, rng);
    add(rep, "ell.unital", j, hl.unital);
    add(rep, "ell.multiplicative", j, hl.mult);
    add(rep, "ell.star", j, hl.star);
    add(rep, "ell.compatible", j, hl.compat, false);
    add(rep, "r.unital", j, hr.unital);
    add(rep, "r.multiplicative", j, hr.mult);
    add(rep, "r.star", j, hr.star);
    add(rep, "r.compatible", j, hr.compat, false);

    const int js = d.jstar;
    const bool in_range = js >= 0 && js < J;
    add(rep, "jstar.range", j, in_range ? 0.0 : 1.0);
    if (in_range) {
      const Direction& e = ds.direction(js);
      add(rep, "jstar.involution", j, e.jstar == j ? 0.0 : 1.0);
      const bool same_b = e.B.same_as(d.B);
      add(rep, "jstar.algebra", j, same_b ? 0.0 : 1.0);
      if (same_b) {
        add(rep, "jstar.adjoint", j, rel((e.V - d.V.adjoint()).norm(), d.V.norm()));
        double sym = 0.0;
        for (int k = 0; k < 20; ++k) {
          Mat a1 = random_element(alg, rng), a2 = random_element(alg, rng);
          Mat Vs = d.V.adjoint();
          cplx lhs = d.B.trace(Vs * d.ell(a1) * d.V * d.r(a2));
          cplx rhs = d.B.trace(Vs * e.r(a1) * d.V * e.ell(a2));
          const double scale = d.V.squaredNorm() * a1.norm() * a2.norm() /
                               std::max(1, d.B.ambient_dim());
          sym = std::max(sym, rel(std::abs(lhs - rhs), scale));
        }
        add(rep, "symmetry", j, sym);
      }
      add(rep, "jstar.omega", j, std::abs(e.omega + d.omega));
    }

    if (lo > 0.0) {
      Mat ls = d.ell(sh), rs = d.r(sh);
      HermEig er = herm_eig(0.5 * (rs + rs.adjoint()));
      if (er.values.minCoeff() <= 0.0) {
        add(rep, "modular.eigenvector", j, 1.0);
      } else {
        Mat rinv = herm_func(er, [](double x) { return 1.0 / x; });
        Mat lhs = ls * d.V * rinv;
        add(rep, "modular.eigenvector", j,
            rel((lhs - std::exp(-d.omega) * d.V).norm(), d.V.norm()));
      }
    }
  }

  rep.valid = rep.failures().empty();
  if (rep.valid) ds.mark_validated();
  return rep;
}

// ---------------------------------------------------------------------------

cplx dirichlet_form_c(const DifferentialStructure& ds, const Mat& A1, const Mat& A2) {
  const Mat& sig = ds.sigma();
  Mat half = pos_power(0.5 * (sig + sig.adjoint()), 0.5);
  cplx s = 0.0;
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Mat b1 = partial(ds, j, A1), b2 = partial(ds, j, A2);
    s += d.B.inner(b1, d.ell(half) * b2 * d.r(half));
  }
  return s;
}

double dirichlet_form(const DifferentialStructure& ds, const Mat& A1, const Mat& A2) {
  return dirichlet_form_c(ds, A1, A2).real();
}

DetailedBalanceResult detailed_balance_check(const DifferentialStructure& ds,
                                             InnerProductKind kind, std::uint64_t seed) {
  const Algebra& alg = ds.algebra();
  const Superop& L = ds.generator();
  DetailedBalanceResult out;
  out.selfadjoint_residual = selfadjoint_residual(alg, ds.sigma(), L, kind);
  if (kind.tag == InnerTag::bkm) return out;
  const double s = kind.tag == InnerTag::gns ? 0.0 : kind.tag == InnerTag::kms ? 0.5 : kind.s;
  Rng rng(seed);
  const Mat sig = 0.5 * (ds.sigma() + ds.sigma().adjoint());
  Mat ss = pos_power(sig, s), s1 = pos_power(sig, 1.0 - s);
  for (int k = 0; k < 10; ++k) {
    Mat a1 = random_element(alg, rng), a2 = random_element(alg, rng);
    const cplx lhs = -alg.inner(superop_apply(alg, L, a1), ss * a2 * s1);
    cplx rhs = 0.0;
    double scale = 0.0;
    for (int j = 0; j < ds.size(); ++j) {
      const Direction& d = ds.direction(j);
      Mat b1 = partial(ds, j, a1), b2 = partial(ds, j, a2);
      const cplx t = d.B.inner(b1, d.ell(ss) * b2 * d.r(s1));
      rhs += std::exp((s - 0.5) * d.omega) * t;
      scale += std::exp((s - 0.5) * d.omega) * std::abs(t);
    }
    out.dirichlet_identity_residual =
        std::max(out.dirichlet_identity_residual, rel(std::abs(lhs - rhs), std::max(scale, std::abs(lhs))));
  }
  return out;
}

namespace {

// E^(m)(H1, H2) for block matrices over the algebra.
cplx amplified_form(const DifferentialStructure& ds, int m, const Mat& H1, const Mat& H2,
                    DirichletSource src, const Mat& half) {
  const int n = ds.algebra().ambient_dim();
  cplx s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      Mat a = H1.block(i * n, k * n, n, n), b = H2.block(i * n, k * n, n, n);
      if (src == DirichletSource::gradient) {
        s += dirichlet_form_c(ds, a, b);
      } else {
        s -= ds.algebra().inner(a, half * generator_apply_alt(ds, b) * half);
      }
    }
  return s / static_cast<double>(m);
}

}  // namespace

DirichletReport complete_dirichlet_check(const DifferentialStructure& ds, int m, int samples,
                                         std::uint64_t seed, DirichletSource src) {
  if (m < 1 || m > 3) throw Error("amplification order must be in [1, 3]");
  const Algebra& alg = ds.algebra();
  const int n = alg.ambient_dim();
  const Mat sig = 0.5 * (ds.sigma() + ds.sigma().adjoint());
  const Mat half = pos_power(sig, 0.5);
  Mat big = Mat::Zero(n * m, n * m);
  for (int i = 0; i < m; ++i) big.block(i * n, i * n, n, n) = sig;
  Rng rng(seed);
  DirichletReport rep;
  for (int k = 0; k < samples; ++k) {
    Mat H = Mat::Zero(n * m, n * m);
    for (int i = 0; i < m; ++i) {
      H.block(i * n, i * n, n, n) = random_hermitian(alg, rng);
      for (int l = i + 1; l < m; ++l) {
        Mat x = random_element(alg, rng);
        H.block(i * n, l * n, n, n) = x;
        H.block(l * n, i * n, n, n) = x.adjoint();
      }
    }
    MoreauParts parts = moreau_kms(big, H);
    const double v = amplified_form(ds, m, parts.plus, parts.minus, src, half).real();
    rep.max_value = std::max(rep.max_value, v);
    ++rep.samples;
  }
  rep.passed = rep.max_value <= 1e-10;
  return rep;
}

DirichletReport dirichlet_positivity_check(const DifferentialStructure& ds, int samples,
                                           std::uint64_t seed, DirichletSource src) {
  return complete_dirichlet_check(ds, 1, samples, seed, src);
}

}  // namespace qmt
