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

#include "qmt/funcineq.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "../common/nelder_mead.hpp"

namespace qmt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Orthonormal basis of the complement of `c` in R^d.
RMat complement_basis(const Vec& c) {
  const int d = static_cast<int>(c.size());
  RMat P = RMat::Identity(d, d) - c * c.transpose() / c.squaredNorm();
  Eigen::SelfAdjointEigenSolver<RMat> es(P);
  return es.eigenvectors().rightCols(d - 1);
}

double lsq_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double mt = 0.0, my = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - mt) * (y[i] - my);
    den += (t[i] - mt) * (t[i] - mt);
  }
  return den > 0.0 ? num / den : 0.0;
}

constexpr double kEntFloor = 1e-6;

}  // namespace

double mlsi_ratio(const DifferentialStructure& ds, const Mat& rho) {
  const double ent = entropy(ds, rho);
  if (ent <= 0.0) throw Error("entropy vanishes at sigma");
  return fisher(ds, rho) / (2.0 * ent);
}

double poincare_constant(const DifferentialStructure& ds) {
  ds.require_validated();
  const Algebra& alg = ds.algebra();
  const Mat& sigma = ds.sigma();
  RMat E = metric_matrix(ds, ThetaAssignment::default_for(ds), sigma);
  RMat G = gram(alg, sigma, InnerProductKind::bkm()).real();
  RMat Z = complement_basis(alg.real_coords(sigma));
  RMat Ez = Z.transpose() * E * Z, Gz = Z.transpose() * G * Z;
  Ez = 0.5 * (Ez + Ez.transpose());
  Gz = 0.5 * (Gz + Gz.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<RMat> ge(Ez, Gz);
  return std::max(0.0, ge.eigenvalues()(0));
}

MlsiResult mlsi_constant(const DifferentialStructure& ds, const MlsiOptions& opt) {
  ds.require_validated();
  const Algebra& alg = ds.algebra();
  Rng rng(opt.seed);
  MlsiResult out;
  out.linearized = poincare_constant(ds);

  struct Sample {
    Mat rho;
    double ratio;
  };
  std::vector<Sample> all;
  auto consider = [&](const Mat& rho) {
    if (entropy(ds, rho) < kEntFloor) return;
    all.push_back({rho, mlsi_ratio(ds, rho)});
  };
  for (int k = 0; k < opt.samples; ++k) consider(random_state(alg, rng));
  for (int k = 0; k < opt.boundary_samples; ++k)
    consider(random_state(alg, rng, StateSampling{1e-6}));

  for (int k = 0; k < opt.trajectories; ++k) {
    Mat rho0 = random_state(alg, rng);
    std::vector<double> ts, ys;
    for (int i = 0; i <= opt.t_steps; ++i) {
      const double t = opt.t_max * i / opt.t_steps;
      Mat rho = semigroup_dual_apply(ds, t, rho0);
      const double ent = entropy(ds, rho);
      if (ent < kEntFloor) break;
      all.push_back({rho, mlsi_ratio(ds, rho)});
      ts.push_back(t);
      ys.push_back(std::log(ent));
    }
    if (ts.size() >= 2) out.slopes.push_back(lsq_slope(ts, ys));
  }
  out.samples = static_cast<int>(all.size());
  if (all.empty()) throw Error("no admissible MLSI samples");
  std::sort(all.begin(), all.end(), [](const Sample& a, const Sample& b) { return a.ratio < b.ratio; });

  // Local refinement over rho = exp(H) / tau[exp(H)].
  RMat Z = complement_basis(alg.identity_coords());
  auto state_of = [&](const Vec& x) {
    Mat H = alg.from_coords(Vec(Z * x));
    HermEig e = herm_eig(0.5 * (H + H.adjoint()));
    const double top = e.values.maxCoeff();
    Mat X = herm_func(e, [top](double v) { return std::exp(v - top); });
    return Mat(X / alg.trace(X).real());
  };
  double best = all.front().ratio;
  Mat witness = all.front().rho;
  const int starts = std::min<int>(3, static_cast<int>(all.size()));
  for (int s = 0; s < starts && opt.refine_evals > 0; ++s) {
    Mat L = pos_log(all[s].rho, "state not strictly positive");
    Vec x0 = Z.transpose() * alg.real_coords(0.5 * (L + L.adjoint()));
    auto f = [&](const Vec& x) {
      try {
        Mat rho = state_of(x);
        if (min_eigenvalue(rho) <= 1e-13 || entropy(ds, rho) < kEntFloor)
          return std::numeric_limits<double>::infinity();
        return mlsi_ratio(ds, rho);
      } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    detail::NelderMeadResult nm = detail::nelder_mead(f, x0, 0.3, opt.refine_evals);
    if (nm.f < best) {
      best = nm.f;
      witness = state_of(nm.x);
    }
  }
  out.sampled_min = best;
  if (out.linearized <= best) {
    out.lambda_hat = out.linearized;
    out.method = "linearization-at-sigma";
  } else {
    out.lambda_hat = best;
    out.method = "sampled";
    out.witness = witness;
  }
  return out;
}

InequalityCheck hwi_check(const DifferentialStructure& ds, double kappa, const Mat& rho,
                          const DistanceOptions& opt) {
  ds.require_validated();
  const ThetaAssignment theta = ThetaAssignment::default_for(ds);
  DistanceResult d = distance(ds, theta, rho, ds.sigma(), opt);
  const double W = opt.richardson ? d.extrapolated : d.value;
  const double I = fisher(ds, rho);
  InequalityCheck c;
  c.lhs = entropy(ds, rho);
  c.rhs = W * std::sqrt(std::max(I, 0.0)) - 0.5 * kappa * W * W;
  c.residual = c.rhs - c.lhs;
  c.slack = 2.0 * std::abs(std::sqrt(std::max(I, 0.0)) - kappa * W) * d.residual;
  c.holds = c.residual >= -c.slack;
  return c;
}

InequalityCheck talagrand_check(const DifferentialStructure& ds, double lambda, const Mat& rho,
                                const DistanceOptions& opt) {
  ds.require_validated();
  if (lambda <= 0.0) throw Error("Talagrand constant must be positive");
  const ThetaAssignment theta = ThetaAssignment::default_for(ds);
  DistanceResult d = distance(ds, theta, rho, ds.sigma(), opt);
  InequalityCheck c;
  c.lhs = opt.richardson ? d.extrapolated : d.value;
  c.rhs = std::sqrt(2.0 * std::max(entropy(ds, rho), 0.0) / lambda);
  c.residual = c.rhs - c.lhs;
  c.slack = 2.0 * d.residual;
  c.holds = c.residual >= -c.slack;
  return c;
}

InequalityCheck t1_check(const DifferentialStructure& ds, double lambda, const Mat& rho) {
  ds.require_validated();
  if (lambda <= 0.0) throw Error("T1 constant must be positive");
  InequalityCheck c;
  c.lhs = w1(ds, rho, ds.sigma()).value;
  c.rhs = std::sqrt(2.0 * std::max(entropy(ds, rho), 0.0) / lambda);
  c.residual = c.rhs - c.lhs;
  c.slack = 1e-8;
  c.holds = c.residual >= -c.slack;
  return c;
}

DecayCheck entropy_decay_check(const DifferentialStructure& ds, double lambda, const Mat& rho,
                               const std::vector<double>& t_grid, double slack) {
  ds.require_validated();
  const double e0 = entropy(ds, rho);
  DecayCheck c;
  for (double t : t_grid) {
    const double v = entropy(ds, semigroup_dual_apply(ds, t, rho)) - std::exp(-2.0 * lambda * t) * e0;
    c.max_violation = std::max(c.max_violation, v);
  }
  c.holds = c.max_violation <= slack;
  return c;
}

InequalityReport inequality_report(const DifferentialStructure& ds, const ReportOptions& opt) {
  ds.require_validated();
  const Algebra& alg = ds.algebra();
  const ThetaAssignment theta = ThetaAssignment::default_for(ds);
  InequalityReport r;
  r.structure_id = ds.id();

  auto t0 = Clock::now();
  r.ric = ricci_estimate(ds, theta, opt.ricci);
  r.runtimes.ric = seconds_since(t0);

  t0 = Clock::now();
  r.mlsi = mlsi_constant(ds, opt.mlsi);
  r.runtimes.mlsi = seconds_since(t0);

  t0 = Clock::now();
  r.poincare = poincare_constant(ds);
  r.runtimes.poincare = seconds_since(t0);

  Rng rng(opt.seed);
  std::vector<Mat> states;
  for (int k = 0; k < opt.transport_samples; ++k) states.push_back(random_state(alg, rng));

  const double lambda = r.mlsi.lambda_hat;
  r.talagrand.constant = lambda;
  r.t1.constant = lambda;
  if (lambda > 0.0) {
    t0 = Clock::now();
    r.talagrand.worst_residual = std::numeric_limits<double>::infinity();
    for (const Mat& rho : states) {
      InequalityCheck c = talagrand_check(ds, lambda, rho, opt.distance);
      ++r.talagrand.samples;
      if (c.residual + c.slack < r.talagrand.worst_residual) {
        r.talagrand.worst_residual = c.residual + c.slack;
        r.talagrand.worst_witness = rho;
      }
      r.talagrand.holds = r.talagrand.holds && c.holds;
    }
    r.runtimes.talagrand = seconds_since(t0);

    t0 = Clock::now();
    r.comparison_M = comparison_constants(ds, theta).M;
    r.t1.constant = lambda / (r.comparison_M * r.comparison_M);
    r.t1.worst_residual = std::numeric_limits<double>::infinity();
    for (const Mat& rho : states) {
      InequalityCheck c = t1_check(ds, r.t1.constant, rho);
      ++r.t1.samples;
      if (c.residual + c.slack < r.t1.worst_residual) {
        r.t1.worst_residual = c.residual + c.slack;
        r.t1.worst_witness = rho;
      }
      r.t1.holds = r.t1.holds && c.holds;
    }
    r.runtimes.t1 = seconds_since(t0);
  }
  r.ric_le_mlsi = r.ric.lambda_hat <= r.mlsi.lambda_hat + 1e-8;
  r.mlsi_le_poincare = r.mlsi.lambda_hat <= r.poincare + 1e-12;
  return r;
}

}  // namespace qmt
