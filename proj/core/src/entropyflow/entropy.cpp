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

#include "qmt/entropyflow.hpp"

namespace qmt {

namespace {

double l2_norm(const Algebra& alg, const Mat& X) {
  return std::sqrt(std::max(0.0, alg.inner(X, X).real()));
}

Mat log_ratio(const DifferentialStructure& ds, const Mat& rho) {
  return pos_log(hermitize(rho, "state"), "state not strictly positive") -
         pos_log(0.5 * (ds.sigma() + ds.sigma().adjoint()), "singular reference state");
}

}  // namespace

double entropy(const Algebra& alg, const Mat& sigma, const Mat& rho) {
  HermEig e = herm_eig(hermitize(rho, "state"));
  if (e.values.minCoeff() < -1e-12) throw Error("state not positive");
  Mat ls = pos_log(hermitize(sigma, "reference state"), "singular reference state");
  Mat xlogx = herm_func(e, [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; });
  Mat r = herm_func(e, [](double x) { return std::max(x, 0.0); });
  return (alg.trace(xlogx) - alg.trace(r * ls)).real();
}

double entropy(const DifferentialStructure& ds, const Mat& rho) {
  return entropy(ds.algebra(), ds.sigma(), rho);
}

FisherForms fisher_forms(const DifferentialStructure& ds, const ThetaAssignment& theta,
                         const Mat& rho) {
  ds.require_validated();
  Mat g = log_ratio(ds, rho);
  FisherForms out;
  out.trace_form = -ds.algebra().inner(g, adjoint_generator_apply(ds, rho)).real();
  out.metric_form = norm_rho_sq(ds, theta, rho, gradient(ds, g));
  return out;
}

double fisher(const DifferentialStructure& ds, const Mat& rho) {
  ds.require_validated();
  return -ds.algebra().inner(log_ratio(ds, rho), adjoint_generator_apply(ds, rho)).real();
}

FlowResidual gradient_flow_residual(const DifferentialStructure& ds,
                                    const ThetaAssignment& theta, const Mat& rho) {
  ds.require_validated();
  const Algebra& alg = ds.algebra();
  Mat g = log_ratio(ds, rho);
  FlowResidual out;
  out.residual = l2_norm(alg, adjoint_generator_apply(ds, rho) + metric_operator(ds, theta, rho, g));
  std::vector<OperatorSum2> hat = rho_hat(ds, theta, rho);
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Mat lhs = std::exp(-0.5 * d.omega) * d.V * d.r(rho) - std::exp(0.5 * d.omega) * d.ell(rho) * d.V;
    Mat rhs = hat[j].contract(partial(ds, j, g));
    out.chain_residual = std::max(out.chain_residual, l2_norm(d.B, lhs - rhs));
  }
  return out;
}

MeanFunction GeneralEntropy::theta() const {
  CustomMean c;
  ScalarFunction ff = f, ph = phi;
  c.value = [ff, ph](double l, double m) {
    if (std::abs(l - m) <= 1e-12 * std::max(std::abs(l), std::abs(m))) {
      const double x = 0.5 * (l + m);
      return ph.df(x) / ff.d2f(x);
    }
    return (ph.f(l) - ph.f(m)) / (ff.df(l) - ff.df(m));
  };
  c.name = "general(" + f.name + "," + phi.name + ")";
  return MeanFunction::custom(c);
}

double general_flow_residual(const DifferentialStructure& ds, const GeneralEntropy& ent,
                             const Mat& rho_in) {
  ds.require_validated();
  const Algebra& alg = ds.algebra();
  const int n = alg.ambient_dim();
  if ((ds.sigma() - Mat::Identity(n, n)).norm() > 1e-12) throw Error("requires sigma = 1");
  for (const Direction& d : ds.directions())
    if (d.omega != 0.0) throw Error("requires sigma = 1");
  Mat rho = hermitize(rho_in, "state");
  HermEig e = herm_eig(rho);
  if (e.values.minCoeff() <= 0.0) throw Error("state not strictly positive");
  ThetaAssignment theta = ThetaAssignment::uniform(ds, ent.theta());
  Mat lhs = generator_apply(ds, herm_func(e, ent.phi.f));
  Mat k = metric_operator(ds, theta, rho, herm_func(e, ent.f.df));
  return l2_norm(alg, lhs + k);
}

}  // namespace qmt
