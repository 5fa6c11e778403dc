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

#include "qmt/transport.hpp"

namespace qmt {

ThetaAssignment::ThetaAssignment(std::vector<MeanFunction> means) : means_(std::move(means)) {}

ThetaAssignment ThetaAssignment::default_for(const DifferentialStructure& ds) {
  std::vector<MeanFunction> m;
  m.reserve(ds.size());
  for (const Direction& d : ds.directions()) m.push_back(MeanFunction::tilted_log(-d.omega));
  return ThetaAssignment(std::move(m));
}

ThetaAssignment ThetaAssignment::uniform(const DifferentialStructure& ds,
                                         const MeanFunction& theta) {
  return ThetaAssignment(std::vector<MeanFunction>(ds.size(), theta));
}

bool ThetaAssignment::convex() const {
  return std::all_of(means_.begin(), means_.end(), [](const MeanFunction& f) {
    return f.homogeneous() && f.operator_monotone();
  });
}

ThetaCheck check_theta(const DifferentialStructure& ds, const ThetaAssignment& theta) {
  if (theta.size() != ds.size()) throw Error("theta assignment does not match directions");
  static const double grid[] = {1e-4, 1e-3, 1e-2, 0.1, 0.3, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0};
  ThetaCheck out;
  out.min_value = INFINITY;
  out.lower_bound = INFINITY;
  out.arithmetic_bound = true;
  for (int j = 0; j < ds.size(); ++j) {
    const int js = ds.direction(j).jstar;
    for (double r : grid)
      for (double s : grid) {
        const double v = theta[j](r, s);
        out.min_value = std::min(out.min_value, v);
        out.lower_bound = std::min(out.lower_bound, v / std::min(r, s));
        if (v > 0.5 * (r + s) * (1.0 + 1e-12)) out.arithmetic_bound = false;
        if (js >= 0) {
          const double w = theta[js](s, r);
          out.symmetry_residual = std::max(out.symmetry_residual, std::abs(v - w) / v);
        }
      }
  }
  out.positive = out.min_value > 0.0 && std::isfinite(out.min_value);
  out.symmetric = out.symmetry_residual < 1e-12;
  return out;
}

std::vector<OperatorSum2> rho_hat(const DifferentialStructure& ds,
                                  const ThetaAssignment& theta, const Mat& rho) {
  if (theta.size() != ds.size()) throw Error("theta assignment does not match directions");
  std::vector<OperatorSum2> out;
  out.reserve(ds.size());
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    out.push_back(doubsum(theta[j], spectral(d.ell(rho)), spectral(d.r(rho))));
  }
  return out;
}

std::vector<OperatorSum2> rho_check(const DifferentialStructure& ds,
                                    const ThetaAssignment& theta, const Mat& rho) {
  if (min_eigenvalue(hermitize(rho, "state")) <= 0.0) throw Error("state not strictly positive");
  std::vector<OperatorSum2> out = rho_hat(ds, theta, rho);
  for (auto& s : out) s = s.map([](double x) { return 1.0 / x; });
  return out;
}

}  // namespace qmt
