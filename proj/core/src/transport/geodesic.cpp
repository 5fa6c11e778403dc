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
#include "transport_internal.hpp"

namespace qmt {

namespace {

struct State {
  Mat rho;
  Mat A;
};

struct Flow {
  Mat drho;
  Mat dA;
  double gap = 0.0;
};

Flow velocity(const DifferentialStructure& ds, const ThetaAssignment& theta, const State& s) {
  Flow f;
  f.drho = detail::apply_metric(ds, rho_hat(ds, theta, s.rho), s.A);
  f.drho = 0.5 * (f.drho + f.drho.adjoint()).eval();
  PhiForms phi = metric_derivative_forms(ds, theta, s.rho, s.A);
  f.dA = -phi.value();
  const double scale = std::max(phi.left.norm(), phi.right.norm());
  f.gap = scale > 1e-300 ? (phi.left - phi.right).norm() / scale : 0.0;
  return f;
}

double energy(const DifferentialStructure& ds, const ThetaAssignment& theta, const State& s) {
  Mat k = detail::apply_metric(ds, rho_hat(ds, theta, s.rho), s.A);
  return ds.algebra().inner(s.A, k).real();
}

bool admissible(const Mat& rho, double floor) { return min_eigenvalue(rho) >= floor; }

}  // namespace

GeodesicResult geodesic_shoot(const DifferentialStructure& ds, const ThetaAssignment& theta,
                              const Mat& rho0, const Mat& A0, const GeodesicOptions& opt) {
  ds.require_validated();
  if (theta.size() != ds.size()) throw Error("theta assignment does not match directions");
  if (opt.steps < 1 || !(opt.T > 0.0)) throw Error("geodesic needs T > 0 and steps >= 1");
  const Algebra& alg = ds.algebra();
  State s{hermitize(rho0, "state"), alg.project(hermitize(A0, "potential"))};
  if (!admissible(s.rho, opt.abort_eig)) throw Error("state not strictly positive");
  GeodesicResult out;
  out.energy0 = energy(ds, theta, s);
  const double escale = std::max(std::abs(out.energy0), 1e-300);
  const double h = opt.T / opt.steps;
  // Substeps per step are doubled while the energy drift of a step exceeds this.
  const double step_drift = 1e-9;
  out.curve.t.push_back(0.0);
  out.curve.rho.push_back(s.rho);
  out.curve.A.push_back(s.A);
  double e_prev = out.energy0;
  for (int k = 0; k < opt.steps && !out.aborted; ++k) {
    State next;
    double e_next = 0.0;
    for (int sub = 1; sub <= 64; sub *= 2) {
      const double hs = h / sub;
      State cur = s;
      bool ok = true;
      for (int q = 0; q < sub && ok; ++q) {
        Flow k1 = velocity(ds, theta, cur);
        out.phi_form_gap = std::max(out.phi_form_gap, k1.gap);
        State mid{cur.rho + 0.5 * hs * k1.drho, cur.A + 0.5 * hs * k1.dA};
        if (!admissible(mid.rho, opt.abort_eig)) {
          ok = false;
          break;
        }
        Flow k2 = velocity(ds, theta, mid);
        cur = State{cur.rho + hs * k2.drho, cur.A + hs * k2.dA};
        cur.rho = 0.5 * (cur.rho + cur.rho.adjoint()).eval();
        cur.A = 0.5 * (cur.A + cur.A.adjoint()).eval();
        if (!admissible(cur.rho, opt.abort_eig)) ok = false;
      }
      if (!ok) {
        out.aborted = true;
        break;
      }
      next = cur;
      e_next = energy(ds, theta, next);
      if (std::abs(e_next - e_prev) <= step_drift * escale || sub == 64) break;
    }
    if (out.aborted) break;
    s = next;
    e_prev = e_next;
    out.energy_drift = std::max(out.energy_drift, std::abs(e_next - out.energy0) / escale);
    out.curve.t.push_back((k + 1) * h);
    out.curve.rho.push_back(s.rho);
    out.curve.A.push_back(s.A);
  }
  if (out.energy0 == 0.0) out.energy_drift = std::abs(e_prev);
  return out;
}

}  // namespace qmt
