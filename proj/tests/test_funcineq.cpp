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

#include "test_util.hpp"

using namespace qmt;

TEST_CASE("Poincare constants against closed forms") {
  // tests/oracles/markov_chain.py
  CHECK(poincare_constant(build_depolarizing(1.0, 2)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(poincare_constant(build_depolarizing(0.3, 3, true)) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(poincare_constant(qmt::testing::two_point()) == doctest::Approx(2.0).epsilon(1e-10));
  const double chain = 3.3021076936306075;
  CHECK(poincare_constant(build_markov_graph(qmt::testing::chain4_q(), qmt::testing::chain4_pi())) ==
        doctest::Approx(chain).epsilon(1e-10));
  CHECK(poincare_constant(build_markov_lindblad(qmt::testing::chain4_q(), qmt::testing::chain4_pi())) ==
        doctest::Approx(chain).epsilon(1e-10));
  CHECK(poincare_constant(build_fermion_ou(2)) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("MLSI estimate") {
  auto ds = build_markov_graph(qmt::testing::chain4_q(), qmt::testing::chain4_pi());
  MlsiOptions opt;
  opt.samples = 40;
  opt.boundary_samples = 8;
  opt.trajectories = 2;
  opt.refine_evals = 100;
  MlsiResult m = mlsi_constant(ds, opt);
  const double P = poincare_constant(ds);
  CHECK(m.lambda_hat <= P + 1e-9);
  CHECK(m.linearized == doctest::Approx(P).epsilon(1e-10));
  CHECK(m.lambda_hat == doctest::Approx(std::min(m.sampled_min, m.linearized)));
  CHECK(m.lambda_hat > 0.0);
  CHECK(m.slopes.size() == 2);
  // The ratio never falls below the estimate on fresh states.
  Rng rng(31);
  for (int k = 0; k < 20; ++k) {
    Mat rho = random_state(ds.algebra(), rng);
    CHECK(mlsi_ratio(ds, rho) >= m.lambda_hat - 1e-9);
  }
  // Entropy decay at the estimated rate
  Mat rho = random_state(ds.algebra(), rng);
  CHECK(entropy_decay_check(ds, m.lambda_hat, rho, {0.1, 0.5, 1.0}).holds);
  CHECK_FALSE(entropy_decay_check(ds, 10 * m.lambda_hat, rho, {0.1, 0.5, 1.0}).holds);
}

TEST_CASE("MLSI of the depolarizing qubit is attained at sigma") {
  MlsiOptions opt;
  opt.samples = 30;
  opt.boundary_samples = 5;
  opt.trajectories = 1;
  opt.refine_evals = 60;
  MlsiResult m = mlsi_constant(build_depolarizing(1.0, 2), opt);
  CHECK(m.lambda_hat == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(m.method == "linearization-at-sigma");
}

TEST_CASE("HWI, Talagrand and T1") {
  auto ds = build_depolarizing(1.0, 2);
  Rng rng(5);
  for (int k = 0; k < 5; ++k) {
    Mat rho = random_state(ds.algebra(), rng);
    InequalityCheck h = hwi_check(ds, 1.0, rho);
    CHECK(h.holds);
    CHECK(h.residual >= -h.slack);
    CHECK(talagrand_check(ds, 1.0, rho).holds);
    CHECK(t1_check(ds, 1.0, rho).holds);
  }
  // An inflated curvature breaks HWI far from sigma.
  Mat far = random_state(ds.algebra(), rng, StateSampling{1e-3});
  InequalityCheck bad = hwi_check(ds, 10.0, far);
  CHECK_FALSE(bad.holds);
  CHECK(bad.residual < 0.0);
  CHECK_FALSE(talagrand_check(ds, 50.0, far).holds);
}

TEST_CASE("inequality report chain") {
  auto ds = qmt::testing::two_point();
  ReportOptions opt;
  opt.ricci.samples = 20;
  opt.ricci.boundary_samples = 4;
  opt.ricci.refine = 1;
  opt.ricci.refine_evals = 60;
  opt.mlsi.samples = 20;
  opt.mlsi.boundary_samples = 4;
  opt.mlsi.trajectories = 1;
  opt.mlsi.refine_evals = 60;
  opt.transport_samples = 4;
  InequalityReport r = inequality_report(ds, opt);
  CHECK(r.structure_id == ds.id());
  CHECK(r.poincare == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(r.ric_le_mlsi);
  CHECK(r.mlsi_le_poincare);
  CHECK(r.ric.lambda_hat <= r.mlsi.lambda_hat + 1e-9);
  CHECK(r.talagrand.holds);
  CHECK(r.t1.holds);
  CHECK(r.talagrand.samples == 4);
}
