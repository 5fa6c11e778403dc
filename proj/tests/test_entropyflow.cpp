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
using qmt::testing::rel_err;

namespace {

Mat pauli_state(double x, double y, double z) {
  Mat r(2, 2);
  r << 1 + z, cplx(x, -y), cplx(x, y), 1 - z;
  return r;
}

Mat pauli_element(double x, double y, double z) {
  Mat a(2, 2);
  a << z, cplx(x, -y), cplx(x, y), -z;
  return a;
}

}  // namespace

TEST_CASE("relative entropy oracle") {
  // tests/oracles/scalars.py
  Mat rho(2, 2), sig(2, 2);
  rho << 1.3, cplx(0.2, -0.1), cplx(0.2, 0.1), 0.7;
  sig << 1.1, 0.3, 0.3, 0.9;
  CHECK(entropy(Algebra::full(2), sig, rho) == doctest::Approx(3.1218632393796256e-02).epsilon(1e-12));
  CHECK(std::abs(entropy(Algebra::full(2), sig, sig)) < 1e-15);
  // 0 log 0 = 0 on a rank deficient state
  Mat pure = qmt::testing::diag2(2.0, 0.0);
  CHECK(entropy(Algebra::full(2), Mat::Identity(2, 2), pure) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("entropy Hessian of the depolarizing qubit against the geodesic oracle") {
  // tests/oracles/depolarizing_hessian.py: Bloch coordinates of rho and A,
  // second derivative of Ent along the geodesic and <A, K_rho A>.
  struct Case {
    double r[3], a[3], hess, kaa;
  };
  const Case cases[] = {
      {{0.3, -0.2, 0.1}, {0.7, 0.1, -0.4}, 6.6083629364e-01, 6.4007733882e-01},
      {{0.0, 0.0, 0.6}, {1.0, 0.0, 0.0}, 1.0090967677e+00, 9.3280851227e-01},
      {{0.5, 0.4, -0.3}, {-0.2, 0.9, 0.3}, 9.6234539398e-01, 8.4135657488e-01},
      {{0.0, 0.0, 0.0}, {0.3, 0.3, 0.3}, 2.6999999999e-01, 2.7000000000e-01},
  };
  auto ds = build_depolarizing(1.0, 2);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  const Algebra& a = ds.algebra();
  for (const Case& c : cases) {
    Mat rho = pauli_state(c.r[0], c.r[1], c.r[2]);
    Mat A = pauli_element(c.a[0], c.a[1], c.a[2]);
    CHECK(a.inner(A, metric_operator(ds, th, rho, A)).real() == doctest::Approx(c.kaa).epsilon(1e-9));
    HessianValue h = hessian_entropy(ds, th, rho, A);
    CHECK(h.eta1 == doctest::Approx(c.hess).epsilon(1e-7));
    CHECK(h.eta2 == doctest::Approx(c.hess).epsilon(1e-7));
    CHECK(hessian_bilinear(ds, th, rho, A, A) == doctest::Approx(c.hess).epsilon(1e-7));
  }
}

TEST_CASE("Hessian pencil and Rayleigh minimum") {
  auto ds = build_depolarizing(1.0, 2);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  HessianPencil p = hessian_pencil(ds, th, ds.sigma());
  CHECK((p.hess - p.hess.transpose()).norm() < 1e-10);
  RayleighMin m = rayleigh_minimum(ds, th, ds.sigma());
  CHECK(m.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ds.algebra().inner(m.A, metric_operator(ds, th, ds.sigma(), m.A)).real() ==
        doctest::Approx(1.0).epsilon(1e-10));
  Rng rng(1);
  Mat rho = random_state(ds.algebra(), rng);
  RayleighMin r = rayleigh_minimum(ds, th, rho);
  Mat A = random_hermitian(ds.algebra(), rng);
  A -= ds.algebra().trace(A) * ds.algebra().identity();
  const double q = hessian_bilinear(ds, th, rho, A, A) /
                   ds.algebra().inner(A, metric_operator(ds, th, rho, A)).real();
  CHECK(q >= r.value - 1e-9);
}

TEST_CASE("Fisher information and the gradient flow") {
  for (const auto& ds : qmt::testing::all_builders()) {
    CAPTURE(ds.id());
    ThetaAssignment th = ThetaAssignment::default_for(ds);
    Rng rng(2);
    Mat rho = random_state(ds.algebra(), rng);
    FisherForms f = fisher_forms(ds, th, rho);
    CHECK(f.trace_form == doctest::Approx(f.metric_form).epsilon(1e-9));
    CHECK(f.trace_form >= 0.0);
    FlowResidual fr = gradient_flow_residual(ds, th, rho);
    CHECK(fr.residual < 1e-9);
    CHECK(fr.chain_residual < 1e-9);
    // d/dt Ent(P_t^dagger rho) = -I(rho) at t = 0
    const double h = 1e-5;
    const double dEnt = (-3 * entropy(ds, rho) + 4 * entropy(ds, semigroup_dual_apply(ds, h, rho)) -
                         entropy(ds, semigroup_dual_apply(ds, 2 * h, rho))) / (2 * h);
    CHECK(dEnt == doctest::Approx(-fisher(ds, rho)).epsilon(1e-6));
  }
}

TEST_CASE("general entropies on the hypercube") {
  auto ds = build_hypercube(3);
  Rng rng(3);
  Mat rho = random_state(ds.algebra(), rng);
  GeneralEntropy rel{ScalarFunction::xlogx(), ScalarFunction::identity()};
  CHECK(general_flow_residual(ds, rel, rho) < 1e-9);
  for (double m : {2.0, 3.0}) {
    ScalarFunction f{[m](double x) { return std::pow(x, m) / (m - 1); },
                     [m](double x) { return m / (m - 1) * std::pow(x, m - 1); },
                     [m](double x) { return m * std::pow(x, m - 2); }, "porous"};
    GeneralEntropy pm{f, ScalarFunction::power(m)};
    CHECK(general_flow_residual(ds, pm, rho) < 1e-9);
  }
  auto chain = random_lindblad(3, 17);
  CHECK_THROWS_WITH_AS(general_flow_residual(chain, rel, chain.sigma()) >= 0,
                       doctest::Contains("sigma = 1"), Error);
}

TEST_CASE("intertwining") {
  for (int n : {1, 2, 3}) {
    IntertwiningResult r = intertwining_lambda(build_fermion_ou(n));
    CAPTURE(n);
    CHECK(r.applicable);
    REQUIRE(r.lambda.has_value());
    CHECK(*r.lambda == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(r.residual < 1e-10);
  }
  IntertwiningResult dep = intertwining_lambda(build_depolarizing(1.0, 2));
  CHECK(dep.fitted == doctest::Approx(0.0).epsilon(1e-10));
  RicciEstimate fe = ricci_estimate(build_fermion_ou(2), ThetaAssignment::default_for(build_fermion_ou(2)));
  CHECK(fe.method == "intertwining");
  CHECK(fe.label == "certificate");
  CHECK(fe.lambda_hat == doctest::Approx(4.0));
}

TEST_CASE("Ricci scan on the depolarizing qubit") {
  auto ds = build_depolarizing(1.0, 2);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  RicciScanOptions opt;
  opt.samples = 40;
  opt.boundary_samples = 5;
  opt.refine = 2;
  opt.refine_evals = 200;
  RicciEstimate r = ricci_estimate(ds, th, opt);
  CHECK(r.method == "rayleigh-scan");
  CHECK(r.label == "estimate");
  CHECK(r.lambda_hat == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.lambda_hat <= r.scan_minimum + 1e-12);
  REQUIRE_FALSE(r.witnesses.empty());
  CHECK(r.witnesses.front().quotient == doctest::Approx(r.lambda_hat).epsilon(1e-9));
}

TEST_CASE("gradient estimate and contraction") {
  auto ds = build_depolarizing(1.0, 2);
  ThetaAssignment th = ThetaAssignment::default_for(ds);
  Rng rng(4);
  Mat rho = random_state(ds.algebra(), rng), A = random_hermitian(ds.algebra(), rng);
  std::vector<double> ts{0.1, 0.5, 1.0, 2.0};
  CHECK(gradient_estimate_check(ds, th, 1.0, rho, A, ts).holds);
  CHECK_FALSE(gradient_estimate_check(ds, th, 5.0, rho, A, ts).holds);
  Mat other = random_state(ds.algebra(), rng);
  ContractionResult c = contraction_check(ds, th, 1.0, rho, other, 0.5);
  CHECK(c.holds);
  CHECK(c.lhs <= c.rhs + c.slack);
}
