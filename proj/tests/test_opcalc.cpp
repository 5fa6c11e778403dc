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

TEST_CASE("mean values against the scalar oracle") {
  // tests/oracles/scalars.py
  CHECK(MeanFunction::logarithmic()(4.0, 1.0) == doctest::Approx(2.1640425613334449).epsilon(1e-14));
  CHECK(MeanFunction::power(-1.0)(1.0, 3.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(MeanFunction::power(0.5)(2.0, 8.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(MeanFunction::arithmetic()(2.0, 8.0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(discrete_derivative(ScalarFunction::log(), std::exp(1.0), 1.0) ==
        doctest::Approx(0.58197670686932645).epsilon(1e-14));
  CHECK(discrete_derivative(ScalarFunction::log(), 2.0, 2.0) == doctest::Approx(0.5));
}

TEST_CASE("means are symmetric, homogeneous and normalized") {
  for (const MeanFunction& th : {MeanFunction::logarithmic(), MeanFunction::power(2.0),
                                 MeanFunction::power(0.5), MeanFunction::power(-1.0),
                                 MeanFunction::power(3.0), MeanFunction::power(0.3)}) {
    CAPTURE(th.name());
    CHECK(th(1.7, 1.7) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(th(0.3, 2.1) == doctest::Approx(th(2.1, 0.3)).epsilon(1e-12));
    CHECK(th(0.6, 4.2) == doctest::Approx(3.0 * th(0.2, 1.4)).epsilon(1e-12));
    CHECK(th.homogeneous());
  }
  // theta_{m,beta}(r, s) = theta_m(e^{-beta/2} r, e^{beta/2} s)
  const double b = 0.7;
  CHECK(MeanFunction::tilted_log(b)(2.0, 0.5) ==
        doctest::Approx(MeanFunction::logarithmic()(std::exp(-b / 2) * 2.0, std::exp(b / 2) * 0.5))
            .epsilon(1e-13));
}

TEST_CASE("mean derivatives match finite differences") {
  const double h = 1e-5;
  for (const MeanFunction& th : {MeanFunction::logarithmic(), MeanFunction::power(0.5),
                                 MeanFunction::power(-1.0), MeanFunction::tilted_log(0.4),
                                 MeanFunction::power(3.0, 0.2)}) {
    CAPTURE(th.name());
    for (auto [r, s] : {std::pair{0.7, 1.9}, std::pair{1.3, 1.3}, std::pair{2.5, 0.4}}) {
      CHECK(th.d1(r, s) == doctest::Approx((th(r + h, s) - th(r - h, s)) / (2 * h)).epsilon(1e-7));
      CHECK(th.d2(r, s) == doctest::Approx((th(r, s + h) - th(r, s - h)) / (2 * h)).epsilon(1e-7));
      CHECK(th.d11(r, s) ==
            doctest::Approx((th.d1(r + h, s) - th.d1(r - h, s)) / (2 * h)).epsilon(1e-6));
      CHECK(th.d22(r, s) ==
            doctest::Approx((th.d2(r, s + h) - th.d2(r, s - h)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("operator monotone flags") {
  CHECK(MeanFunction::logarithmic().operator_monotone());
  CHECK(MeanFunction::power(2.0).operator_monotone());
  CHECK(MeanFunction::power(-1.0).operator_monotone());
  CHECK_FALSE(MeanFunction::power(3.0).operator_monotone());
}

TEST_CASE("spectral clustering merges degenerate eigenvalues") {
  Rng rng(1);
  Mat U = haar_unitary(3, rng);
  Mat D = Mat::Zero(3, 3);
  D(0, 0) = 1.0, D(1, 1) = 1.0 + 1e-15, D(2, 2) = 2.0;
  Mat A = U * D * U.adjoint();
  Spectral s = spectral(A);
  CHECK(s.clusters() == 2);
  CHECK(rel_err(s.reconstruct(), A) < 1e-12);
  Mat P = s.projector(0);
  CHECK(rel_err(P * P, P) < 1e-12);
  CHECK(std::abs(P.trace().real() - 2.0) < 1e-12);
  Mat sq = s.apply([](double x) { return x * x; });
  CHECK(rel_err(sq, A * A) < 1e-12);
}

TEST_CASE("double operator sums") {
  Rng rng(2);
  Algebra a = Algebra::full(3);
  Mat R = random_state(a, rng), S = random_state(a, rng), C = random_ginibre(3, 3, rng);
  Spectral sr = spectral(R), ss = spectral(S);
  SUBCASE("arithmetic mean is (RC + CS)/2") {
    Mat lhs = doubsum(MeanFunction::arithmetic(), sr, ss).contract(C);
    CHECK(rel_err(lhs, 0.5 * (R * C + C * S)) < 1e-12);
  }
  SUBCASE("theta composed with 1/theta is the identity") {
    OperatorSum2 t = doubsum(MeanFunction::logarithmic(), sr, ss);
    OperatorSum2 inv = doubsum(MeanFunction::reciprocal_of(MeanFunction::logarithmic()), sr, ss);
    CHECK(rel_err(t.times(inv).contract(C), C) < 1e-12);
    CHECK(rel_err(inv.contract(t.contract(C)), C) < 1e-12);
  }
  SUBCASE("divided difference of log solves the BKM identity") {
    // delta log(R, R) # (R C - C R) = log R C - C log R
    Mat lhs = divided_difference(ScalarFunction::log(), sr, sr).contract(R * C - C * R);
    Mat L = pos_log(R);
    CHECK(rel_err(lhs, L * C - C * L) < 1e-10);
  }
}

TEST_CASE("chain rule for skew derivations") {
  Rng rng(3);
  Algebra a = Algebra::full(3);
  Mat V = random_ginibre(3, 3, rng);
  Mat A = random_state(a, rng), B = random_state(a, rng);
  for (const ScalarFunction& f : {ScalarFunction::log(), ScalarFunction::exp(),
                                  ScalarFunction::square(), ScalarFunction::xlogx(),
                                  ScalarFunction::power(0.3)}) {
    CAPTURE(f.name);
    // d(X) = V r(X) - l(X) V with l = id on A, r = id on B-valued inputs.
    Mat fA = herm_func(A, f.f), fB = herm_func(B, f.f);
    Mat lhs = chain_partial(f, A, B, Mat(V * B - A * V));
    CHECK(rel_err(lhs, Mat(V * fB - fA * V)) < 1e-10);
  }
}

TEST_CASE("tree divided differences") {
  const MeanFunction th = MeanFunction::logarithmic();
  const double x = 0.8, y = 1.7, z = 0.5, w = 2.2;
  const double left = (th(x, z) - th(y, z)) / (x - y);
  CHECK(tree_coeff(th, TreeShape::left3, x, y, z) == doctest::Approx(left).epsilon(1e-12));
  const double right = (th(x, y) - th(x, z)) / (y - z);
  CHECK(tree_coeff(th, TreeShape::right3, x, y, z) == doctest::Approx(right).epsilon(1e-12));
  auto l3 = [&](double a, double b, double c) { return tree_coeff(th, TreeShape::left3, a, b, c); };
  const double l4 = (l3(x, z, w) - l3(y, z, w)) / (x - y);
  CHECK(tree_coeff(th, TreeShape::left4, x, y, z, w) == doctest::Approx(l4).epsilon(1e-10));
  // Confluent limits
  CHECK(tree_coeff(th, TreeShape::left3, x, x, z) == doctest::Approx(th.d1(x, z)).epsilon(1e-10));
  CHECK(tree_coeff(th, TreeShape::right3, x, y, y) == doctest::Approx(th.d2(x, y)).epsilon(1e-10));
  CHECK(tree_coeff(th, TreeShape::left3, x, x + 1e-9, z) ==
        doctest::Approx(th.d1(x, z)).epsilon(1e-7));
}

TEST_CASE("tree sums agree with differentiated double sums") {
  Rng rng(4);
  Algebra a = Algebra::full(3);
  const MeanFunction th = MeanFunction::power(0.5);
  Mat L = random_state(a, rng), R = random_state(a, rng);
  Mat X = random_hermitian(a, rng), C = random_ginibre(3, 3, rng);
  const double h = 1e-6;
  Mat plus = doubsum(th, Mat(L + h * X), R).contract(C);
  Mat minus = doubsum(th, Mat(L - h * X), R).contract(C);
  Mat fd = (plus - minus) / (2 * h);
  Spectral sl = spectral(L), sr = spectral(R);
  CHECK(rel_err(tree_left(th, sl, sl, sr, X, C), fd) < 1e-7);
  plus = doubsum(th, L, Mat(R + h * X)).contract(C);
  minus = doubsum(th, L, Mat(R - h * X)).contract(C);
  fd = (plus - minus) / (2 * h);
  CHECK(rel_err(tree_right(th, sl, sr, sr, X, C), fd) < 1e-7);

  // Dual forms: tau-gradient of B -> tau[X* tree(B, X)].
  Mat Y = random_ginibre(3, 3, rng);
  Mat B = random_hermitian(a, rng);
  const double lhs = a.inner(Y, tree_left(th, sl, sl, sr, B, Y)).real();
  CHECK(lhs == doctest::Approx(a.inner(tree_left_dual(th, sl, sr, Y), B).real()).epsilon(1e-10));
  const double rhs = a.inner(Y, tree_right(th, sl, sr, sr, B, Y)).real();
  CHECK(rhs == doctest::Approx(a.inner(tree_right_dual(th, sl, sr, Y), B).real()).epsilon(1e-10));
}

TEST_CASE("quasi entropy") {
  Rng rng(5);
  Algebra a = Algebra::full(3);
  Mat R = random_state(a, rng), S = random_state(a, rng), A = random_ginibre(3, 3, rng);
  const MeanFunction th = MeanFunction::logarithmic();
  const double q = quasi_entropy(th, 1.0, R, S, A);
  CHECK(q > 0.0);
  CHECK(quasi_entropy(th, 1.0, 2.0 * R, 2.0 * S, A) == doctest::Approx(q / 2.0).epsilon(1e-12));
  CHECK(quasi_entropy(th, 1.0, 2.0 * R, 2.0 * S, Mat(2.0 * A)) == doctest::Approx(2.0 * q).epsilon(1e-12));
  Mat one = Mat::Identity(3, 3);
  CHECK(quasi_entropy(th, 1.0, one, one, A) == doctest::Approx((A.adjoint() * A).trace().real()).epsilon(1e-12));
}

TEST_CASE("convexity probe") {
  ConvexityReport good = convexity_probe(MeanFunction::logarithmic(), 1.0, 300, 2, 17);
  CHECK_FALSE(good.violated);
  CHECK(good.status == "consistent");
  ConvexityReport bad = convexity_probe(MeanFunction::power(3.0), 1.0, 5000, 2, 17);
  CHECK(bad.violated);
  CHECK(bad.status == "violated");
  CHECK(bad.worst_trial >= 0);
}

TEST_CASE("quasi entropy contracts under channels for monotone means") {
  Rng rng(6);
  Algebra a = Algebra::full(3);
  for (int k = 0; k < 20; ++k) {
    Mat R = random_state(a, rng), S = random_state(a, rng), A = random_ginibre(3, 3, rng);
    auto K = random_kraus(3, 3, rng);
    ContractivityResult c = cptp_contractivity_probe(MeanFunction::logarithmic(), R, S, A, K);
    CHECK(c.lhs <= c.rhs * (1 + 1e-10));
  }
}
