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

TEST_CASE("algebra bases are orthonormal and coordinates round trip") {
  for (const Algebra& a : {Algebra::full(3), Algebra::block({2, 1}), Algebra::diagonal(4),
                           Algebra::clifford(2), Algebra::diagonal(Vec::LinSpaced(3, 1.0, 3.0) / 6.0)}) {
    const auto& B = a.basis();
    REQUIRE(static_cast<int>(B.size()) == a.dim());
    for (int i = 0; i < a.dim(); ++i)
      for (int k = 0; k < a.dim(); ++k)
        CHECK(std::abs(a.inner(B[i], B[k]) - (i == k ? 1.0 : 0.0)) < 1e-12);
    Rng rng(1);
    Mat H = random_hermitian(a, rng);
    CHECK(rel_err(a.from_coords(a.real_coords(H)), H) < 1e-12);
    CHECK(std::abs(a.trace(a.identity()) - 1.0) < 1e-12);
    CHECK(a.contains(H));
  }
  CHECK(Algebra::full(3).dim() == 9);
  CHECK(Algebra::block({2, 1}).dim() == 5);
  CHECK(Algebra::clifford(2).dim() == 4);
  CHECK(Algebra::clifford(3).ambient_dim() == 8);
}

TEST_CASE("membership is checked against the block structure") {
  Algebra a = Algebra::block({1, 1});
  Mat off = Mat::Zero(2, 2);
  off(0, 1) = 1.0;
  CHECK_FALSE(a.contains(off));
  CHECK(a.membership_residual(off) > 0.5);
  CHECK(a.contains(Mat::Identity(2, 2)));
}

TEST_CASE("hermitize symmetrizes tiny drift and rejects real asymmetry") {
  Mat A(2, 2);
  A << 1.0, 0.5, 0.5 + 1e-14, 2.0;
  Mat H = hermitize(A);
  CHECK((H - H.adjoint()).norm() == 0.0);
  A(1, 0) = 0.6;
  CHECK_THROWS_AS(hermitize(A), Error);
}

TEST_CASE("s inner products") {
  Algebra a = Algebra::full(2);
  Rng rng(2);
  Mat A = random_ginibre(2, 2, rng);
  SUBCASE("sigma = 1 gives the trace pairing") {
    for (double s : {0.0, 0.3, 0.5, 1.0})
      CHECK(std::abs(s_inner(a, Mat::Identity(2, 2), s, A, A) - a.inner(A, A)) < 1e-12);
  }
  SUBCASE("KMS value on a Pauli matrix") {
    Mat sig = Mat::Zero(2, 2);
    sig(0, 0) = 0.75, sig(1, 1) = 0.25;
    Mat X(2, 2);
    X << 0, 1, 1, 0;
    // tests/oracles/scalars.py
    CHECK(s_inner(a, sig, 0.5, X, X).real() == doctest::Approx(4.3301270189221930e-01).epsilon(1e-14));
  }
  SUBCASE("norm form") {
    Mat sig = random_state(a, rng);
    for (double s : {0.2, 0.5, 0.9}) {
      Mat M = pos_power(sig, s / 2) * A * pos_power(sig, (1 - s) / 2);
      CHECK(std::abs(s_inner(a, sig, s, A, A) - a.inner(M, M)) < 1e-12);
    }
  }
  SUBCASE("singular reference state") {
    Mat sig = Mat::Zero(2, 2);
    sig(0, 0) = 2.0;
    CHECK_THROWS_WITH_AS(s_inner(a, sig, 0.5, A, A), "singular reference state", Error);
  }
}

TEST_CASE("BKM map and inverse") {
  Algebra a = Algebra::full(3);
  Rng rng(3);
  Mat sig = random_state(a, rng);
  Mat H = random_hermitian(a, rng);
  CHECK(rel_err(bkm_inverse(sig, bkm_map(sig, H)), H) < 1e-10);
  CHECK(rel_err(bkm_map(Mat::Identity(3, 3), H), H) < 1e-14);

  Mat s2 = Mat::Zero(2, 2);
  s2(0, 0) = std::exp(1.0), s2(1, 1) = 1.0;
  Mat E12 = Mat::Zero(2, 2);
  E12(0, 1) = 1.0;
  CHECK(std::abs(bkm_map(s2, E12)(0, 1) - (std::exp(1.0) - 1.0)) < 1e-13);

  // tests/oracles/scalars.py
  Mat sg(2, 2), B(2, 2);
  sg << 1.1, 0.3, 0.3, 0.9;
  B << 0, 1, 1, 0.5;
  CHECK(bkm_inner(Algebra::full(2), sg, B, B).real() ==
        doctest::Approx(1.2520041881489028e+00).epsilon(1e-13));
}

TEST_CASE("BKM inverse is completely positive while the BKM map is not positive") {
  Mat sig = Mat::Zero(2, 2);
  sig(0, 0) = 1.9, sig(1, 1) = 0.1;
  Mat C = choi_matrix(2, [&](const Mat& A) { return bkm_inverse(sig, A); });
  CHECK(min_eigenvalue(0.5 * (C + C.adjoint())) > -1e-12);
  Mat P = Mat::Ones(2, 2);
  Mat M = bkm_map(sig, P);
  CHECK(min_eigenvalue(0.5 * (M + M.adjoint())) < -1e-3);
}

TEST_CASE("relative modular operator") {
  Algebra a = Algebra::full(3);
  Rng rng(4);
  Mat one = Mat::Identity(3, 3);
  Mat A = random_ginibre(3, 3, rng);
  CHECK(rel_err(relative_modular(one, one, A), A) < 1e-14);
  Mat sig = random_state(a, rng), rho = random_state(a, rng);
  HermEig e = herm_eig(sig);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      Mat Eik = e.vectors.col(i) * e.vectors.col(k).adjoint();
      Mat D = relative_modular(sig, sig, Eik);
      CHECK(rel_err(D, (e.values(i) / e.values(k)) * Eik) < 1e-10);
    }
  }
  for (int k = 0; k < 20; ++k) {
    Mat B = random_ginibre(3, 3, rng);
    CHECK(a.inner(B, relative_modular(sig, rho, B)).real() > 0.0);
  }
  Mat sing = Mat::Zero(3, 3);
  sing(0, 0) = 3.0;
  CHECK_THROWS_WITH_AS(relative_modular(sig, sing, A), "singular state in modular operator", Error);
}

TEST_CASE("KMS Moreau decomposition") {
  Algebra a = Algebra::full(3);
  Rng rng(5);
  Mat sig = random_state(a, rng);
  for (int k = 0; k < 10; ++k) {
    Mat X = random_hermitian(a, rng);
    MoreauParts m = moreau_kms(sig, X);
    CHECK(rel_err(m.plus - m.minus, X) < 1e-10);
    CHECK(min_eigenvalue(m.plus) > -1e-10);
    CHECK(min_eigenvalue(m.minus) > -1e-10);
    CHECK(std::abs(s_inner(a, sig, 0.5, m.plus, m.minus)) < 1e-10);
    // Closest point in the cone: no sampled PSD A does better.
    auto dist = [&](const Mat& A) { return std::sqrt(s_inner(a, sig, 0.5, X - A, X - A).real()); };
    const double best = dist(m.plus);
    for (int t = 0; t < 50; ++t) {
      Mat G = random_ginibre(3, 3, rng);
      CHECK(dist(G * G.adjoint() * 0.3) >= best - 1e-12);
    }
  }
  Mat N = random_ginibre(3, 3, rng);
  CHECK_THROWS_WITH_AS(moreau_kms(sig, N), "Moreau requires self-adjoint input", Error);
}

TEST_CASE("KMS cone is self dual") {
  Algebra a = Algebra::full(3);
  Rng rng(6);
  Mat sig = random_state(a, rng);
  Mat G = random_ginibre(3, 3, rng);
  Mat X = G * G.adjoint();
  for (int k = 0; k < 50; ++k) {
    Mat H = random_ginibre(3, 3, rng);
    CHECK(s_inner(a, sig, 0.5, X, H * H.adjoint()).real() >= -1e-12);
  }
  // A non-positive X is detected by a positive witness.
  Mat Y = random_hermitian(a, rng);
  Y -= (min_eigenvalue(Y) + 0.5 * (herm_eig(Y).values.maxCoeff() - min_eigenvalue(Y))) * Mat::Identity(3, 3);
  Mat q = pos_power(sig, 0.25), qi = pos_power(sig, -0.25);
  HermEig e = herm_eig(Mat(q * Y * q));
  CVec v = e.vectors.col(0);
  REQUIRE(e.values(0) < 0.0);
  Mat W = qi * v * v.adjoint() * qi;
  CHECK(s_inner(a, sig, 0.5, Y, W).real() < 0.0);
}

TEST_CASE("GNS symmetric generators commute with the modular operator") {
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    auto ds = random_lindblad(3, seed);
    const Superop& L = ds.generator();
    CHECK(modular_commutator_residual(ds.algebra(), ds.sigma(), L) < 1e-9);
    for (double s : {0.0, 0.25, 0.8})
      CHECK(selfadjoint_residual(ds.algebra(), ds.sigma(), L, InnerProductKind::s_family(s)) < 1e-9);
  }
}

TEST_CASE("KMS tilde map") {
  Algebra a = Algebra::full(3);
  Rng rng(7);
  Mat sigma = random_state(a, rng);
  Mat Y = random_hermitian(a, rng);
  Y -= a.trace(sigma * Y) * a.identity();
  Superop P = superop_from(a, [&](const Mat& A) {
    return Mat(a.trace(sigma * A) * a.identity() + 0.5 * s_inner(a, sigma, 0.5, Y, A) * Y);
  });
  CHECK(selfadjoint_residual(a, sigma, P, InnerProductKind::kms()) < 1e-10);
  Superop W = kms_tilde_map(a, sigma, P);
  CHECK(selfadjoint_residual(a, sigma, W, InnerProductKind::bkm()) < 1e-9);
  CHECK(selfadjoint_residual(a, sigma, W, InnerProductKind::gns()) > 1e-3);
  Superop half = superop_from(a, [](const Mat& A) { return Mat(0.5 * A); });
  CHECK_THROWS_WITH_AS(kms_tilde_map(a, sigma, half), "non-unital input map", Error);
}

TEST_CASE("sampling") {
  Rng rng(8);
  Algebra a = Algebra::full(4);
  for (int k = 0; k < 10; ++k) {
    Mat r = random_state(a, rng);
    CHECK(std::abs(a.trace(r) - 1.0) < 1e-12);
    CHECK(min_eigenvalue(r) > 0.0);
    Mat b = random_state(a, rng, StateSampling{1e-6});
    CHECK(min_eigenvalue(b) < 1e-3);
  }
  Mat U = haar_unitary(4, rng);
  CHECK((U.adjoint() * U - Mat::Identity(4, 4)).norm() < 1e-12);
  auto K = random_kraus(3, 3, rng);
  Mat tp = Mat::Zero(3, 3);
  for (const Mat& k : K) tp += k.adjoint() * k;
  CHECK((tp - Mat::Identity(3, 3)).norm() < 1e-12);
  Vec d = dirichlet(5, rng);
  CHECK(d.sum() == doctest::Approx(1.0));
  CHECK(d.minCoeff() > 0.0);
}

TEST_CASE("powers of near singular states are rejected") {
  Mat s = Mat::Zero(2, 2);
  s(0, 0) = 2.0;
  s(1, 1) = 1e-14;
  CHECK_THROWS_AS(pos_log(s), Error);
  CHECK_THROWS_AS(pos_power(s, -0.5), Error);
}
