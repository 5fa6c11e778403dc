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

#include "qmt/opcalc.hpp"

namespace qmt {

double quasi_entropy(const MeanFunction& theta, double p, const Mat& R,
                     const Mat& S, const Mat& A) {
  Spectral sr = spectral(hermitize(R, "R"));
  Spectral ss = spectral(hermitize(S, "S"));
  if (sr.values.minCoeff() <= 0.0 || ss.values.minCoeff() <= 0.0)
    throw Error("quasi-entropy requires strictly positive arguments");
  OperatorSum2 w = make_sum(sr, ss, [&](double x, double y) {
    return std::pow(theta(x, y), -p);
  });
  return A.cwiseProduct(w.contract(A).conjugate()).sum().real();
}

namespace {

Mat diag_state(const Vec& v) { return Mat(v.cast<cplx>().asDiagonal()); }

Vec log_uniform(int n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = std::exp(u(rng));
  return v;
}

Mat rotate(const Vec& v, Rng& rng) {
  Mat U = haar_unitary(static_cast<int>(v.size()), rng);
  Mat out = U * diag_state(v) * U.adjoint();
  return 0.5 * (out + out.adjoint());
}

struct Triple {
  Mat R, S, A;
};

// Modes: commuting diagonal pairs with wide spectra, generic rotated pairs,
// and segments along R alone with S and A held fixed.
void sample_pair(int mode, int n, Rng& rng, Triple& t0, Triple& t1) {
  switch (mode % 3) {
    case 0:
      t0 = {diag_state(log_uniform(n, -4, 4, rng)), diag_state(log_uniform(n, -4, 4, rng)),
            random_ginibre(n, n, rng)};
      t1 = {diag_state(log_uniform(n, -4, 4, rng)), diag_state(log_uniform(n, -4, 4, rng)),
            random_ginibre(n, n, rng)};
      break;
    case 1:
      t0 = {rotate(log_uniform(n, -3, 3, rng), rng), rotate(log_uniform(n, -3, 3, rng), rng),
            random_ginibre(n, n, rng)};
      t1 = {rotate(log_uniform(n, -3, 3, rng), rng), rotate(log_uniform(n, -3, 3, rng), rng),
            random_ginibre(n, n, rng)};
      break;
    default: {
      Mat S = diag_state(log_uniform(n, -1, 1, rng));
      Mat A = random_ginibre(n, n, rng);
      t0 = {diag_state(log_uniform(n, -7, 0, rng)), S, A};
      t1 = {diag_state(log_uniform(n, -7, 0, rng)), S, A};
      break;
    }
  }
}

}  // namespace

ConvexityReport convexity_probe(const MeanFunction& theta, double p, int trials,
                                int n, std::uint64_t seed, double tol) {
  if (trials < 1) throw Error("convexity probe needs at least one trial");
  Rng rng(seed);
  ConvexityReport rep;
  rep.trials = trials;
  rep.max_violation = -INFINITY;
  for (int k = 0; k < trials; ++k) {
    Triple a, b;
    sample_pair(k, n, rng, a, b);
    const double f0 = quasi_entropy(theta, p, a.R, a.S, a.A);
    const double f1 = quasi_entropy(theta, p, b.R, b.S, b.A);
    const double fm = quasi_entropy(theta, p, 0.5 * (a.R + b.R), 0.5 * (a.S + b.S),
                                    0.5 * (a.A + b.A));
    const double avg = 0.5 * (f0 + f1);
    const double v = (fm - avg) / std::max(avg, 1e-300);
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.worst_trial = k;
    }
  }
  rep.violated = rep.max_violation > tol;
  rep.status = rep.violated ? "violated" : "consistent";
  return rep;
}

ContractivityResult cptp_contractivity_probe(const MeanFunction& theta, const Mat& R,
                                             const Mat& S, const Mat& A,
                                             const std::vector<Mat>& kraus) {
  if (kraus.empty()) throw Error("channel needs at least one Kraus operator");
  const int n = static_cast<int>(R.rows());
  Mat tp = Mat::Zero(n, n);
  for (const Mat& k : kraus) tp += k.adjoint() * k;
  if ((tp - Mat::Identity(n, n)).norm() > 1e-10)
    throw Error("channel is not trace preserving");
  ContractivityResult r;
  r.rhs = quasi_entropy(theta, 1.0, R, S, A);
  Mat tr = apply_kraus(kraus, R), ts = apply_kraus(kraus, S);
  r.lhs = quasi_entropy(theta, 1.0, 0.5 * (tr + tr.adjoint()), 0.5 * (ts + ts.adjoint()),
                        apply_kraus(kraus, A));
  return r;
}

}  // namespace qmt
