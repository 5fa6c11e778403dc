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

#pragma once

#include <cmath>

#include "doctest.h"
#include "qmt/funcineq.hpp"

namespace qmt::testing {

inline double rel_err(const Mat& a, const Mat& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline Vec chain4_pi() {
  Vec pi(4);
  pi << 0.1, 0.2, 0.3, 0.4;
  return pi;
}

/// Reversible rates q_ij = sqrt(pi_j / pi_i) on four states.
inline RMat chain4_q() {
  Vec pi = chain4_pi();
  RMat q = RMat::Zero(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) q(i, j) = std::sqrt(pi(j) / pi(i));
  return q;
}

inline DifferentialStructure two_point() {
  RMat q(2, 2);
  q << 0, 1, 1, 0;
  return build_markov_graph(q, Vec::Constant(2, 0.5));
}

inline Mat diag2(double a, double b) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

inline std::vector<DifferentialStructure> all_builders() {
  return {build_depolarizing(1.0, 2),
          random_lindblad(3, 17),
          build_markov_lindblad(chain4_q(), chain4_pi()),
          build_markov_graph(chain4_q(), chain4_pi()),
          build_hypercube(3),
          build_fermion_ou(2)};
}

}  // namespace qmt::testing
