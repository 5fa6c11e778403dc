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

#include <vector>

#include "qmt/transport.hpp"

namespace qmt::detail {

/// sum_j d_j^dagger(hat_j # d_j A).
Mat apply_metric(const DifferentialStructure& ds, const std::vector<OperatorSum2>& hat,
                 const Mat& A);
RMat metric_matrix_from(const DifferentialStructure& ds, const std::vector<OperatorSum2>& hat);

struct PseudoSolve {
  Vec x;
  double residual = 0.0;
};
/// Minimum norm solution with eigenvalue cutoff 1e-11 ||K||.
PseudoSolve pseudo_solve(const RMat& K, const Vec& nu);

}  // namespace qmt::detail
