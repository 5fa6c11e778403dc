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

#include <optional>
#include <string>
#include <vector>

#include "qmt/transport.hpp"

namespace qmt {

/// Ent_sigma(rho) = tau[rho (log rho - log sigma)], with 0 log 0 = 0.
double entropy(const Algebra& alg, const Mat& sigma, const Mat& rho);
double entropy(const DifferentialStructure& ds, const Mat& rho);

struct FisherForms {
  double trace_form = 0.0;   // -tau[(log rho - log sigma) L^dagger rho]
  double metric_form = 0.0;  // ||grad(log rho - log sigma)||_rho^2
};
FisherForms fisher_forms(const DifferentialStructure& ds, const ThetaAssignment& theta,
                         const Mat& rho);
double fisher(const DifferentialStructure& ds, const Mat& rho);

struct FlowResidual {
  double residual = 0.0;        // ||L^dagger rho + K_rho(log rho - log sigma)||
  double chain_residual = 0.0;  // max over directions of the log chain rule gap
};
FlowResidual gradient_flow_residual(const DifferentialStructure& ds,
                                    const ThetaAssignment& theta, const Mat& rho);

/// F(rho) = tau[f(rho)] with mobility phi on a structure with sigma = 1.
struct GeneralEntropy {
  ScalarFunction f;
  ScalarFunction phi;
  /// theta(l, m) = (phi(l) - phi(m)) / (f'(l) - f'(m)), phi'/f'' on the diagonal.
  MeanFunction theta() const;
};
/// ||L phi(rho) + K_rho f'(rho)||.
double general_flow_residual(const DifferentialStructure& ds, const GeneralEntropy& ent,
                             const Mat& rho);

// ---------------------------------------------------------------------------
// Hessian of the entropy

struct HessianValue {
  double eta1 = 0.0;  // tree sums over the ell side
  double eta2 = 0.0;  // tree sums over the r side
};
HessianValue hessian_entropy(const DifferentialStructure& ds, const ThetaAssignment& theta,
                             const Mat& rho, const Mat& A);
/// Polarized Hessian Hess[A, B].
double hessian_bilinear(const DifferentialStructure& ds, const ThetaAssignment& theta,
                        const Mat& rho, const Mat& A, const Mat& B);

struct HessianPencil {
  RMat hess;    // symmetric, Hermitian basis coordinates
  RMat metric;  // K_rho
};
HessianPencil hessian_pencil(const DifferentialStructure& ds, const ThetaAssignment& theta,
                             const Mat& rho);

struct RayleighMin {
  double value = 0.0;
  Mat A;  // minimizing potential, normalized by <A, K_rho A> = 1
};
/// min over A in the complement of Ker(grad) of Hess[A,A] / <A, K_rho A>.
RayleighMin rayleigh_minimum(const DifferentialStructure& ds, const ThetaAssignment& theta,
                             const Mat& rho);

struct RicciWitness {
  Mat rho;
  Mat A;
  double quotient = 0.0;
};

struct RicciEstimate {
  double lambda_hat = 0.0;
  std::string method;  // "rayleigh-scan" or "intertwining"
  std::string label;   // "estimate" or "certificate"
  double residual = 0.0;
  double scan_minimum = 0.0;  // before refinement
  bool stable = false;        // refinement moved the minimum by less than 1e-6
  std::vector<RicciWitness> witnesses;
};

struct RicciScanOptions {
  int samples = 200;
  int refine = 5;
  int boundary_samples = 20;
  int refine_evals = 600;
  std::uint64_t seed = 2026;
};
RicciEstimate ricci_scan(const DifferentialStructure& ds, const ThetaAssignment& theta,
                         const RicciScanOptions& opt = {});

struct IntertwiningResult {
  std::optional<double> lambda;
  double fitted = 0.0;   // least-squares constant, reported even when rejected
  double residual = 0.0; // max_j ||d_j L A - (L - lambda) d_j A|| relative
  std::vector<double> per_direction;
  bool applicable = false;  // every B_j equals the algebra
};
IntertwiningResult intertwining_lambda(const DifferentialStructure& ds);

/// Certificate from intertwining when available, otherwise a Rayleigh scan.
RicciEstimate ricci_estimate(const DifferentialStructure& ds, const ThetaAssignment& theta,
                             const RicciScanOptions& opt = {});

struct GradientEstimatePoint {
  double t = 0.0;
  double lhs = 0.0;  // ||grad P_t A||^2_rho
  double rhs = 0.0;  // e^{-2 lambda t} ||grad A||^2_{P_t^dagger rho}
};
struct GradientEstimateReport {
  std::vector<GradientEstimatePoint> points;
  double max_violation = 0.0;  // max (lhs - rhs) / max(rhs, tiny)
  bool holds = true;
};
GradientEstimateReport gradient_estimate_check(const DifferentialStructure& ds,
                                               const ThetaAssignment& theta, double lambda,
                                               const Mat& rho, const Mat& A,
                                               const std::vector<double>& t_grid,
                                               double slack = 1e-9);

struct ContractionResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // twice the combined solver residual
  bool holds = true;
};
ContractionResult contraction_check(const DifferentialStructure& ds,
                                    const ThetaAssignment& theta, double lambda,
                                    const Mat& rho0, const Mat& rho1, double t,
                                    const DistanceOptions& opt = {});

}  // namespace qmt
