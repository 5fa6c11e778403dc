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

#include "qmt/diffstruct.hpp"
#include "qmt/opcalc.hpp"

namespace qmt {

/// One mean theta_j per direction.
class ThetaAssignment {
 public:
  ThetaAssignment() = default;
  explicit ThetaAssignment(std::vector<MeanFunction> means);

  /// theta_j(r, s) = Lambda(e^{w_j/2} r, e^{-w_j/2} s).
  static ThetaAssignment default_for(const DifferentialStructure& ds);
  static ThetaAssignment uniform(const DifferentialStructure& ds, const MeanFunction& theta);

  int size() const { return static_cast<int>(means_.size()); }
  const MeanFunction& operator[](int j) const { return means_.at(j); }
  const std::vector<MeanFunction>& means() const { return means_; }
  /// Every mean is 1-homogeneous and operator monotone.
  bool convex() const;

 private:
  std::vector<MeanFunction> means_;
};

struct ThetaCheck {
  double min_value = 0.0;
  double symmetry_residual = 0.0;  // max |theta_j(r,s) - theta_{j*}(s,r)| / theta
  double lower_bound = 0.0;        // inf theta(a,b) / min(a,b) on the grid
  bool arithmetic_bound = false;   // theta_j(r,s) <= (r+s)/2 on the grid
  bool positive = false;
  bool symmetric = false;
};
ThetaCheck check_theta(const DifferentialStructure& ds, const ThetaAssignment& theta);

// ---------------------------------------------------------------------------
// Metric

std::vector<OperatorSum2> rho_hat(const DifferentialStructure& ds,
                                  const ThetaAssignment& theta, const Mat& rho);
std::vector<OperatorSum2> rho_check(const DifferentialStructure& ds,
                                    const ThetaAssignment& theta, const Mat& rho);

/// K_rho A = -div(rho_hat # grad A).
Mat metric_operator(const DifferentialStructure& ds, const ThetaAssignment& theta,
                    const Mat& rho, const Mat& A);
/// K_rho in the Hermitian orthonormal basis of the algebra.
RMat metric_matrix(const DifferentialStructure& ds, const ThetaAssignment& theta,
                   const Mat& rho);

/// Minimum norm A with K_rho A = nu.
Mat solve_continuity(const DifferentialStructure& ds, const ThetaAssignment& theta,
                     const Mat& rho, const Mat& nu);

/// sum_j tau_j[B_j* (rho_check_j # B_j)].
double action(const DifferentialStructure& ds, const ThetaAssignment& theta,
              const Mat& rho, const TangentField& B);
/// sum_j tau_j[B_j* (rho_hat_j # B_j)].
double norm_rho_sq(const DifferentialStructure& ds, const ThetaAssignment& theta,
                   const Mat& rho, const TangentField& B);
double norm_rho(const DifferentialStructure& ds, const ThetaAssignment& theta,
                const Mat& rho, const TangentField& B);
double norm_minus1_rho(const DifferentialStructure& ds, const ThetaAssignment& theta,
                       const Mat& rho, const TangentField& B);
/// sqrt(1/2 sum_j ||l_j^dagger(B_j B_j*) + r_j^dagger(B_j* B_j)||).
double b2_norm(const DifferentialStructure& ds, const TangentField& B);

/// Phi(rho, A), the derivative of <A, K_rho A>/2 in rho, from the left
/// (ell) and right (r) tree sums.
struct PhiForms {
  Mat left;
  Mat right;
  Mat value() const { return 0.5 * (left + right); }
};
PhiForms metric_derivative_forms(const DifferentialStructure& ds,
                                 const ThetaAssignment& theta, const Mat& rho,
                                 const Mat& A);

// ---------------------------------------------------------------------------
// Curves

struct Curve {
  std::vector<double> t;
  std::vector<Mat> rho;
  /// Potentials. For distance solves A[i] drives the interval [t_i, t_{i+1}].
  std::vector<Mat> A;
};

struct DistanceOptions {
  int grid_n = 16;
  int max_iter = 3000;
  double primal_tol = 1e-10;  // relative objective decrement at stop
  double eps_boundary = 1e-6;
  bool allow_nonconvex = false;
  bool richardson = true;
};

struct DistanceResult {
  double value = 0.0;        // sqrt of the discrete action on grid_n
  double extrapolated = 0.0; // Richardson over grid_n / 2 and grid_n
  double coarse = 0.0;       // value on grid_n / 2
  double residual = 0.0;     // optimization plus discretization estimate
  double stationarity = 0.0; // projected gradient norm at stop
  double continuity_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool regularized = false;
  Curve curve;
};

DistanceResult distance(const DifferentialStructure& ds, const ThetaAssignment& theta,
                        const Mat& rho0, const Mat& rho1, const DistanceOptions& opt = {});

/// Discrete action and gradient for interior states (testing hook).
struct DiscreteAction {
  double value = 0.0;
  std::vector<Mat> gradient;  // one Hermitian element per interior node
};
DiscreteAction discrete_action(const DifferentialStructure& ds, const ThetaAssignment& theta,
                               const std::vector<Mat>& nodes);

struct GeodesicOptions {
  double T = 1.0;
  int steps = 1000;
  double abort_eig = 1e-10;
};

struct GeodesicResult {
  Curve curve;
  double energy0 = 0.0;
  double energy_drift = 0.0;  // max relative change of <A, K_rho A>
  double phi_form_gap = 0.0;  // max relative gap between the two Phi forms
  bool aborted = false;
};

GeodesicResult geodesic_shoot(const DifferentialStructure& ds, const ThetaAssignment& theta,
                              const Mat& rho0, const Mat& A0, const GeodesicOptions& opt = {});

// ---------------------------------------------------------------------------
// W_1 and comparison constants

struct W1Result {
  double value = 0.0;  // attained by `potential`, a lower bound on the supremum
  Mat potential;
  int iterations = 0;
};
W1Result w1(const DifferentialStructure& ds, const Mat& rho0, const Mat& rho1);

struct ComparisonConstants {
  double M = 0.0;
  double N = 0.0;
  bool M_is_one = false;  // theta_j <= arithmetic mean on the grid
  int samples = 0;
};
ComparisonConstants comparison_constants(const DifferentialStructure& ds,
                                         const ThetaAssignment& theta, int samples = 200,
                                         std::uint64_t seed = 11);

/// Distance tables of two structures generating the same semigroup.
struct MetricComparison {
  RMat first;
  RMat second;
  double generator_gap = 0.0;
  double max_relative_difference = 0.0;
};
MetricComparison compare_metrics(const DifferentialStructure& a, const DifferentialStructure& b,
                                 const std::vector<Mat>& states, const DistanceOptions& opt = {});

}  // namespace qmt
