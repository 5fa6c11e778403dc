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

#include <string>
#include <vector>

#include "qmt/entropyflow.hpp"

namespace qmt {

/// I_sigma(rho) / (2 Ent_sigma(rho)).
double mlsi_ratio(const DifferentialStructure& ds, const Mat& rho);

struct MlsiOptions {
  int samples = 100;
  int boundary_samples = 20;
  int trajectories = 4;
  double t_max = 2.0;
  int t_steps = 40;
  int refine_evals = 300;
  std::uint64_t seed = 4242;
};

struct MlsiResult {
  double lambda_hat = 0.0;
  double sampled_min = 0.0;  // over random states, boundary states and trajectories
  double linearized = 0.0;   // limit of the ratio at sigma, the Poincare constant
  std::string method;
  Mat witness;  // empty when the linearized limit is the minimum
  int samples = 0;
  std::vector<double> slopes;  // least-squares slopes of log Ent along trajectories
};
MlsiResult mlsi_constant(const DifferentialStructure& ds, const MlsiOptions& opt = {});

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // rhs - lhs
  double slack = 0.0;     // solver tolerance propagated to the residual
  bool holds = true;
};

/// Ent <= W sqrt(I) - kappa/2 W^2.
InequalityCheck hwi_check(const DifferentialStructure& ds, double kappa, const Mat& rho,
                          const DistanceOptions& opt = {});
/// W(rho, sigma) <= sqrt(2 Ent / lambda).
InequalityCheck talagrand_check(const DifferentialStructure& ds, double lambda, const Mat& rho,
                                const DistanceOptions& opt = {});
/// W_1(rho, sigma) <= sqrt(2 Ent / lambda).
InequalityCheck t1_check(const DifferentialStructure& ds, double lambda, const Mat& rho);

/// Smallest generalized eigenvalue of (||grad A||_sigma^2, ||A||_BKM^2) on the
/// BKM complement of 1.
double poincare_constant(const DifferentialStructure& ds);

struct DecayCheck {
  double max_violation = 0.0;  // max Ent(t) - e^{-2 lambda t} Ent(0)
  bool holds = true;
};
DecayCheck entropy_decay_check(const DifferentialStructure& ds, double lambda, const Mat& rho,
                               const std::vector<double>& t_grid, double slack = 1e-6);

struct SampledInequality {
  double constant = 0.0;
  int samples = 0;
  double worst_residual = 0.0;
  Mat worst_witness;
  bool holds = true;
};

struct InequalityReport {
  std::string structure_id;
  RicciEstimate ric;
  MlsiResult mlsi;
  SampledInequality talagrand;
  SampledInequality t1;
  double poincare = 0.0;
  double comparison_M = 1.0;
  // Chain statuses: Ric -> MLSI -> T_W -> (P, T_1).
  bool ric_le_mlsi = false;
  bool mlsi_le_poincare = false;
  struct Runtimes {
    double ric = 0.0, mlsi = 0.0, talagrand = 0.0, t1 = 0.0, poincare = 0.0;
  } runtimes;
};

struct ReportOptions {
  RicciScanOptions ricci;
  MlsiOptions mlsi;
  DistanceOptions distance;
  int transport_samples = 20;
  std::uint64_t seed = 99;
};
InequalityReport inequality_report(const DifferentialStructure& ds,
                                   const ReportOptions& opt = {});

}  // namespace qmt
