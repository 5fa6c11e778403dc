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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmt/matalg.hpp"

namespace qmt {

/// Unital *-homomorphism between algebras with its adjoint with respect to
/// the two traces.
class Homomorphism {
 public:
  enum class Kind { identity, embedding, coordinate_eval, coordinate_swap, parity, matrix };

  static Homomorphism identity(const Algebra& a);
  /// Inclusion of a subalgebra into a larger algebra on the same ambient space.
  static Homomorphism embedding(const Algebra& src, const Algebra& tgt);
  /// A -> A_kk from a diagonal algebra into a 1x1 algebra.
  static Homomorphism coordinate_eval(const Algebra& src, int k, const Algebra& tgt);
  /// Diagonal relabeling (A)_{ii} -> A_{perm[i], perm[i]}.
  static Homomorphism coordinate_swap(const Algebra& src, const std::vector<int>& perm);
  /// Grading automorphism of a Clifford algebra, Q_j -> -Q_j.
  static Homomorphism parity(const Algebra& cliff);
  static Homomorphism matrix(const Algebra& src, const Algebra& tgt,
                             std::function<Mat(const Mat&)> fwd,
                             const std::string& label);

  Kind kind() const;
  const std::string& name() const;
  const Algebra& source() const;
  const Algebra& target() const;
  /// Index of a coordinate_eval or the permutation of a coordinate_swap.
  const std::vector<int>& params() const;

  Mat operator()(const Mat& A) const;
  /// Adjoint with respect to tau_target and tau_source.
  Mat adjoint(const Mat& B) const;

  struct Data;

 private:
  std::shared_ptr<const Data> d_;
};

/// One direction j of a differential structure.
struct Direction {
  Algebra B;
  Homomorphism ell;
  Homomorphism r;
  Mat V;
  double omega = 0.0;
  int jstar = -1;
  std::string label;
};

struct AxiomCheck {
  std::string axiom;
  int direction = -1;
  double residual = 0.0;
  bool passed = true;
  bool gating = true;
};

struct ValidationReport {
  std::vector<AxiomCheck> checks;
  bool valid = false;
  std::vector<std::string> failures() const;
};

/// (A, grad, sigma): directions with partial derivatives
/// d_j A = V_j r_j(A) - ell_j(A) V_j and a reference state sigma.
class DifferentialStructure {
 public:
  DifferentialStructure(Algebra alg, std::vector<Direction> dirs, Mat sigma,
                        std::string id = "");

  const Algebra& algebra() const;
  const std::vector<Direction>& directions() const;
  const Direction& direction(int j) const;
  int size() const;
  const Mat& sigma() const;
  const std::string& id() const;
  bool validated() const;
  /// Throws "structure not validated" unless validate_structure passed.
  void require_validated() const;

  /// Generator in the Hermitian basis; computed once, thread-safe.
  const Superop& generator() const;
  const Superop& adjoint_generator() const;
  /// Spectral data of the generator symmetrized in the KMS Gram metric.
  struct SemigroupData {
    RMat half;      // G^{1/2}
    RMat half_inv;  // G^{-1/2}
    Vec eigenvalues;
    RMat eigenvectors;
  };
  const SemigroupData& semigroup_data() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> p_;
  void mark_validated() const;
  friend ValidationReport validate_structure(const DifferentialStructure& ds);
};

using TangentField = std::vector<Mat>;

// ---------------------------------------------------------------------------
// Calculus

Mat partial(const DifferentialStructure& ds, int j, const Mat& A);
TangentField gradient(const DifferentialStructure& ds, const Mat& A);
/// Adjoint of d_j between the s-weighted inner products.
Mat partial_adjoint_s(const DifferentialStructure& ds, int j, double s, const Mat& B);
/// Adjoint of d_j between L^2(tau) and L^2(tau_j).
Mat partial_adjoint(const DifferentialStructure& ds, int j, const Mat& B);
/// div B = -sum_j d_j^dagger B_j, L^2 adjoints.
Mat divergence(const DifferentialStructure& ds, const TangentField& B);

/// -sum_j d_j^dagger_sigma d_j A (KMS adjoints).
Mat generator_apply(const DifferentialStructure& ds, const Mat& A);
/// sum_j e^{-w_j/2} r_j^dagger(-r(A)V*V + 2V* l(A) V - V*V r(A)).
Mat generator_apply_alt(const DifferentialStructure& ds, const Mat& A);
Mat adjoint_generator_apply(const DifferentialStructure& ds, const Mat& rho);
/// Relative difference between the two generator formulas.
double generator_form_gap(const DifferentialStructure& ds);

Superop semigroup(const DifferentialStructure& ds, double t);
Mat semigroup_apply(const DifferentialStructure& ds, double t, const Mat& A);
Mat semigroup_dual_apply(const DifferentialStructure& ds, double t, const Mat& rho);
/// Smallest Choi eigenvalue of P_t relative to its norm.
double semigroup_cp_margin(const DifferentialStructure& ds, double t);

/// Number of generator eigenvalues within tol of zero.
int kernel_dimension(const DifferentialStructure& ds, double tol = 1e-9);
bool is_ergodic(const DifferentialStructure& ds);

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_structure(const DifferentialStructure& ds);

struct DetailedBalanceResult {
  double selfadjoint_residual = 0.0;
  double dirichlet_identity_residual = 0.0;
};
DetailedBalanceResult detailed_balance_check(const DifferentialStructure& ds,
                                             InnerProductKind kind,
                                             std::uint64_t seed = 7);

/// sum_j <d_j A1, d_j A2>_{KMS, j}.
cplx dirichlet_form_c(const DifferentialStructure& ds, const Mat& A1, const Mat& A2);
double dirichlet_form(const DifferentialStructure& ds, const Mat& A1, const Mat& A2);

struct DirichletReport {
  int samples = 0;
  double max_value = -INFINITY;  // max of E(X+, X-), must be <= 1e-10
  bool passed = true;
};

enum class DirichletSource {
  gradient,   // sum of KMS pairings of partial derivatives
  generator,  // -<A, L B>_KMS with the assembled generator
};

DirichletReport dirichlet_positivity_check(const DifferentialStructure& ds, int samples,
                                           std::uint64_t seed,
                                           DirichletSource src = DirichletSource::gradient);
DirichletReport complete_dirichlet_check(const DifferentialStructure& ds, int m,
                                         int samples, std::uint64_t seed,
                                         DirichletSource src = DirichletSource::gradient);

// ---------------------------------------------------------------------------
// Builders. Each returns a validated structure or throws.

/// Lindblad structure on full(n) with ell = r = id; omega_j from the
/// modular eigenvalue of each V_j, j* the index of V_j*.
DifferentialStructure build_lindblad(const std::vector<Mat>& V, const Mat& sigma);
/// Random detailed-balance Lindblad structure on M_n.
DifferentialStructure random_lindblad(int n, std::uint64_t seed);
/// Reversible chain with rates q (diagonal ignored) embedded as diagonal
/// matrices with jump operators E_kp.
DifferentialStructure build_markov_lindblad(const RMat& q, const Vec& pi);
/// Reversible chain on the weighted diagonal algebra with one scalar
/// direction per edge.
DifferentialStructure build_markov_graph(const RMat& q, const Vec& pi);
DifferentialStructure build_hypercube(int n);
DifferentialStructure build_fermion_ou(int n);
/// Depolarizing semigroup L A = gamma (tau[A] 1 - A) on M_n. Pauli
/// directions for n = 2 unless matrix units are requested.
DifferentialStructure build_depolarizing(double gamma, int n, bool matrix_units = false);

/// Copy of ds over a replaced direction list. The result is not validated.
DifferentialStructure with_directions(const DifferentialStructure& ds,
                                      std::vector<Direction> dirs);

}  // namespace qmt
