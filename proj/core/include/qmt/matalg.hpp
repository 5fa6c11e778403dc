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
#include <string>
#include <vector>

#include "qmt/types.hpp"

namespace qmt {

enum class AlgebraKind { full, block, diagonal, clifford };

/// A finite-dimensional *-algebra realized inside M_n, with a faithful
/// tracial functional tau[A] = sum_i w_i A_ii and an orthonormal basis of
/// Hermitian elements with respect to <A,B> = tau[A* B].
class Algebra {
 public:
  /// M_n with the normalized trace.
  static Algebra full(int n);
  /// Block-diagonal matrices, normalized trace of the ambient space.
  static Algebra block(const std::vector<int>& sizes);
  /// Diagonal matrices with uniform weights 1/n.
  static Algebra diagonal(int n);
  /// Diagonal matrices with arbitrary positive weights.
  static Algebra diagonal(const Vec& weights);
  /// The algebra generated by n anticommuting self-adjoint unitaries
  /// Q_j = Z x ... x Z x X x 1 x ... x 1 in M_{2^n}, normalized trace.
  static Algebra clifford(int n);

  AlgebraKind kind() const;
  std::string kind_name() const;
  int ambient_dim() const;
  int dim() const;
  const Vec& trace_weights() const;
  const std::vector<int>& block_sizes() const;
  int clifford_order() const;
  const std::vector<Mat>& generators() const;
  const std::vector<Mat>& basis() const;

  cplx trace(const Mat& A) const;
  cplx inner(const Mat& A, const Mat& B) const;
  CVec coords(const Mat& A) const;
  Vec real_coords(const Mat& A) const;
  Mat from_coords(const CVec& c) const;
  Mat from_coords(const Vec& c) const;
  Mat project(const Mat& A) const;
  double membership_residual(const Mat& A) const;
  bool contains(const Mat& A, double tol = tol::membership) const;
  Mat identity() const;
  Vec identity_coords() const;
  /// Same realization and trace weights.
  bool same_as(const Algebra& other) const;

  struct Data;

 private:
  explicit Algebra(std::shared_ptr<const Data> d);
  std::shared_ptr<const Data> d_;
};

// ---------------------------------------------------------------------------
// Hermitian helpers

double rel_asymmetry(const Mat& A);
/// Symmetrizes A when it is Hermitian up to 1e-12 relative, throws otherwise.
Mat hermitize(const Mat& A, const std::string& what = "matrix");

struct HermEig {
  Vec values;
  Mat vectors;
};
HermEig herm_eig(const Mat& A);
Mat herm_func(const HermEig& e, const std::function<double(double)>& f);
Mat herm_func(const Mat& A, const std::function<double(double)>& f);
double min_eigenvalue(const Mat& A);
/// sigma^p for a strictly positive Hermitian matrix; `what` is the error text.
Mat pos_power(const Mat& sigma, double p,
              const std::string& what = "singular reference state");
Mat pos_log(const Mat& rho, const std::string& what = "singular state");

// Scalar means used by the BKM map.
double log_mean(double x, double y);
double dlog(double x, double y);

// ---------------------------------------------------------------------------
// Inner products and modular maps

enum class InnerTag { s_family, gns, kms, bkm };

struct InnerProductKind {
  InnerTag tag = InnerTag::kms;
  double s = 0.5;
  static InnerProductKind s_family(double s) { return {InnerTag::s_family, s}; }
  static InnerProductKind gns() { return {InnerTag::gns, 0.0}; }
  static InnerProductKind kms() { return {InnerTag::kms, 0.5}; }
  static InnerProductKind bkm() { return {InnerTag::bkm, 0.0}; }
  std::string name() const;
};

/// tau[A* sigma^s B sigma^{1-s}].
cplx s_inner(const Algebra& alg, const Mat& sigma, double s, const Mat& A,
             const Mat& B);
Mat bkm_map(const Mat& sigma, const Mat& A);
Mat bkm_inverse(const Mat& sigma, const Mat& A);
cplx bkm_inner(const Algebra& alg, const Mat& sigma, const Mat& A,
               const Mat& B);
/// sigma A rho^{-1}.
Mat relative_modular(const Mat& sigma, const Mat& rho, const Mat& A);

struct MoreauParts {
  Mat plus;
  Mat minus;
};
/// Decomposition X = X+ - X- into KMS-orthogonal positive parts.
MoreauParts moreau_kms(const Mat& sigma, const Mat& X);

// ---------------------------------------------------------------------------
// Superoperators

/// A real-structured linear map on an algebra, stored over the Hermitian
/// orthonormal basis: M(a,b) = tau[e_a K(e_b)].
struct Superop {
  RMat M;
  std::string meta;
  /// Largest imaginary coordinate discarded at construction.
  double imag_residual = 0.0;
};

Superop superop_from(const Algebra& alg,
                     const std::function<Mat(const Mat&)>& map,
                     const std::string& meta = "");
Mat superop_apply(const Algebra& alg, const Superop& K, const Mat& A);
/// Complex matrix of a not necessarily real-structured map.
Mat complex_superop(const Algebra& alg,
                    const std::function<Mat(const Mat&)>& map);

/// Gram matrix G(a,b) = <e_a, e_b> in the requested inner product.
Mat gram(const Algebra& alg, const Mat& sigma, InnerProductKind kind);
/// ||M^T G - G M|| / (||M|| ||G||).
double selfadjoint_residual(const RMat& M, const Mat& G);
double selfadjoint_residual(const Algebra& alg, const Mat& sigma,
                            const Superop& K, InnerProductKind kind);
/// Relative norm of [K, Delta_sigma].
double modular_commutator_residual(const Algebra& alg, const Mat& sigma,
                                   const Superop& K);

/// A -> M^{-1}(sigma^{1/2} P(A) sigma^{1/2}).
Superop kms_tilde_map(const Algebra& alg, const Mat& sigma, const Superop& P);

/// Choi matrix of K composed with the trace preserving conditional
/// expectation onto the algebra. PSD iff K is completely positive.
Mat choi_matrix(const Algebra& alg, const Superop& K);
Mat choi_matrix(int n, const std::function<Mat(const Mat&)>& map);

// ---------------------------------------------------------------------------
// Sampling

Mat random_hermitian(const Algebra& alg, Rng& rng);
Mat random_ginibre(int rows, int cols, Rng& rng);
Mat haar_unitary(int n, Rng& rng);
Vec dirichlet(int k, Rng& rng);

struct StateSampling {
  /// Pin the smallest spectral weight to this eigenvalue; 0 disables.
  double boundary_eig = 0.0;
};
/// Random density: spectral projectors of a random Hermitian element with
/// Dirichlet(1,...,1) weights.
Mat random_state(const Algebra& alg, Rng& rng, StateSampling opt = {});
/// Kraus operators of a random CPTP map on M_n.
std::vector<Mat> random_kraus(int n, int count, Rng& rng);
Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& A);
Mat apply_kraus_dual(const std::vector<Mat>& kraus, const Mat& A);

}  // namespace qmt
