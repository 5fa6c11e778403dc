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

#include "qmt/matalg.hpp"

namespace qmt {

/// Clustered spectral decomposition of a Hermitian matrix. Eigenvalues
/// within tol * ||A|| of each other share one spectral projector.
struct Spectral {
  Vec values;              // one value per cluster, ascending
  Mat vectors;             // eigenvectors, one column per ambient index
  std::vector<int> label;  // column -> cluster

  int clusters() const { return static_cast<int>(values.size()); }
  int size() const { return static_cast<int>(vectors.rows()); }
  Mat projector(int k) const;
  Mat reconstruct() const;
  /// Per-column eigenvalue (the cluster value).
  double column_value(int i) const { return values(label[i]); }
  Mat apply(const std::function<double(double)>& f) const;
};

Spectral spectral(const Mat& A, double tol = tol::cluster);

/// User supplied mean. Derivatives are optional but required whenever a
/// confluent divided difference has to be evaluated.
struct CustomMean {
  std::function<double(double, double)> value;
  std::function<double(double, double)> d1, d2, d11, d22;
  std::string name = "custom";
  bool homogeneous = false;
  bool operator_monotone = false;
};

/// Two-variable means theta(r, s) with first and second partial derivatives.
/// The power-difference family is
///   theta_m(r, s) = (m-1)/m * (r^m - s^m) / (r^{m-1} - s^{m-1}),
/// m = 1 the logarithmic mean, m = 2 arithmetic, m = 1/2 geometric,
/// m = -1 harmonic. Tilting: theta_{m,beta}(r,s) = theta_m(e^{-beta/2} r,
/// e^{beta/2} s).
class MeanFunction {
 public:
  enum class Tag { logarithmic, tilted_log, power, reciprocal, custom };

  static MeanFunction logarithmic();
  static MeanFunction tilted_log(double beta);
  static MeanFunction power(double m, double beta = 0.0);
  static MeanFunction arithmetic() { return power(2.0); }
  static MeanFunction reciprocal_of(const MeanFunction& inner);
  static MeanFunction custom(CustomMean c);

  double operator()(double r, double s) const;
  double d1(double r, double s) const;
  double d2(double r, double s) const;
  double d11(double r, double s) const;
  double d22(double r, double s) const;

  Tag tag() const { return tag_; }
  double m() const { return m_; }
  double beta() const { return beta_; }
  std::string name() const;
  bool homogeneous() const;
  bool operator_monotone() const;

 private:
  Tag tag_ = Tag::logarithmic;
  double m_ = 1.0;
  double beta_ = 0.0;
  std::shared_ptr<const MeanFunction> inner_;
  std::shared_ptr<const CustomMean> custom_;
};

/// sum_{ik} c_ik E_i (x) F_k over the spectral projectors of two matrices.
struct OperatorSum2 {
  Spectral left;
  Spectral right;
  RMat coeffs;  // clusters(left) x clusters(right)

  /// sum_{ik} c_ik E_i C F_k, evaluated in the eigenbases without forming
  /// any tensor.
  Mat contract(const Mat& C) const;
  /// Entrywise product of coefficient tables on the same spectral grids.
  OperatorSum2 times(const OperatorSum2& other) const;
  OperatorSum2 map(const std::function<double(double)>& f) const;
};

OperatorSum2 make_sum(const Spectral& A, const Spectral& B,
                      const std::function<double(double, double)>& c);
OperatorSum2 doubsum(const MeanFunction& theta, const Spectral& A,
                     const Spectral& B);
OperatorSum2 doubsum(const MeanFunction& theta, const Mat& A, const Mat& B);

/// Differentiable scalar function with first and second derivatives.
struct ScalarFunction {
  std::function<double(double)> f, df, d2f;
  std::string name;
  static ScalarFunction identity();
  static ScalarFunction log();
  static ScalarFunction exp();
  static ScalarFunction square();
  static ScalarFunction xlogx();
  static ScalarFunction power(double p);
};

/// (f(l) - f(m)) / (l - m), or f'(l) when the points agree up to tol.
double discrete_derivative(const ScalarFunction& f, double lambda, double mu,
                           double tol = tol::cluster);
/// delta f(A, B) on the spectral grids of A and B.
OperatorSum2 divided_difference(const ScalarFunction& f, const Spectral& A,
                                const Spectral& B);
/// delta f(l(A), r(A)) # dA, the chain rule for skew derivations.
Mat chain_partial(const ScalarFunction& f, const Mat& ell_A, const Mat& r_A,
                  const Mat& partial_A);

// ---------------------------------------------------------------------------
// Tree-indexed divided differences of a mean

enum class TreeShape { left3, right3, left4 };

/// Scalar value of the tree divided difference. For left3 and right3 the
/// arguments are (x, y, z); left4 uses all four.
double tree_coeff(const MeanFunction& theta, TreeShape shape, double x,
                  double y, double z, double w = 0.0,
                  double tol = tol::cluster);

/// sum delta theta((l1, l2), l3) E1 X E2 C E3.
Mat tree_left(const MeanFunction& theta, const Spectral& s1,
              const Spectral& s2, const Spectral& s3, const Mat& X,
              const Mat& C);
/// sum delta theta(l1, (l2, l3)) E1 C E2 X E3.
Mat tree_right(const MeanFunction& theta, const Spectral& s1,
               const Spectral& s2, const Spectral& s3, const Mat& X,
               const Mat& C);
/// sum delta theta(((l1, l2), l3), l4) E1 X E2 Y E3 C E4.
Mat tree_left4(const MeanFunction& theta, const Spectral& s1,
               const Spectral& s2, const Spectral& s3, const Spectral& s4,
               const Mat& X, const Mat& Y, const Mat& C);
/// Gradient of B -> tau[X* tree_left(L, L, R; B, X)] in B:
/// sum_{kmp} delta theta((l_k, l_m), r_p) E_m X F_p X* E_k.
Mat tree_left_dual(const MeanFunction& theta, const Spectral& L,
                   const Spectral& R, const Mat& X);
/// Gradient of B -> tau[X* tree_right(L, R, R; B, X)] in B:
/// sum_{kmp} delta theta(l_k, (r_m, r_p)) F_p X* E_k X F_m.
Mat tree_right_dual(const MeanFunction& theta, const Spectral& L,
                    const Spectral& R, const Mat& X);

// ---------------------------------------------------------------------------
// Quasi-entropies

/// Tr[A* theta^{-p}(R, S) # A].
double quasi_entropy(const MeanFunction& theta, double p, const Mat& R,
                     const Mat& S, const Mat& A);

struct ConvexityReport {
  int trials = 0;
  double max_violation = 0.0;  // relative, positive means violated
  int worst_trial = -1;
  bool violated = false;
  std::string status;  // "consistent" or "violated"
};

/// Randomized midpoint test of joint convexity of (R, S, A) -> quasi-entropy.
/// A falsifier: no violation is reported as "consistent".
ConvexityReport convexity_probe(const MeanFunction& theta, double p,
                                int trials, int n, std::uint64_t seed,
                                double tol = 1e-9);

struct ContractivityResult {
  double lhs = 0.0;  // value after the channel
  double rhs = 0.0;  // value before
};
ContractivityResult cptp_contractivity_probe(const MeanFunction& theta,
                                             const Mat& R, const Mat& S,
                                             const Mat& A,
                                             const std::vector<Mat>& kraus);

}  // namespace qmt
