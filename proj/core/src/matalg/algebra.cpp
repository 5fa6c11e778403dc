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
#include <sstream>

#include "qmt/matalg.hpp"

namespace qmt {

struct Algebra::Data {
  AlgebraKind kind = AlgebraKind::full;
  int n = 0;
  Vec weights;
  std::vector<int> blocks;
  int cliff = 0;
  std::vector<Mat> gens;
  std::vector<Mat> basis;
  // Row a is vec((W e_a)^T) so that coords = flat_coord * vec(A).
  Mat flat_coord;
  // Column a is vec(e_a).
  Mat flat_basis;
};

namespace {

void finish(Algebra::Data& d) {
  const int n = d.n;
  const int dim = static_cast<int>(d.basis.size());
  d.flat_coord.resize(dim, n * n);
  d.flat_basis.resize(n * n, dim);
  for (int a = 0; a < dim; ++a) {
    Mat w = d.weights.asDiagonal() * d.basis[a];
    Mat wt = w.transpose();
    d.flat_coord.row(a) = Eigen::Map<const CVec>(wt.data(), n * n).transpose();
    d.flat_basis.col(a) = Eigen::Map<const CVec>(d.basis[a].data(), n * n);
  }
}

void add_block_basis(std::vector<Mat>& out, int n, int off, int size,
                     double scale) {
  for (int k = 0; k < size; ++k) {
    Mat e = Mat::Zero(n, n);
    e(off + k, off + k) = scale;
    out.push_back(e);
  }
  const double s2 = scale / std::sqrt(2.0);
  for (int k = 0; k < size; ++k) {
    for (int l = k + 1; l < size; ++l) {
      Mat re = Mat::Zero(n, n);
      re(off + k, off + l) = s2;
      re(off + l, off + k) = s2;
      out.push_back(re);
      Mat im = Mat::Zero(n, n);
      im(off + k, off + l) = cplx(0.0, s2);
      im(off + l, off + k) = cplx(0.0, -s2);
      out.push_back(im);
    }
  }
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Algebra::Algebra(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

Algebra Algebra::full(int n) {
  if (n < 1) throw Error("algebra dimension must be positive");
  auto d = std::make_shared<Data>();
  d->kind = AlgebraKind::full;
  d->n = n;
  d->weights = Vec::Constant(n, 1.0 / n);
  d->blocks = {n};
  add_block_basis(d->basis, n, 0, n, std::sqrt(static_cast<double>(n)));
  finish(*d);
  return Algebra(d);
}

Algebra Algebra::block(const std::vector<int>& sizes) {
  int n = 0;
  for (int s : sizes) {
    if (s < 1) throw Error("block sizes must be positive");
    n += s;
  }
  if (n < 1) throw Error("algebra dimension must be positive");
  auto d = std::make_shared<Data>();
  d->kind = AlgebraKind::block;
  d->n = n;
  d->weights = Vec::Constant(n, 1.0 / n);
  d->blocks = sizes;
  int off = 0;
  for (int s : sizes) {
    add_block_basis(d->basis, n, off, s, std::sqrt(static_cast<double>(n)));
    off += s;
  }
  finish(*d);
  return Algebra(d);
}

Algebra Algebra::diagonal(int n) {
  if (n < 1) throw Error("algebra dimension must be positive");
  return diagonal(Vec::Constant(n, 1.0 / n));
}

Algebra Algebra::diagonal(const Vec& weights) {
  const int n = static_cast<int>(weights.size());
  if (n < 1) throw Error("algebra dimension must be positive");
  if (weights.minCoeff() <= 0.0) throw Error("trace weights must be positive");
  auto d = std::make_shared<Data>();
  d->kind = AlgebraKind::diagonal;
  d->n = n;
  d->weights = weights;
  d->blocks.assign(n, 1);
  for (int k = 0; k < n; ++k) {
    Mat e = Mat::Zero(n, n);
    e(k, k) = 1.0 / std::sqrt(weights(k));
    d->basis.push_back(e);
  }
  finish(*d);
  return Algebra(d);
}

Algebra Algebra::clifford(int order) {
  if (order < 1 || order > 6) throw Error("clifford order must be in [1, 6]");
  const int n = 1 << order;
  auto d = std::make_shared<Data>();
  d->kind = AlgebraKind::clifford;
  d->n = n;
  d->cliff = order;
  d->weights = Vec::Constant(n, 1.0 / n);
  Mat I = Mat::Identity(2, 2);
  Mat X = Mat::Zero(2, 2);
  X(0, 1) = X(1, 0) = 1.0;
  Mat Z = Mat::Zero(2, 2);
  Z(0, 0) = 1.0;
  Z(1, 1) = -1.0;
  for (int j = 0; j < order; ++j) {
    Mat q = Mat::Identity(1, 1);
    for (int k = 0; k < order; ++k) q = kron(q, k < j ? Z : (k == j ? X : I));
    d->gens.push_back(q);
  }
  // Monomials Q^alpha = Q_{i1}...Q_{ik}, made Hermitian by i^{k(k-1)/2}.
  const cplx phases[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (int mask = 0; mask < (1 << order); ++mask) {
    Mat m = Mat::Identity(n, n);
    int k = 0;
    for (int j = 0; j < order; ++j) {
      if (mask & (1 << j)) {
        m = m * d->gens[j];
        ++k;
      }
    }
    d->basis.push_back(phases[(k * (k - 1) / 2) % 4] * m);
  }
  finish(*d);
  return Algebra(d);
}

AlgebraKind Algebra::kind() const { return d_->kind; }

std::string Algebra::kind_name() const {
  std::ostringstream os;
  switch (d_->kind) {
    case AlgebraKind::full:
      os << "full(" << d_->n << ")";
      break;
    case AlgebraKind::block:
      os << "block(";
      for (size_t i = 0; i < d_->blocks.size(); ++i)
        os << (i ? "," : "") << d_->blocks[i];
      os << ")";
      break;
    case AlgebraKind::diagonal:
      os << "diagonal(" << d_->n << ")";
      break;
    case AlgebraKind::clifford:
      os << "clifford(" << d_->cliff << ")";
      break;
  }
  return os.str();
}

int Algebra::ambient_dim() const { return d_->n; }
int Algebra::dim() const { return static_cast<int>(d_->basis.size()); }
const Vec& Algebra::trace_weights() const { return d_->weights; }
const std::vector<int>& Algebra::block_sizes() const { return d_->blocks; }
int Algebra::clifford_order() const { return d_->cliff; }
const std::vector<Mat>& Algebra::generators() const { return d_->gens; }
const std::vector<Mat>& Algebra::basis() const { return d_->basis; }

cplx Algebra::trace(const Mat& A) const {
  cplx s = 0.0;
  for (int i = 0; i < d_->n; ++i) s += d_->weights(i) * A(i, i);
  return s;
}

cplx Algebra::inner(const Mat& A, const Mat& B) const {
  // tau[A* B] = sum_i w_i sum_k conj(A_ki) B_ki
  cplx s = 0.0;
  for (int i = 0; i < d_->n; ++i)
    s += d_->weights(i) * A.col(i).dot(B.col(i));
  return s;
}

CVec Algebra::coords(const Mat& A) const {
  const int n = d_->n;
  if (A.rows() != n || A.cols() != n) throw Error("matrix shape does not match algebra");
  return d_->flat_coord * Eigen::Map<const CVec>(A.data(), n * n);
}

Vec Algebra::real_coords(const Mat& A) const { return coords(A).real(); }

Mat Algebra::from_coords(const CVec& c) const {
  const int n = d_->n;
  CVec v = d_->flat_basis * c;
  return Eigen::Map<const Mat>(v.data(), n, n);
}

Mat Algebra::from_coords(const Vec& c) const {
  return from_coords(CVec(c.cast<cplx>()));
}

Mat Algebra::project(const Mat& A) const {
  const int n = d_->n;
  switch (d_->kind) {
    case AlgebraKind::full:
      return A;
    case AlgebraKind::diagonal:
      return Mat(A.diagonal().asDiagonal());
    case AlgebraKind::block: {
      Mat out = Mat::Zero(n, n);
      int off = 0;
      for (int s : d_->blocks) {
        out.block(off, off, s, s) = A.block(off, off, s, s);
        off += s;
      }
      return out;
    }
    case AlgebraKind::clifford:
      // tau-orthogonal projection onto the span of the monomials.
      return from_coords(coords(A));
  }
  return A;
}

double Algebra::membership_residual(const Mat& A) const {
  const double nrm = A.norm();
  if (nrm == 0.0) return 0.0;
  return (A - project(A)).norm() / nrm;
}

bool Algebra::contains(const Mat& A, double tol) const {
  return membership_residual(A) <= tol;
}

Mat Algebra::identity() const { return Mat::Identity(d_->n, d_->n); }

Vec Algebra::identity_coords() const { return real_coords(identity()); }

bool Algebra::same_as(const Algebra& other) const {
  if (d_ == other.d_) return true;
  return d_->kind == other.d_->kind && d_->n == other.d_->n &&
         d_->blocks == other.d_->blocks && d_->cliff == other.d_->cliff &&
         (d_->weights - other.d_->weights).norm() <= 1e-14;
}

}  // namespace qmt
