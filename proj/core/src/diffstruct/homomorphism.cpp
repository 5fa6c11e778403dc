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

#include <bit>

#include "qmt/diffstruct.hpp"

namespace qmt {

struct Homomorphism::Data {
  Kind kind = Kind::matrix;
  std::string name;
  Algebra src;
  Algebra tgt;
  std::vector<int> params;
  std::function<Mat(const Mat&)> fwd;
  // Row a is vec((W_tgt l(e_a))^T): l^dagger(B) has coordinates flat * vec(B).
  Mat flat;
};

namespace {

std::shared_ptr<Homomorphism::Data> make(Homomorphism::Kind kind, std::string name,
                                         const Algebra& src, const Algebra& tgt,
                                         std::function<Mat(const Mat&)> fwd,
                                         std::vector<int> params = {}) {
  auto d = std::make_shared<Homomorphism::Data>(
      Homomorphism::Data{kind, std::move(name), src, tgt, std::move(params), std::move(fwd), Mat()});
  const int m = tgt.ambient_dim();
  const int dim = src.dim();
  d->flat.resize(dim, m * m);
  for (int a = 0; a < dim; ++a) {
    Mat img = d->fwd(src.basis()[a]);
    if (img.rows() != m || img.cols() != m)
      throw Error("homomorphism image has the wrong shape");
    Mat w = (tgt.trace_weights().asDiagonal() * img).transpose();
    d->flat.row(a) = Eigen::Map<const CVec>(w.data(), m * m).transpose();
  }
  return d;
}

}  // namespace

Homomorphism Homomorphism::identity(const Algebra& a) {
  Homomorphism h;
  h.d_ = make(Kind::identity, "identity", a, a, [](const Mat& A) { return A; });
  return h;
}

Homomorphism Homomorphism::embedding(const Algebra& src, const Algebra& tgt) {
  if (src.ambient_dim() != tgt.ambient_dim())
    throw Error("embedding requires a common ambient space");
  Homomorphism h;
  h.d_ = make(Kind::embedding, "embedding", src, tgt, [](const Mat& A) { return A; });
  return h;
}

Homomorphism Homomorphism::coordinate_eval(const Algebra& src, int k, const Algebra& tgt) {
  if (src.kind() != AlgebraKind::diagonal) throw Error("coordinate evaluation needs a diagonal algebra");
  if (k < 0 || k >= src.ambient_dim()) throw Error("coordinate index out of range");
  if (tgt.ambient_dim() != 1) throw Error("coordinate evaluation targets a 1x1 algebra");
  Homomorphism h;
  h.d_ = make(
      Kind::coordinate_eval, "eval(" + std::to_string(k) + ")", src, tgt,
      [k](const Mat& A) {
        Mat out(1, 1);
        out(0, 0) = A(k, k);
        return out;
      },
      {k});
  return h;
}

Homomorphism Homomorphism::coordinate_swap(const Algebra& src, const std::vector<int>& perm) {
  const int n = src.ambient_dim();
  if (src.kind() != AlgebraKind::diagonal || static_cast<int>(perm.size()) != n)
    throw Error("coordinate swap needs a diagonal algebra and a full permutation");
  Homomorphism h;
  h.d_ = make(
      Kind::coordinate_swap, "swap", src, src,
      [perm, n](const Mat& A) {
        Mat out = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) out(i, i) = A(perm[i], perm[i]);
        return out;
      },
      perm);
  return h;
}

Homomorphism Homomorphism::parity(const Algebra& cliff) {
  if (cliff.kind() != AlgebraKind::clifford) throw Error("parity needs a Clifford algebra");
  const int n = cliff.ambient_dim();
  Vec sign(n);
  for (int i = 0; i < n; ++i) sign(i) = (std::popcount(static_cast<unsigned>(i)) % 2) ? -1.0 : 1.0;
  Homomorphism h;
  h.d_ = make(Kind::parity, "parity", cliff, cliff, [sign](const Mat& A) {
    Mat out = A;
    for (int i = 0; i < A.rows(); ++i)
      for (int k = 0; k < A.cols(); ++k) out(i, k) *= sign(i) * sign(k);
    return out;
  });
  return h;
}

Homomorphism Homomorphism::matrix(const Algebra& src, const Algebra& tgt,
                                  std::function<Mat(const Mat&)> fwd,
                                  const std::string& label) {
  Homomorphism h;
  h.d_ = make(Kind::matrix, label, src, tgt, std::move(fwd));
  return h;
}

Homomorphism::Kind Homomorphism::kind() const { return d_->kind; }
const std::string& Homomorphism::name() const { return d_->name; }
const Algebra& Homomorphism::source() const { return d_->src; }
const Algebra& Homomorphism::target() const { return d_->tgt; }
const std::vector<int>& Homomorphism::params() const { return d_->params; }

Mat Homomorphism::operator()(const Mat& A) const {
  if (d_->kind == Kind::identity || d_->kind == Kind::embedding) return A;
  return d_->fwd(A);
}

Mat Homomorphism::adjoint(const Mat& B) const {
  if (d_->kind == Kind::identity) return B;
  const int m = d_->tgt.ambient_dim();
  if (B.rows() != m || B.cols() != m) throw Error("adjoint input has the wrong shape");
  CVec c = d_->flat * Eigen::Map<const CVec>(B.data(), m * m);
  return d_->src.from_coords(c);
}

}  // namespace qmt
