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

#include <algorithm>
#include <cmath>
#include <limits>

#include "../common/lbfgs.hpp"
#include "qmt/transport.hpp"
#include "transport_internal.hpp"

namespace qmt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Per-direction data that does not depend on the curve.
struct Setup {
  const DifferentialStructure& ds;
  std::vector<MeanFunction> recip;
  std::vector<Mat> D;  // coords in B_j of d_j e_a, one column per basis element
  Vec one;

  Setup(const DifferentialStructure& s, const ThetaAssignment& theta) : ds(s) {
    const Algebra& alg = ds.algebra();
    one = alg.identity_coords();
    for (int j = 0; j < ds.size(); ++j) {
      const Direction& d = ds.direction(j);
      recip.push_back(MeanFunction::reciprocal_of(theta[j]));
      Mat Dj(d.B.dim(), alg.dim());
      for (int a = 0; a < alg.dim(); ++a) Dj.col(a) = d.B.coords(partial(ds, j, alg.basis()[a]));
      D.push_back(std::move(Dj));
    }
  }
};

// Reciprocal multiplier of one node as a matrix on B_j coordinates.
struct Node {
  std::vector<Spectral> L, R;
  std::vector<Mat> C;
};

bool make_node(const Setup& st, const ThetaAssignment& theta, const Mat& rho, Node& out) {
  const DifferentialStructure& ds = st.ds;
  if (herm_eig(rho).values.minCoeff() <= 1e-15) return false;
  out.L.clear(), out.R.clear(), out.C.clear();
  for (int j = 0; j < ds.size(); ++j) {
    const Direction& d = ds.direction(j);
    Spectral L = spectral(d.ell(rho)), R = spectral(d.r(rho));
    OperatorSum2 chk = doubsum(theta[j], L, R).map([](double x) { return 1.0 / x; });
    const int m = d.B.dim();
    Mat C(m, m);
    for (int b = 0; b < m; ++b) C.col(b) = d.B.coords(chk.contract(d.B.basis()[b]));
    out.L.push_back(std::move(L));
    out.R.push_back(std::move(R));
    out.C.push_back(std::move(C));
  }
  return true;
}

struct Interval {
  RMat K;
  Vec u;
  std::vector<CVec> W;
  double cost = 0.0;
  double residual = 0.0;
};

Interval solve_interval(const Setup& st, const Node& a, const Node& b, const Vec& delta,
                        double dt) {
  const int d = static_cast<int>(st.one.size());
  Interval out;
  out.K = RMat::Zero(d, d);
  std::vector<Mat> MinvD(st.D.size());
  for (size_t j = 0; j < st.D.size(); ++j) {
    Mat M = 0.5 * (a.C[j] + b.C[j]);
    M = 0.5 * (M + M.adjoint()).eval();
    Eigen::LLT<Mat> llt(M);
    MinvD[j] = llt.solve(st.D[j]);
    out.K += (st.D[j].adjoint() * MinvD[j]).real();
  }
  out.K = 0.5 * (out.K + out.K.transpose()).eval();
  detail::PseudoSolve ps = detail::pseudo_solve(out.K, delta);
  out.u = ps.x;
  out.residual = ps.residual;
  out.cost = delta.dot(out.u) / dt;
  for (size_t j = 0; j < st.D.size(); ++j) out.W.push_back(MinvD[j] * out.u.cast<cplx>());
  return out;
}

// Gradient in rho of <W, rho_check # W> at one node, as real coordinates.
Vec node_gradient(const Setup& st, const Node& nd, int j, const CVec& w) {
  const Direction& d = st.ds.direction(j);
  Mat W = d.B.from_coords(w);
  Mat yl = tree_left_dual(st.recip[j], nd.L[j], nd.R[j], W);
  Mat yr = tree_right_dual(st.recip[j], nd.L[j], nd.R[j], W);
  Mat g = d.ell.adjoint(0.5 * (yl + yl.adjoint())) + d.r.adjoint(0.5 * (yr + yr.adjoint()));
  return st.ds.algebra().real_coords(0.5 * (g + g.adjoint()));
}

struct Evaluation {
  double value = kInf;
  Vec grad;
  double continuity = 0.0;
  std::vector<Vec> u;
};

// Trapezoidal action over the grid with fixed endpoints; x holds interior nodes.
Evaluation evaluate(const Setup& st, const ThetaAssignment& theta, const Vec& r0,
                    const Vec& r1, const Vec& x, int N, bool want_grad,
                    const Node* end0 = nullptr, const Node* end1 = nullptr) {
  const Algebra& alg = st.ds.algebra();
  const int d = alg.dim();
  const double dt = 1.0 / N;
  std::vector<Node> nodes(N + 1);
  auto coords_of = [&](int i) -> Vec {
    if (i == 0) return r0;
    if (i == N) return r1;
    return x.segment((i - 1) * d, d);
  };
  Evaluation ev;
  for (int i = 0; i <= N; ++i) {
    if (i == 0 && end0) {
      nodes[0] = *end0;
      continue;
    }
    if (i == N && end1) {
      nodes[N] = *end1;
      continue;
    }
    if (!make_node(st, theta, alg.from_coords(coords_of(i)), nodes[i])) return ev;
  }
  ev.value = 0.0;
  if (want_grad) ev.grad = Vec::Zero(x.size());
  for (int i = 0; i < N; ++i) {
    Vec delta = coords_of(i + 1) - coords_of(i);
    Interval in = solve_interval(st, nodes[i], nodes[i + 1], delta, dt);
    ev.value += in.cost;
    ev.continuity = std::max(ev.continuity, in.residual);
    ev.u.push_back(in.u);
    if (!want_grad) continue;
    for (int side = 0; side < 2; ++side) {
      const int k = i + side;
      if (k == 0 || k == N) continue;
      Vec g = (side == 0 ? -2.0 : 2.0) * in.u;
      for (int j = 0; j < st.ds.size(); ++j)
        g += 0.5 * node_gradient(st, nodes[k], j, in.W[j]);
      ev.grad.segment((k - 1) * d, d) += g / dt;
    }
  }
  return ev;
}

struct Solve {
  double value2 = 0.0;
  double decrement = 0.0;
  double stationarity = 0.0;
  double continuity = 0.0;
  int iterations = 0;
  bool converged = false;
  Vec x;
  std::vector<Vec> u;
};

Solve solve_grid(const Setup& st, const ThetaAssignment& theta, const Vec& r0, const Vec& r1,
                 int N, const Vec& init, const DistanceOptions& opt) {
  const int d = static_cast<int>(st.one.size());
  Node e0, e1;
  const Algebra& alg = st.ds.algebra();
  if (!make_node(st, theta, alg.from_coords(r0), e0) ||
      !make_node(st, theta, alg.from_coords(r1), e1))
    throw Error("state not strictly positive");
  Solve out;
  if (N > 1) {
    detail::LbfgsOptions lo;
    lo.max_iter = opt.max_iter;
    lo.rel_tol = opt.primal_tol;
    lo.project = [&](Vec& v) {
      for (int i = 0; i + 1 < N; ++i) {
        auto seg = v.segment(i * d, d);
        seg -= seg.dot(st.one) / st.one.squaredNorm() * st.one;
      }
    };
    detail::Objective fn = [&](const Vec& x, Vec& g) {
      Evaluation ev = evaluate(st, theta, r0, r1, x, N, true, &e0, &e1);
      if (std::isfinite(ev.value)) g = ev.grad;
      return ev.value;
    };
    detail::LbfgsResult r = detail::lbfgs(fn, init, lo);
    out.x = r.x;
    out.decrement = r.decrement;
    out.iterations = r.iterations;
    out.converged = r.converged;
    Vec g = Vec::Zero(r.x.size());
    fn(r.x, g);
    lo.project(g);
    out.stationarity = g.norm();
  } else {
    out.x = Vec(0);
    out.converged = true;
  }
  Evaluation ev = evaluate(st, theta, r0, r1, out.x, N, false, &e0, &e1);
  out.value2 = ev.value;
  out.continuity = ev.continuity;
  out.u = ev.u;
  return out;
}

Vec linear_init(const Vec& r0, const Vec& r1, int N) {
  const int d = static_cast<int>(r0.size());
  Vec x(std::max(0, (N - 1) * d));
  for (int i = 1; i < N; ++i) {
    const double t = static_cast<double>(i) / N;
    x.segment((i - 1) * d, d) = (1.0 - t) * r0 + t * r1;
  }
  return x;
}

// Interior nodes of grid 2N from interior nodes of grid N.
Vec refine(const Vec& r0, const Vec& r1, const Vec& x, int N) {
  const int d = static_cast<int>(r0.size());
  auto node = [&](int i) -> Vec {
    if (i == 0) return r0;
    if (i == N) return r1;
    return x.segment((i - 1) * d, d);
  };
  Vec y((2 * N - 1) * d);
  for (int k = 1; k < 2 * N; ++k) {
    y.segment((k - 1) * d, d) = k % 2 == 0 ? node(k / 2) : Vec(0.5 * (node(k / 2) + node(k / 2 + 1)));
  }
  return y;
}

DistanceResult distance_interior(const DifferentialStructure& ds, const ThetaAssignment& theta,
                                 const Mat& rho0, const Mat& rho1, const DistanceOptions& opt) {
  const Algebra& alg = ds.algebra();
  Setup st(ds, theta);
  Vec r0 = alg.real_coords(rho0), r1 = alg.real_coords(rho1);
  const int N = std::max(1, opt.grid_n);
  const bool rich = opt.richardson && N >= 2 && N % 2 == 0;
  DistanceResult res;
  Solve fine;
  if (rich) {
    const int Nc = N / 2;
    Solve coarse = solve_grid(st, theta, r0, r1, Nc, linear_init(r0, r1, Nc), opt);
    fine = solve_grid(st, theta, r0, r1, N, refine(r0, r1, coarse.x, Nc), opt);
    res.coarse = std::sqrt(std::max(0.0, coarse.value2));
    const double ex = (4.0 * fine.value2 - coarse.value2) / 3.0;
    res.extrapolated = std::sqrt(std::max(0.0, ex));
    res.iterations = coarse.iterations;
    res.converged = coarse.converged;
  } else {
    fine = solve_grid(st, theta, r0, r1, N, linear_init(r0, r1, N), opt);
    res.converged = true;
  }
  res.value = std::sqrt(std::max(0.0, fine.value2));
  if (!rich) res.extrapolated = res.value, res.coarse = res.value;
  res.iterations += fine.iterations;
  res.converged = res.converged && fine.converged;
  res.stationarity = fine.stationarity;
  res.continuity_residual = fine.continuity;
  const double opt_err = res.value > 0.0 ? 0.25 * fine.decrement / res.value : 0.0;
  res.residual = opt_err + std::abs(res.value - res.extrapolated);

  const int d = alg.dim();
  Curve& c = res.curve;
  for (int i = 0; i <= N; ++i) {
    c.t.push_back(static_cast<double>(i) / N);
    Vec v = i == 0 ? r0 : i == N ? r1 : Vec(fine.x.segment((i - 1) * d, d));
    c.rho.push_back(alg.from_coords(v));
  }
  for (int i = 0; i < N; ++i) c.A.push_back(alg.from_coords(Vec(fine.u[i] * N)));
  c.A.push_back(c.A.back());
  return res;
}

}  // namespace

DiscreteAction discrete_action(const DifferentialStructure& ds, const ThetaAssignment& theta,
                               const std::vector<Mat>& nodes) {
  ds.require_validated();
  if (nodes.size() < 2) throw Error("curve needs at least two nodes");
  const Algebra& alg = ds.algebra();
  Setup st(ds, theta);
  const int N = static_cast<int>(nodes.size()) - 1;
  const int d = alg.dim();
  Vec x((N - 1) * d);
  for (int i = 1; i < N; ++i) x.segment((i - 1) * d, d) = alg.real_coords(nodes[i]);
  Evaluation ev = evaluate(st, theta, alg.real_coords(nodes.front()),
                           alg.real_coords(nodes.back()), x, N, true);
  if (!std::isfinite(ev.value)) throw Error("state not strictly positive");
  DiscreteAction out;
  out.value = ev.value;
  for (int i = 1; i < N; ++i) out.gradient.push_back(alg.from_coords(Vec(ev.grad.segment((i - 1) * d, d))));
  return out;
}

DistanceResult distance(const DifferentialStructure& ds, const ThetaAssignment& theta,
                        const Mat& rho0_in, const Mat& rho1_in, const DistanceOptions& opt) {
  ds.require_validated();
  if (theta.size() != ds.size()) throw Error("theta assignment does not match directions");
  if (!theta.convex() && !opt.allow_nonconvex)
    throw Error("mean not flagged 1-homogeneous and operator monotone; set allow_nonconvex");
  const Algebra& alg = ds.algebra();
  Mat rho0 = hermitize(rho0_in, "state"), rho1 = hermitize(rho1_in, "state");
  for (const Mat* r : {&rho0, &rho1}) {
    if (!alg.contains(*r)) throw Error("state not in algebra");
    if (std::abs(alg.trace(*r) - 1.0) > 1e-9) throw Error("state must have unit trace");
    if (min_eigenvalue(*r) < -1e-12) throw Error("state not positive");
  }
  const Mat sigma = ds.sigma();
  {
    Mat mid = 0.5 * (rho0 + rho1);
    mid = (1.0 - 1e-3) * mid + 1e-3 * sigma;
    RMat K = metric_matrix(ds, theta, mid);
    detail::PseudoSolve s = detail::pseudo_solve(K, alg.real_coords(rho1 - rho0));
    if (s.residual > 1e-9 * std::max(1.0, (rho1 - rho0).norm()))
      throw Error("endpoints not connected");
  }
  const double floor = 1e-9;
  if (std::min(min_eigenvalue(rho0), min_eigenvalue(rho1)) > floor)
    return distance_interior(ds, theta, rho0, rho1, opt);

  // Boundary endpoints: polynomial extrapolation in eps through three levels.
  const double e3 = opt.eps_boundary;
  const double eps[3] = {100.0 * e3, 10.0 * e3, e3};
  DistanceResult r[3];
  for (int k = 0; k < 3; ++k) {
    Mat a = (1.0 - eps[k]) * rho0 + eps[k] * sigma;
    Mat b = (1.0 - eps[k]) * rho1 + eps[k] * sigma;
    r[k] = distance_interior(ds, theta, a, b, opt);
  }
  auto extrap = [&](double v0, double v1, double v2) {
    double l0 = eps[1] * eps[2] / ((eps[0] - eps[1]) * (eps[0] - eps[2]));
    double l1 = eps[0] * eps[2] / ((eps[1] - eps[0]) * (eps[1] - eps[2]));
    double l2 = eps[0] * eps[1] / ((eps[2] - eps[0]) * (eps[2] - eps[1]));
    return l0 * v0 + l1 * v1 + l2 * v2;
  };
  DistanceResult out = r[2];
  out.regularized = true;
  out.value = extrap(r[0].value, r[1].value, r[2].value);
  out.extrapolated = extrap(r[0].extrapolated, r[1].extrapolated, r[2].extrapolated);
  out.coarse = extrap(r[0].coarse, r[1].coarse, r[2].coarse);
  out.residual = r[2].residual + std::abs(out.extrapolated - r[2].extrapolated);
  out.converged = r[0].converged && r[1].converged && r[2].converged;
  return out;
}

}  // namespace qmt
