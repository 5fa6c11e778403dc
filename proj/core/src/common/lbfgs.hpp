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

#include <cmath>
#include <deque>
#include <functional>
#include <limits>

#include "qmt/types.hpp"

namespace qmt::detail {

/// Objective returning +inf outside its domain. Writes the gradient into g.
using Objective = std::function<double(const Vec& x, Vec& g)>;

struct LbfgsOptions {
  int max_iter = 1000;
  int memory = 10;
  double rel_tol = 1e-12;  // stop when g^T H g / 2 <= rel_tol * max(|f|, abs_floor)
  double abs_floor = 1e-14;
  /// Optional projection of search directions onto a feasible subspace.
  std::function<void(Vec&)> project;
};

struct LbfgsResult {
  Vec x;
  double f = 0.0;
  double decrement = 0.0;  // g^T H g at the last iterate
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline LbfgsResult lbfgs(const Objective& fn, Vec x, const LbfgsOptions& opt) {
  const auto proj = [&](Vec& v) {
    if (opt.project) opt.project(v);
  };
  Vec g(x.size());
  double f = fn(x, g);
  if (!std::isfinite(f)) throw Error("optimizer started outside the domain");
  proj(g);
  std::deque<Vec> S, Y;
  std::deque<double> rho;
  LbfgsResult out;
  for (int it = 0; it < opt.max_iter; ++it) {
    Vec q = g;
    std::vector<double> alpha(S.size());
    for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
      alpha[k] = rho[k] * S[k].dot(q);
      q -= alpha[k] * Y[k];
    }
    double gamma = 1.0;
    if (!S.empty()) gamma = S.back().dot(Y.back()) / Y.back().squaredNorm();
    else if (g.norm() > 0.0) gamma = std::min(1.0, 1.0 / g.norm());
    q *= gamma;
    for (size_t k = 0; k < S.size(); ++k) {
      const double b = rho[k] * Y[k].dot(q);
      q += (alpha[k] - b) * S[k];
    }
    Vec p = -q;
    proj(p);
    double dec = -g.dot(p);
    out.decrement = dec;
    out.grad_norm = g.norm();
    out.iterations = it;
    if (!(dec > 0.0)) {
      S.clear(), Y.clear(), rho.clear();
      p = -g;
      dec = g.squaredNorm();
      if (dec == 0.0) {
        out.converged = true;
        break;
      }
    }
    if (0.5 * dec <= opt.rel_tol * std::max(std::abs(f), opt.abs_floor)) {
      out.converged = true;
      break;
    }
    double step = 1.0;
    Vec xn, gn(x.size());
    double fn_val = std::numeric_limits<double>::infinity();
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + step * p;
      fn_val = fn(xn, gn);
      if (std::isfinite(fn_val) && fn_val <= f - 1e-4 * step * dec) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) {
      if (!S.empty()) {
        S.clear(), Y.clear(), rho.clear();
        continue;
      }
      out.converged = 0.5 * dec <= 1e3 * opt.rel_tol * std::max(std::abs(f), opt.abs_floor);
      break;
    }
    proj(gn);
    Vec s = xn - x, y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      S.push_back(s), Y.push_back(y), rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opt.memory) S.pop_front(), Y.pop_front(), rho.pop_front();
    }
    x = xn, g = gn, f = fn_val;
    out.iterations = it + 1;
  }
  out.x = x;
  out.f = f;
  out.grad_norm = g.norm();
  return out;
}

}  // namespace qmt::detail
