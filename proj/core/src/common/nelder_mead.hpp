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

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "qmt/types.hpp"

namespace qmt::detail {

struct NelderMeadResult {
  Vec x;
  double f = 0.0;
  int evaluations = 0;
};

/// Standard Nelder-Mead with adaptive coefficients. f may return +inf.
inline NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0,
                                    double step, int max_evals, double ftol = 1e-12) {
  const int n = static_cast<int>(x0.size());
  NelderMeadResult out;
  if (n == 0) {
    out.x = x0;
    out.f = f(x0);
    out.evaluations = 1;
    return out;
  }
  const double ne = std::max(n, 2);
  const double a = 1.0, g = 1.0 + 2.0 / ne, c = 0.75 - 0.5 / ne, s = 1.0 - 1.0 / ne;
  std::vector<Vec> X(n + 1, x0);
  std::vector<double> F(n + 1);
  for (int i = 0; i < n; ++i) X[i + 1](i) += step;
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };
  for (int i = 0; i <= n; ++i) F[i] = eval(X[i]);
  std::vector<int> idx(n + 1);
  while (evals < max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int p, int q) { return F[p] < F[q]; });
    const int best = idx[0], worst = idx[n], second = idx[n - 1];
    if (std::abs(F[worst] - F[best]) <= ftol * (std::abs(F[best]) + 1e-300)) break;
    Vec cen = Vec::Zero(n);
    for (int i = 0; i < n; ++i) cen += X[idx[i]];
    cen /= n;
    Vec xr = cen + a * (cen - X[worst]);
    const double fr = eval(xr);
    if (fr < F[best]) {
      Vec xe = cen + g * (xr - cen);
      const double fe = eval(xe);
      if (fe < fr) X[worst] = xe, F[worst] = fe;
      else X[worst] = xr, F[worst] = fr;
      continue;
    }
    if (fr < F[second]) {
      X[worst] = xr, F[worst] = fr;
      continue;
    }
    const bool outside = fr < F[worst];
    Vec xc = outside ? Vec(cen + c * (xr - cen)) : Vec(cen - c * (cen - X[worst]));
    const double fc = eval(xc);
    if (fc < (outside ? fr : F[worst])) {
      X[worst] = xc, F[worst] = fc;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      X[idx[i]] = X[best] + s * (X[idx[i]] - X[best]);
      F[idx[i]] = eval(X[idx[i]]);
    }
  }
  const int b = static_cast<int>(std::min_element(F.begin(), F.end()) - F.begin());
  out.x = X[b];
  out.f = F[b];
  out.evaluations = evals;
  return out;
}

}  // namespace qmt::detail
