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

#include "qmt/opcalc.hpp"

namespace qmt {

namespace {

// E(v) = expm1(v)/v and its first two derivatives in v.
struct EVals {
  double e, e1, e2;
};

EVals e_series(double v) {
  double e = 0.0, e1 = 0.0, e2 = 0.0;
  double pw = 1.0;    // v^k
  double fact = 1.0;  // (k+1)!
  for (int k = 0; k < 22; ++k) {
    fact *= (k + 1);
    const double f2 = fact * (k + 2);
    const double f3 = f2 * (k + 3);
    e += pw / fact;
    e1 += (k + 1) * pw / f2;
    e2 += (k + 1) * (k + 2) * pw / f3;
    pw *= v;
  }
  return {e, e1, e2};
}

EVals e_closed(double v) {
  const double ev = std::exp(v);
  const double em = std::expm1(v);
  return {em / v, (v * ev - em) / (v * v),
          (v * v * ev - 2.0 * v * ev + 2.0 * em) / (v * v * v)};
}

// d^k/du^k of E(a u).
EVals e_scaled(double a, double u) {
  if (a == 0.0) return {1.0, 0.0, 0.0};
  const double v = a * u;
  EVals r = std::abs(v) < 0.5 ? e_series(v) : e_closed(v);
  return {r.e, a * r.e1, a * a * r.e2};
}

// g(x) = theta_m(x, 1) and its first two derivatives in x.
struct GVals {
  double g, g1, g2;
};

GVals g_power(double m, double x) {
  const double u = std::log(x);
  EVals p = e_scaled(m, u);
  EVals q = e_scaled(m - 1.0, u);
  const double h = p.e / q.e;
  const double num = p.e1 * q.e - p.e * q.e1;
  const double h1 = num / (q.e * q.e);
  const double h2 =
      (p.e2 * q.e - p.e * q.e2) / (q.e * q.e) - 2.0 * q.e1 * num / (q.e * q.e * q.e);
  return {h, h1 / x, (h2 - h1) / (x * x)};
}

void require_domain(double r, double s) {
  if (!(r > 0.0) || !(s > 0.0) || !std::isfinite(r) || !std::isfinite(s))
    throw Error("mean undefined on spectrum");
}

// theta_m(r, s) = s g(r/s) and partial derivatives in r.
double pm_value(double m, double r, double s) { return s * g_power(m, r / s).g; }
double pm_d1(double m, double r, double s) { return g_power(m, r / s).g1; }
double pm_d11(double m, double r, double s) { return g_power(m, r / s).g2 / s; }

[[noreturn]] void missing_derivative() {
  throw Error("custom mean lacks derivative for confluent evaluation");
}

}  // namespace

MeanFunction MeanFunction::logarithmic() {
  MeanFunction f;
  f.tag_ = Tag::logarithmic;
  return f;
}

MeanFunction MeanFunction::tilted_log(double beta) {
  MeanFunction f;
  f.tag_ = Tag::tilted_log;
  f.beta_ = beta;
  return f;
}

MeanFunction MeanFunction::power(double m, double beta) {
  MeanFunction f;
  f.tag_ = Tag::power;
  f.m_ = m;
  f.beta_ = beta;
  return f;
}

MeanFunction MeanFunction::reciprocal_of(const MeanFunction& inner) {
  MeanFunction f;
  f.tag_ = Tag::reciprocal;
  f.inner_ = std::make_shared<const MeanFunction>(inner);
  return f;
}

MeanFunction MeanFunction::custom(CustomMean c) {
  if (!c.value) throw Error("custom mean requires a value function");
  MeanFunction f;
  f.tag_ = Tag::custom;
  f.custom_ = std::make_shared<const CustomMean>(std::move(c));
  return f;
}

double MeanFunction::operator()(double r, double s) const {
  switch (tag_) {
    case Tag::logarithmic:
    case Tag::tilted_log:
    case Tag::power: {
      require_domain(r, s);
      const double a = std::exp(-0.5 * beta_), b = std::exp(0.5 * beta_);
      return pm_value(m_, a * r, b * s);
    }
    case Tag::reciprocal:
      return 1.0 / (*inner_)(r, s);
    case Tag::custom:
      return custom_->value(r, s);
  }
  return 0.0;
}

double MeanFunction::d1(double r, double s) const {
  switch (tag_) {
    case Tag::logarithmic:
    case Tag::tilted_log:
    case Tag::power: {
      require_domain(r, s);
      const double a = std::exp(-0.5 * beta_), b = std::exp(0.5 * beta_);
      return a * pm_d1(m_, a * r, b * s);
    }
    case Tag::reciprocal: {
      const double t = (*inner_)(r, s);
      return -inner_->d1(r, s) / (t * t);
    }
    case Tag::custom:
      if (!custom_->d1) missing_derivative();
      return custom_->d1(r, s);
  }
  return 0.0;
}

double MeanFunction::d2(double r, double s) const {
  switch (tag_) {
    case Tag::logarithmic:
    case Tag::tilted_log:
    case Tag::power: {
      require_domain(r, s);
      const double a = std::exp(-0.5 * beta_), b = std::exp(0.5 * beta_);
      return b * pm_d1(m_, b * s, a * r);
    }
    case Tag::reciprocal: {
      const double t = (*inner_)(r, s);
      return -inner_->d2(r, s) / (t * t);
    }
    case Tag::custom:
      if (!custom_->d2) missing_derivative();
      return custom_->d2(r, s);
  }
  return 0.0;
}

double MeanFunction::d11(double r, double s) const {
  switch (tag_) {
    case Tag::logarithmic:
    case Tag::tilted_log:
    case Tag::power: {
      require_domain(r, s);
      const double a = std::exp(-0.5 * beta_), b = std::exp(0.5 * beta_);
      return a * a * pm_d11(m_, a * r, b * s);
    }
    case Tag::reciprocal: {
      const double t = (*inner_)(r, s);
      const double t1 = inner_->d1(r, s);
      return (2.0 * t1 * t1 - t * inner_->d11(r, s)) / (t * t * t);
    }
    case Tag::custom:
      if (!custom_->d11) missing_derivative();
      return custom_->d11(r, s);
  }
  return 0.0;
}

double MeanFunction::d22(double r, double s) const {
  switch (tag_) {
    case Tag::logarithmic:
    case Tag::tilted_log:
    case Tag::power: {
      require_domain(r, s);
      const double a = std::exp(-0.5 * beta_), b = std::exp(0.5 * beta_);
      return b * b * pm_d11(m_, b * s, a * r);
    }
    case Tag::reciprocal: {
      const double t = (*inner_)(r, s);
      const double t2 = inner_->d2(r, s);
      return (2.0 * t2 * t2 - t * inner_->d22(r, s)) / (t * t * t);
    }
    case Tag::custom:
      if (!custom_->d22) missing_derivative();
      return custom_->d22(r, s);
  }
  return 0.0;
}

std::string MeanFunction::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (tag_) {
    case Tag::logarithmic:
      return "log";
    case Tag::tilted_log:
      os << "tilted_log(" << beta_ << ")";
      break;
    case Tag::power:
      os << "power(" << m_ << "," << beta_ << ")";
      break;
    case Tag::reciprocal:
      os << "reciprocal(" << inner_->name() << ")";
      break;
    case Tag::custom:
      return custom_->name;
  }
  return os.str();
}

bool MeanFunction::homogeneous() const {
  switch (tag_) {
    case Tag::logarithmic:
    case Tag::tilted_log:
    case Tag::power:
      return true;
    case Tag::reciprocal:
      return false;
    case Tag::custom:
      return custom_->homogeneous;
  }
  return false;
}

bool MeanFunction::operator_monotone() const {
  switch (tag_) {
    case Tag::logarithmic:
    case Tag::tilted_log:
      return true;
    case Tag::power:
      return m_ >= -1.0 && m_ <= 2.0;
    case Tag::reciprocal:
      return false;
    case Tag::custom:
      return custom_->operator_monotone;
  }
  return false;
}

}  // namespace qmt
