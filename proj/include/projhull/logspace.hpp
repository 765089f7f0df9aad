#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>

namespace projhull {

using cplx = std::complex<double>;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum exp(x_i)); empty input and all -inf give -inf.
inline double log_sum_exp(std::span<const double> xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

inline double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

// A complex number held as (log|z|, arg z). Products never underflow; the
// zero value is log_abs = -inf.
struct LogComplex {
  double log_abs = kNegInf;
  double arg = 0.0;

  static LogComplex from(cplx z) {
    if (z == cplx{}) return {};
    return {std::log(std::abs(z)), std::arg(z)};
  }
  static LogComplex from_log_real(double log_abs, bool negative = false) {
    return {log_abs, negative ? M_PI : 0.0};
  }

  bool is_zero() const { return log_abs == kNegInf; }

  cplx value() const {
    if (is_zero()) return {};
    return std::polar(std::exp(log_abs), arg);
  }

  LogComplex& operator*=(const LogComplex& o) {
    log_abs += o.log_abs;
    arg = std::remainder(arg + o.arg, 2.0 * M_PI);
    return *this;
  }
  LogComplex& operator/=(const LogComplex& o) {
    log_abs -= o.log_abs;
    arg = std::remainder(arg - o.arg, 2.0 * M_PI);
    return *this;
  }
  friend LogComplex operator*(LogComplex a, const LogComplex& b) { return a *= b; }
  friend LogComplex operator/(LogComplex a, const LogComplex& b) { return a /= b; }
};

// Sum of terms exp(log_scale_i) * unit_i, returned in log form. Scaled by the
// largest magnitude so that tiny and huge terms combine without underflow.
inline LogComplex log_sum(std::span<const LogComplex> terms) {
  double hi = kNegInf;
  for (const auto& t : terms) hi = std::max(hi, t.log_abs);
  if (hi == kNegInf) return {};
  cplx acc{};
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    acc += std::polar(std::exp(t.log_abs - hi), t.arg);
  }
  LogComplex out = LogComplex::from(acc);
  if (!out.is_zero()) out.log_abs += hi;
  return out;
}

}  // namespace projhull
