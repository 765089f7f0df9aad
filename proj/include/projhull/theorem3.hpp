#pragma once

// Verifier for the polynomial family
//   P_N(z,w) = (w - kappa - sum_{n<=N} c_n/(z - a_n)) prod_{n<=N} (z - a_n)
// that separates points off W from the hull of gamma_0. Every magnitude is
// carried in log form; P_N is never expanded into monomials except for the
// small-N cross-checks in expand_pn.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "projhull/curvelib.hpp"
#include "projhull/errors.hpp"
#include "projhull/logspace.hpp"
#include "projhull/polyring.hpp"

namespace projhull {

// Coefficient expansion in (z, w); intended for N <= 6.
inline ComplexPolynomial expand_pn(const PoleSeriesParams& p, std::size_t N) {
  const auto z = ComplexPolynomial::variable(2, 0);
  const auto w = ComplexPolynomial::variable(2, 1);
  const auto one = ComplexPolynomial::constant(2, 1.0);
  std::vector<ComplexPolynomial> lin;
  for (std::size_t n = 1; n <= N; ++n) lin.push_back(z - one * p.a(n));
  ComplexPolynomial full = w - one * p.kappa();
  for (const auto& f : lin) full = full * f;
  for (std::size_t n = 1; n <= N; ++n) {
    ComplexPolynomial term = one * p.c(n);
    for (std::size_t j = 1; j <= N; ++j)
      if (j != n) term = term * lin[j - 1];
    full -= term;
  }
  return full;
}

// z -> s + 1, homogenize to degree N+1 in (t0, s0, w0), then set s0 = 1.
// The result is a polynomial in (t, w).
inline ComplexPolynomial chart_pipeline(const ComplexPolynomial& pn, unsigned degree) {
  const std::vector<AffineSubstitution> shift{{1.0, 1.0}, {1.0, 0.0}};
  const auto shifted = affine_precompose(pn, shift);
  const auto q = homogenize(shifted, degree);
  AffineChart chart;
  chart.dehomogenize_index = 1;
  chart.variable_order = {0, 2};
  return chart_restrict(q, chart);
}

// Closed form of the chart polynomial:
//   (w - kappa t - sum c_n t^2/(1 + eps_n t)) prod (1 + eps_n t).
inline cplx chart_closed_form(const PoleSeriesParams& p, std::size_t N, cplx t, cplx w) {
  cplx first = w - p.kappa() * t;
  cplx prod = 1.0;
  for (std::size_t n = 1; n <= N; ++n) {
    const cplx f = 1.0 + p.eps(n) * t;
    first -= p.c(n) * t * t / f;
    prod *= f;
  }
  return first * prod;
}

// P_N(z, w) from the defining product; z must avoid a_1..a_N.
inline LogComplex log_pn_product(const PoleSeriesParams& p, std::size_t N, cplx z, cplx w) {
  std::vector<LogComplex> terms{LogComplex::from(w - p.kappa())};
  LogComplex prod = LogComplex::from(1.0);
  for (std::size_t n = 1; n <= N; ++n) {
    const cplx d = p.shifted(z, n);
    if (d == cplx{}) throw PoleError(n);
    LogComplex t = LogComplex::from_log_real(p.log_c(n), true);
    t /= LogComplex::from(d);
    terms.push_back(t);
    prod *= LogComplex::from(d);
  }
  LogComplex first = log_sum(terms);
  return first * prod;
}

// P_{k}(z,w) = (z - a_k) P_{k-1}(z,w) - c_k prod_{j<k} (z - a_j), P_0 = w - kappa.
// Valid everywhere, including the pole fibers z = a_n.
inline LogComplex log_pn_recurrence(const PoleSeriesParams& p, std::size_t N, cplx z, cplx w) {
  LogComplex value = LogComplex::from(w - p.kappa());
  LogComplex prod = LogComplex::from(1.0);
  for (std::size_t k = 1; k <= N; ++k) {
    const LogComplex d = LogComplex::from(p.shifted(z, k));
    LogComplex sub = LogComplex::from_log_real(p.log_c(k), true) * prod;
    const LogComplex terms[2] = {d.is_zero() ? LogComplex{} : value * d, prod.is_zero() ? LogComplex{} : sub};
    value = log_sum(terms);
    prod = d.is_zero() ? LogComplex{} : prod * d;
  }
  return value;
}

// -c_n prod_{j != n, j <= N} (a_n - a_j).
inline LogComplex log_pole_fiber_closed(const PoleSeriesParams& p, std::size_t N, std::size_t n) {
  LogComplex v = LogComplex::from_log_real(p.log_c(n), true);
  for (std::size_t j = 1; j <= N; ++j)
    if (j != n) v *= LogComplex::from(cplx(p.eps(j) - p.eps(n)));
  return v;
}

// Upper bound on log|P_N(zeta, omega(zeta))| for |zeta| = 1 from the remainder
// form (sum_{n>N} c_n/(zeta - a_n)) prod_{n<=N} (zeta - a_n).
inline double log_pn_on_curve_bound(const PoleSeriesParams& p, std::size_t N, cplx zeta) {
  const std::size_t last = N + PoleSeriesParams::kExplicitTail;
  std::vector<LogComplex> terms;
  for (std::size_t n = N + 1; n <= last; ++n) {
    LogComplex t = LogComplex::from_log_real(p.log_c(n));
    t /= LogComplex::from(p.shifted(zeta, n));
    terms.push_back(t);
  }
  const double rem = log_add_exp(log_sum(terms).log_abs, p.log_tail_bound(last));
  double lp = 0.0;
  for (std::size_t n = 1; n <= N; ++n) lp += std::log(std::abs(p.shifted(zeta, n)));
  return rem + lp;
}

struct InequalityCheck {
  std::string name;
  long N = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  bool gating = true;
  nlohmann::json extra = nlohmann::json::object();
};

inline nlohmann::json to_json(const InequalityCheck& c) {
  nlohmann::json j = {{"name", c.name}, {"N", c.N}, {"lhs", c.lhs}, {"rhs", c.rhs},
                      {"pass", c.pass}, {"gating", c.gating}};
  if (!c.extra.empty()) j["extra"] = c.extra;
  return j;
}

struct TheoremThreeOptions {
  std::size_t N_max = 40;
  std::size_t tail_N_max = 8;
  std::size_t root_N = 60;
  std::size_t chart_N_max = 12;
  std::size_t expand_N_max = 6;
  std::size_t m = 2048;
  std::vector<std::pair<cplx, cplx>> test_points{{0.0, 1.0}, {cplx(0.0, 0.5), 2.0}};
  std::vector<cplx> fiber_ws{0.0, 1.0, cplx(0.0, 5.0)};
  std::size_t fiber_N_max = 12;
  cplx z1_w = 0.0;
  cplx chart_w = 1.0;
  double chart_K = 1.0;
};

struct TheoremThreeReport {
  std::string variant;
  std::vector<InequalityCheck> tail_checks;
  std::vector<InequalityCheck> sup_checks;
  std::vector<InequalityCheck> root_limits;
  std::vector<InequalityCheck> pole_fiber_checks;
  std::vector<InequalityCheck> z_equals_1_check;
  std::vector<InequalityCheck> infinity_chart_check;
  nlohmann::json diagnostics = nlohmann::json::object();

  std::vector<const std::vector<InequalityCheck>*> groups() const {
    return {&tail_checks, &sup_checks, &root_limits, &pole_fiber_checks, &z_equals_1_check, &infinity_chart_check};
  }

  bool all_pass() const {
    for (const auto* g : groups())
      for (const auto& c : *g)
        if (c.gating && !c.pass) return false;
    return true;
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto* g : groups())
      for (const auto& c : *g)
        if (c.gating && !c.pass) out.push_back(c.name + " (N=" + std::to_string(c.N) + ")");
    return out;
  }
};

inline nlohmann::json to_json(const TheoremThreeReport& r) {
  const auto arr = [](const std::vector<InequalityCheck>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& c : v) a.push_back(to_json(c));
    return a;
  };
  return {{"variant", r.variant},
          {"all_pass", r.all_pass()},
          {"tail_checks", arr(r.tail_checks)},
          {"sup_checks", arr(r.sup_checks)},
          {"root_limits", arr(r.root_limits)},
          {"pole_fiber_checks", arr(r.pole_fiber_checks)},
          {"z_equals_1_check", arr(r.z_equals_1_check)},
          {"infinity_chart_check", arr(r.infinity_chart_check)},
          {"diagnostics", r.diagnostics}};
}

inline TheoremThreeReport verify_theorem3(const PoleSeriesParams& p, const TheoremThreeOptions& o = {}) {
  if (p.variant() == SeriesVariant::Example2) throw DomainError("the verifier covers the Example 1 variants");
  if (o.N_max > 120 || o.root_N > 120) throw DomainError("N_max above 120 is outside the log-space budget");
  if (o.m < 1024) throw DomainError("the verifier needs m >= 1024 curve samples");
  const bool rapid = p.variant() == SeriesVariant::Example1Rapid;
  TheoremThreeReport rep;
  rep.variant = to_string(p.variant());

  // Tail inequality against (1/(N+1))^{N+1}, or ^{(N+1)^2} for the rapid series.
  for (std::size_t N = 1; N <= o.tail_N_max; ++N) {
    const double np1 = static_cast<double>(N + 1);
    const double rhs = -(rapid ? np1 * np1 : np1) * std::log(np1);
    const double lhs = p.log_tail_bound(N);
    rep.tail_checks.push_back({rapid ? "tail_rapid" : "tail", static_cast<long>(N), lhs, rhs, lhs < rhs});
  }

  // Curve samples and the per-sample data shared by the sup and chart checks.
  std::vector<cplx> zetas(o.m), ws(o.m);
  double chart_factor_max = 0.0;
  for (std::size_t k = 0; k < o.m; ++k) {
    zetas[k] = unit_root(k, o.m);
    ws[k] = omega_full(p, zetas[k], kCurveSampleTol).value;
    chart_factor_max = std::max(chart_factor_max, std::sqrt(1.0 + std::norm(zetas[k]) + std::norm(ws[k])));
  }
  rep.diagnostics["eq7_section_factor_max"] = chart_factor_max;
  rep.diagnostics["kappa"] = p.kappa();
  rep.diagnostics["m"] = o.m;

  const std::size_t n_sup = std::max(o.N_max, o.chart_N_max);
  std::vector<double> log_sup(n_sup + 1), log_fs_sup(n_sup + 1);
  for (std::size_t N = 1; N <= n_sup; ++N) {
    double s = kNegInf, fs = kNegInf;
    for (std::size_t k = 0; k < o.m; ++k) {
      const double lp = log_pn_on_curve_bound(p, N, zetas[k]);
      s = std::max(s, lp);
      const double r2 = 1.0 + std::norm(zetas[k] - 1.0) + std::norm(ws[k]);
      fs = std::max(fs, lp - 0.5 * static_cast<double>(N + 1) * std::log(r2));
    }
    log_sup[N] = s;
    log_fs_sup[N] = fs;
  }

  // Sup bound: ||P_N||^{1/(N+1)} <= 2/(N+1).
  for (std::size_t N = 2; N <= o.N_max; ++N) {
    const double np1 = static_cast<double>(N + 1);
    const double lhs = log_sup[N] / np1;
    const double rhs = std::log(2.0 / np1);
    InequalityCheck c{"sup", static_cast<long>(N), lhs, rhs, lhs <= rhs};
    c.extra = {{"log_sup", log_sup[N]}, {"log_eq12_bound", p.log_tail_bound(N) + N * std::numbers::ln2}};
    rep.sup_checks.push_back(std::move(c));
  }

  // Root limits: (1/(N+1)) log|P_N(z,w)| -> log|z - 1|.
  for (const auto& [z, w] : o.test_points) {
    const double target = std::log(std::abs(z - 1.0));
    nlohmann::json traj = nlohmann::json::array();
    double dev = 0.0;
    for (std::size_t N = 1; N <= o.root_N; ++N) {
      const double v = log_pn_product(p, N, z, w).log_abs / static_cast<double>(N + 1);
      traj.push_back(v);
      dev = std::abs(v - target);
    }
    const double bound = 2.0 / static_cast<double>(o.root_N + 1);
    InequalityCheck c{"root_limit", static_cast<long>(o.root_N), dev, bound, dev <= bound};
    c.extra = {{"z", {z.real(), z.imag()}}, {"w", {w.real(), w.imag()}}, {"log_abs_z_minus_1", target},
               {"trajectory", std::move(traj)}};
    rep.root_limits.push_back(std::move(c));
  }

  // Pole fibers: the recurrence at z = a_n gives the same value for every w.
  for (std::size_t N = 2; N <= std::min(o.fiber_N_max, o.N_max); ++N) {
    for (std::size_t n = 1; n <= N; ++n) {
      const LogComplex closed = log_pole_fiber_closed(p, N, n);
      double spread = 0.0;
      nlohmann::json vals = nlohmann::json::array();
      for (cplx w : o.fiber_ws) {
        const LogComplex v = log_pn_recurrence(p, N, cplx(p.a(n)), w);
        const double darg = std::abs(std::remainder(v.arg - closed.arg, 2.0 * std::numbers::pi));
        spread = std::max({spread, std::abs(v.log_abs - closed.log_abs), darg});
        vals.push_back({{"log_abs", v.log_abs}, {"arg", v.arg}});
      }
      InequalityCheck c{"pole_fiber", static_cast<long>(N), spread, 1e-12, spread <= 1e-12};
      c.extra = {{"n", n}, {"closed_log_abs", closed.log_abs}, {"closed_arg", closed.arg}, {"values", vals}};
      rep.pole_fiber_checks.push_back(std::move(c));
    }
  }

  // z = 1: the gap (1/(N+1))(log|P_N(1,w)| - log sup bound) must grow without
  // bound. Only the rapid series makes this work; for the standard series the
  // numbers are reported but do not gate.
  {
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t N = 1; N <= o.N_max; ++N) {
      const double np1 = static_cast<double>(N + 1);
      const double lhs = log_pn_product(p, N, 1.0, o.z1_w).log_abs / np1;
      const double rhs = (p.log_tail_bound(N) + N * std::numbers::ln2) / np1;
      const double gap = lhs - rhs;
      InequalityCheck c{"z_equals_1", static_cast<long>(N), lhs, rhs, gap > prev, rapid};
      c.extra = {{"gap", gap}};
      prev = gap;
      rep.z_equals_1_check.push_back(std::move(c));
    }
  }

  // Infinity chart: sup over gamma_0 of the section norm is at most
  // (2K/(N+1))^{N+1}; at t = 0 the chart polynomial equals w, whose section
  // norm decays only like (1+|w|^2)^{-(N+1)/2}.
  for (std::size_t N = 1; N <= o.chart_N_max; ++N) {
    const double np1 = static_cast<double>(N + 1);
    const double lhs = log_fs_sup[N] / np1;
    const double rhs = std::log(2.0 * o.chart_K / np1);
    const cplx at_zero = chart_closed_form(p, N, 0.0, o.chart_w);
    const double log_norm_zero = std::log(std::abs(at_zero)) - 0.5 * np1 * std::log(1.0 + std::norm(o.chart_w));
    bool ok = lhs <= rhs && at_zero == o.chart_w;
    nlohmann::json extra = {{"log_section_norm_at_t0", log_norm_zero},
                            {"separation", log_norm_zero / np1 - lhs}};
    if (N <= o.expand_N_max) {
      const auto chart = chart_pipeline(expand_pn(p, N), static_cast<unsigned>(N + 1));
      const cplx piped = chart({cplx{}, o.chart_w});
      const cplx piped2 = chart({cplx{}, cplx(2.0, 1.0)});
      ok = ok && piped == o.chart_w && piped2 == cplx(2.0, 1.0);
      extra["pipeline_at_t0"] = {piped.real(), piped.imag()};
    }
    InequalityCheck c{"infinity_chart", static_cast<long>(N), lhs, rhs, ok};
    c.extra = std::move(extra);
    rep.infinity_chart_check.push_back(std::move(c));
  }
  return rep;
}

}  // namespace projhull
