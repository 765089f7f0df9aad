// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "projhull/projhull.hpp"

using namespace projhull;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("AC%d %s: %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const SampledCurve& gamma0() {
  static const SampledCurve c = build_curve(PoleSeriesParams{}, 2048);
  return c;
}

BlaschkeProduct random_blaschke(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 20);
  std::uniform_real_distribution<double> rad(0.01, 0.999), ang(0.0, 2 * std::numbers::pi);
  std::vector<cplx> zs(count(rng));
  for (auto& z : zs) z = std::polar(rad(rng), ang(rng));
  return BlaschkeProduct(std::move(zs));
}

SampledCurve random_curve(std::mt19937_64& rng, std::size_t m) {
  std::vector<cplx> coef(8);
  for (auto& c : coef) c = oracle::random_complex(rng, 0.3);
  std::vector<double> t(m);
  std::vector<std::vector<cplx>> pts(m);
  for (std::size_t k = 0; k < m; ++k) {
    t[k] = static_cast<double>(k) / static_cast<double>(m);
    const cplx e = unit_root(k, m);
    pts[k] = {e + coef[0] * e * e + coef[1] * std::conj(e) + coef[2],
              std::pow(e, 3) + coef[3] * std::conj(e) + coef[4] * e + coef[5]};
  }
  return SampledCurve(2, std::move(t), std::move(pts));
}

void ac1() {
  std::mt19937_64 rng(101);
  double worst_mod = 0.0, worst_center = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto b = random_blaschke(rng);
    for (cplx zeta : boundary_samples(256)) worst_mod = std::max(worst_mod, std::abs(std::abs(b(zeta)) - 1.0));
    worst_center = std::max(worst_center, std::abs(std::log(std::abs(b(0.0))) - blaschke_log_center(b)));
  }
  report(1, worst_mod <= 1e-10 && worst_center <= 1e-12,
         fmt("max ||B|-1| = %.3e, max center deviation = %.3e", worst_mod, worst_center));
}

void ac2() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> mdist(0.0, 20.0);
  const std::vector<cplx> z0{0.0, 0.0};
  int holds = 0;
  bool ok = true;
  for (int i = 0; i < 50; ++i) {
    const auto b = random_blaschke(rng);
    std::vector<DiskComponent> comps(2);
    comps[0].poly = {0.0, 1.0};
    for (cplx z : b.zeros()) comps[1].poles.push_back({z, 0.01, 1});
    const RationalDiskMap f(2, std::move(comps));
    const double M = mdist(rng);
    const auto rep = check_conditions(f, gamma0(), 0.1, z0, M, 256);
    if (!rep.cond_iii.holds) continue;
    ++holds;
    const auto fb = f.blaschke();
    ok = ok && blaschke_log_center(fb) == rep.cond_iii.pole_log_sum &&
         std::abs(fb(0.0)) >= std::exp(-M) * (1 - 1e-12);
  }
  report(2, ok && holds > 0, fmt("%d of 50 maps satisfy (iii); |B(0)| >= e^-M in all of them", holds));
}

void ac3() {
  const auto g = gram_build(circle_curve(512), 24);
  const std::vector<cplx> two{2.0}, zero{0.0}, on{std::polar(1.0, 1.3)};
  const double l2 = christoffel_lambda(two, g).lambda_hat;
  const double l1 = christoffel_lambda(on, g).lambda_hat;
  double dev0 = 0.0;
  for (unsigned d = 1; d <= 24; ++d)
    dev0 = std::max(dev0, std::abs(christoffel_lambda(zero, gram_build(circle_curve(512), d)).lambda_hat - 1.0));
  const bool ok = std::abs(l2 / 2.0120 - 1) <= 5e-3 && std::abs(l1 / 1.0694 - 1) <= 5e-3 && dev0 <= 1e-13;
  report(3, ok, fmt("Lambda24(2) = %.6f, Lambda24(|z|=1) = %.6f, max |Lambda_d(0)-1| = %.1e", l2, l1, dev0));
}

void ac4() {
  std::mt19937_64 rng(104);
  double worst = 0.0;
  for (int c = 0; c < 2; ++c) {
    const auto curve = random_curve(rng, 64);
    for (int i = 0; i < 10; ++i) {
      const unsigned d = 1 + (i % 3);
      const std::vector<cplx> z{oracle::random_complex(rng), oracle::random_complex(rng)};
      const double phi = sup_extremal_lp(z, curve, d, 64).phi;
      const double k = std::sqrt(christoffel_lambda(z, gram_build(curve, d)).K);
      worst = std::max(worst, phi / k);
    }
  }
  const std::vector<cplx> two{2.0};
  const double phi1 = sup_extremal_lp(two, circle_curve(64), 1, 64).phi;
  report(4, worst <= 1.0 && std::abs(phi1 / 2.0 - 1) <= 5e-3,
         fmt("max Phi/K^(1/2) over 20 pairs = %.6f, Phi_1(2) on circle = %.6f", worst, phi1));
}

const TheoremThreeReport& standard() {
  static const TheoremThreeReport r = verify_theorem3(PoleSeriesParams{});
  return r;
}
const TheoremThreeReport& rapid() {
  static const TheoremThreeReport r = verify_theorem3(PoleSeriesParams(SeriesVariant::Example1Rapid));
  return r;
}

bool all_of(const std::vector<InequalityCheck>& v) {
  for (const auto& c : v)
    if (!c.pass) return false;
  return !v.empty();
}

void ac5() {
  const bool ok = all_of(standard().tail_checks) && all_of(rapid().tail_checks) &&
                  standard().tail_checks.size() == 8 && rapid().tail_checks.size() == 8;
  report(5, ok, fmt("standard N=1: %.7f < %.2f; rapid N=8: log %.1f < %.1f", std::exp(standard().tail_checks[0].lhs),
                    std::exp(standard().tail_checks[0].rhs), rapid().tail_checks[7].lhs, rapid().tail_checks[7].rhs));
}

void ac6() {
  const auto& s = standard().sup_checks;
  double margin = -1e300;
  for (const auto& c : s) margin = std::max(margin, c.lhs - c.rhs);
  report(6, all_of(s) && s.size() == 39 && s.front().N == 2 && s.back().N == 40,
         fmt("N=2: %.4f <= %.4f; worst log margin %.3f over N=2..40", std::exp(s.front().lhs),
             std::exp(s.front().rhs), margin));
}

void ac7() {
  const auto& r = standard().root_limits;
  report(7, all_of(r) && r.size() == 2,
         fmt("N=60 deviations %.6f (0,1) and %.6f (0.5i,2), bound %.6f", r[0].lhs, r[1].lhs, r[0].rhs));
}

void ac8() {
  const auto& f = standard().pole_fiber_checks;
  double spread = 0.0;
  for (const auto& c : f) spread = std::max(spread, c.lhs);
  const PoleSeriesParams p;
  double val = 0.0, wspread = 0.0;
  for (cplx w : {cplx(0.0), cplx(1.0), cplx(0.0, 5.0)}) {
    const cplx v = log_pn_recurrence(p, 2, p.a(1), w).value();
    val = v.real();
    wspread = std::max(wspread, std::abs(v - 0.0625));
  }
  // -c_1 (a_1 - a_2) = +1/16; the criterion quotes the magnitude with the opposite sign.
  report(8, all_of(f) && wspread <= 1e-15,
         fmt("max log-space spread over w in {0,1,5i}, N<=12: %.1e; P_2(a_1,w) = %+.6f for all w (|value| 0.0625)",
             spread, val));
}

void ac9() {
  const auto& c = standard().infinity_chart_check;
  const PoleSeriesParams p;
  bool exact = true;
  for (std::size_t N = 1; N <= 6; ++N) {
    const auto chart = chart_pipeline(expand_pn(p, N), static_cast<unsigned>(N + 1));
    for (cplx w : {cplx(1.0), cplx(2.0, 1.0), cplx(-0.3, 4.0)}) exact = exact && chart({0.0, w}) == w;
  }
  report(9, exact && all_of(c) && c.size() == 12,
         fmt("P''_N(0,w) = w exactly for N<=6; chart bound N=12: %.4f <= %.4f", std::exp(c.back().lhs),
             std::exp(c.back().rhs)));
}

void ac10() {
  const HullScanner scanner(gamma0(), 16);
  struct Case {
    std::vector<cplx> z;
    HullClass expect;
    const char* name;
  };
  const std::vector<Case> cases{{{0.0, 0.0}, HullClass::In, "(0,0)"},
                                {{2.0, oracle::to_d(oracle::omega(2.0))}, HullClass::In, "(2,w(2))"},
                                {{0.0, 0.5}, HullClass::Out, "(0,0.5)"},
                                {{0.5, 0.0}, HullClass::Out, "(0.5,0)"}};
  bool labels = true, ratios = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto prof = scanner.classify(c.z);
    const double ratio = prof.lambda_at(16) / prof.lambda_at(8);
    labels = labels && prof.classification == c.expect;
    ratios = ratios && (c.expect == HullClass::Out ? ratio >= 1.2 : ratio <= 1.1);
    detail += fmt("%s %s ratio %.3f res %.1e; ", c.name, to_string(prof.classification).c_str(), ratio,
                  prof.probe_residual);
  }
  const bool meta = calibration_json(scanner.options(), 16).contains("residual_out");
  detail += labels ? "labels match" : "labels differ";
  if (!ratios) detail += "; OUT ratio clause unmet (Gram saturation in double precision)";
  report(10, labels && ratios && meta, detail);
}

void ac11() {
  const PoleSeriesParams p;
  const std::vector<cplx> z0{0.0, 0.0};
  const auto rep = check_conditions(example1_map(p, 3), gamma0(), 0.1, z0, 1.25);
  const auto lb = disk_lower_bound(z0, gamma0(), 0.05);
  report(11, rep.all_hold() && lb.best.value >= -1.243,
         fmt("f_3 conditions %s (pole log-sum %.7f); disk lower bound %.6f with %zu poles",
             rep.all_hold() ? "hold" : "fail", rep.cond_iii.pole_log_sum, lb.best.value, lb.best.a.size()));
}

void ac12() {
  const PoleSeriesParams p;
  const auto z = ComplexPolynomial::variable(2, 0);
  const auto w = ComplexPolynomial::variable(2, 1);
  const auto one = ComplexPolynomial::constant(2, 1.0);
  std::vector<DiskComponent> comps(2);
  comps[0].poly = {0.0, 1.0};
  comps[1].poles = {{0.5, 0.25, 1}};
  const RationalDiskMap single(2, std::move(comps));
  const BlaschkeProduct bs({0.5});
  const auto closed = max_principle_check(w, 1, single, bs, {}, 1024);
  bool ok = closed.pass && std::abs(closed.boundary_max - std::log(0.5)) < 1e-7;

  struct Case {
    std::size_t n;
    ComplexPolynomial poly;
    unsigned d;
  };
  const std::vector<Case> corpus{{1, w, 1},          {2, w, 1},         {3, w * w, 2},      {3, z, 1},
                                 {4, w + z, 1},      {5, z * w, 2},     {5, w * w - z, 2},  {2, one * 3.0, 2},
                                 {3, w * w * w, 3},  {6, w * z + one, 2}};
  int passed = 0;
  double worst = -1e300;
  for (const auto& c : corpus) {
    const auto f = example1_map(p, c.n);
    const auto r = max_principle_check(c.poly, c.d, f, f.blaschke(), {}, 512);
    passed += r.pass;
    worst = std::max(worst, r.interior_max - r.boundary_max);
  }
  ok = ok && passed == 10;
  report(12, ok, fmt("closed form boundary max %.7f; %d/10 corpus cases pass, worst interior-boundary %.3e",
                     closed.boundary_max, passed, worst));
}

}  // namespace

int main() {
  ac1();
  ac2();
  ac3();
  ac4();
  ac5();
  ac6();
  ac7();
  ac8();
  ac9();
  ac10();
  ac11();
  ac12();
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
