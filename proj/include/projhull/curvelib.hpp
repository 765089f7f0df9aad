#pragma once

// Sampled closed curves, tube neighborhoods, and the two pole-series curve
// families: gamma_0 = graph of omega over |zeta| = 1 and its rotated-pole
// analogue gamma_infinity.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "projhull/errors.hpp"
#include "projhull/json_format.hpp"
#include "projhull/logspace.hpp"

namespace projhull {

enum class SeriesVariant { Example1Standard, Example1Rapid, Example2 };

inline std::string to_string(SeriesVariant v) {
  switch (v) {
    case SeriesVariant::Example1Standard: return "example1-standard";
    case SeriesVariant::Example1Rapid: return "example1-rapid";
    case SeriesVariant::Example2: return "example2";
  }
  return "unknown";
}

inline std::optional<SeriesVariant> parse_variant(const std::string& s) {
  if (s == "example1-standard") return SeriesVariant::Example1Standard;
  if (s == "example1-rapid") return SeriesVariant::Example1Rapid;
  if (s == "example2") return SeriesVariant::Example2;
  return std::nullopt;
}

// Pole data a_n = 1 - eps_n, weights c_n, with eps_n = 2^-n and
//   standard: c_n = 4^-n n^-n
//   rapid:    c_n = 4^-n n^-(n^2)   (underflows near n = 16, kept as log c_n)
//   example2: as standard; pole n is repeated n times around the circle.
// Indices are 1-based throughout to match the series.
class PoleSeriesParams {
 public:
  static constexpr std::size_t kStoredTerms = 256;
  // Terms summed explicitly before the geometric remainder takes over.
  static constexpr std::size_t kExplicitTail = 60;

  explicit PoleSeriesParams(SeriesVariant variant = SeriesVariant::Example1Standard)
      : variant_(variant) {
    log_c_.resize(kStoredTerms + 1, kNegInf);
    for (std::size_t n = 1; n <= kStoredTerms; ++n) {
      const double dn = static_cast<double>(n);
      const double lc = -dn * std::log(4.0);
      log_c_[n] = variant == SeriesVariant::Example1Rapid ? lc - dn * dn * std::log(dn)
                                                          : lc - dn * std::log(dn);
    }
    // Weighted tail terms t_n = mult_n c_n / eps_n in log form.
    log_t_.resize(kStoredTerms + 1, kNegInf);
    for (std::size_t n = 1; n <= kStoredTerms; ++n)
      log_t_[n] = std::log(static_cast<double>(multiplicity(n))) + log_c_[n] - log_eps(n);
    // The ratio t_{n+1}/t_n is non-increasing for every variant (log t_n is
    // concave in n); the last stored ratio dominates everything beyond.
    for (std::size_t n = 1; n + 1 < kStoredTerms; ++n) {
      const double r0 = log_t_[n + 1] - log_t_[n];
      const double r1 = log_t_[n + 2] - log_t_[n + 1];
      if (r1 > r0 + 1e-12) throw Error("tail term ratios increase; geometric bound invalid");
    }

    // kappa = sum c_n / a_n, summed smallest-first.
    double k = 0.0;
    for (std::size_t n = kStoredTerms; n >= 1; --n) k += c(n) / a(n);
    kappa_ = k;
  }

  SeriesVariant variant() const { return variant_; }

  double eps(std::size_t n) const { return std::ldexp(1.0, -static_cast<int>(n)); }
  double log_eps(std::size_t n) const { return -static_cast<double>(n) * std::numbers::ln2; }
  double a(std::size_t n) const { return 1.0 - eps(n); }
  double log_c(std::size_t n) const { return log_c_.at(n); }
  double c(std::size_t n) const { return std::exp(log_c_.at(n)); }
  std::size_t multiplicity(std::size_t n) const {
    return variant_ == SeriesVariant::Example2 ? n : 1;
  }

  // zeta - a_n computed as (zeta - 1) + eps_n; exact at zeta = 1 and free of
  // the rounding of a_n to 1 for n >= 53.
  cplx shifted(cplx zeta, std::size_t n) const { return (zeta - 1.0) + eps(n); }

  double kappa() const { return kappa_; }

  // Certified log upper bound on sum_{n>N} mult_n c_n / eps_n.
  double log_tail_bound(std::size_t N) const {
    const std::size_t last = N + kExplicitTail;
    if (last + 1 > kStoredTerms) throw DomainError("tail requested beyond stored series terms");
    std::vector<double> parts;
    for (std::size_t n = N + 1; n <= last; ++n) parts.push_back(log_t_[n]);
    // Remainder sum_{n>last} t_n <= t_{last+1} / (1 - r), r = t_{last+2}/t_{last+1}.
    const double r = log_t_[last + 2] - log_t_[last + 1];
    parts.push_back(log_t_[last + 1] - std::log1p(-std::exp(r)));
    return log_sum_exp(parts);
  }
  double tail_bound(std::size_t N) const { return std::exp(log_tail_bound(N)); }

  // Certified bound on sum_{n>N} mult_n (c_n/eps_n + c_n/a_n); a_n >= eps_n.
  double boundary_tail_bound(std::size_t N) const { return 2.0 * tail_bound(N); }

  // Certified bound on sum_k k c_k / eps_k (the Example 2 summability constant).
  double weighted_sum_bound() const { return std::exp(log_tail_bound(0)); }

  // Smallest N with boundary_tail_bound(N) <= tol.
  std::size_t truncation_for(double tol) const {
    for (std::size_t N = 0; N + kExplicitTail + 2 < kStoredTerms; ++N)
      if (boundary_tail_bound(N) <= tol) return N;
    throw DomainError("tolerance below what the stored series can certify");
  }

 private:
  SeriesVariant variant_;
  std::vector<double> log_c_;
  std::vector<double> log_t_;
  double kappa_ = 0.0;
};

inline double tail_bound(const PoleSeriesParams& params, std::size_t N) { return params.tail_bound(N); }

// omega_n(zeta) = sum_{j<=n} c_j/(zeta - a_j) + sum_{j<=n} c_j/a_j.
inline cplx omega_partial(const PoleSeriesParams& p, std::size_t n, cplx zeta) {
  cplx acc{};
  for (std::size_t j = n; j >= 1; --j) {
    const cplx d = p.shifted(zeta, j);
    if (d == cplx{}) throw PoleError(j);
    const double cj = p.c(j);
    acc += cj / d + cj / p.a(j);
  }
  return acc;
}

struct OmegaValue {
  cplx value;
  double tail = 0.0;       // certified bound on |omega - returned value|
  std::size_t terms = 0;   // truncation N actually summed
};

// Full series value. For |zeta| >= 1 the per-term bound |c_j/(zeta-a_j)| <=
// c_j/eps_j applies. Interior points need a caller-supplied separation delta
// <= min_j |zeta - a_j|.
inline OmegaValue omega_full(const PoleSeriesParams& p, cplx zeta, double tol,
                             std::optional<double> delta = std::nullopt) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (delta && zeta == cplx(1.0, 0.0)) throw DomainError("zeta = 1 is the singular endpoint of the interior domain");
  // Unit-circle samples computed with polar() may land a few ulps inside.
  const double r = std::abs(zeta);
  if (r >= 1.0 - 1e-14) {
    const std::size_t N = p.truncation_for(tol);
    return {omega_partial(p, N, zeta), p.boundary_tail_bound(N), N};
  }
  if (!delta || !(*delta > 0.0)) throw DomainError("interior evaluation of omega needs a separation delta > 0");
  // Beyond the stored poles a_j is within 2^-256 of 1.
  for (std::size_t j = 1; j <= PoleSeriesParams::kStoredTerms; ++j)
    if (std::abs(p.shifted(zeta, j)) < *delta) throw DomainError("point within delta of pole j=" + std::to_string(j));
  // sum_{j>N} c_j (1/delta + 1/a_j) <= (1/delta + 2) eps_{N+1} sum_{j>N} c_j/eps_j
  for (std::size_t N = 0; N + PoleSeriesParams::kExplicitTail + 2 < PoleSeriesParams::kStoredTerms; ++N) {
    const double bound = (1.0 / *delta + 2.0) * p.eps(N + 1) * p.tail_bound(N);
    if (bound <= tol) return {omega_partial(p, N, zeta), bound, N};
  }
  throw DomainError("tolerance below what the stored series can certify");
}

// Rotated poles e^{2 pi i l/k} a_k, l = 1..k, k = 1..n, normalized to vanish at 0.
inline cplx omega_tilde_partial(const PoleSeriesParams& p, std::size_t n, cplx zeta) {
  const auto raw = [&](cplx x, bool check) {
    cplx acc{};
    for (std::size_t k = n; k >= 1; --k) {
      const double ck = p.c(k);
      for (std::size_t l = 1; l <= k; ++l) {
        const cplx rot = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(k));
        const cplx d = (x - rot) + rot * p.eps(k);
        // Rotations other than l = k carry rounding, so hits are detected to
        // a few ulps of the pole modulus.
        if (std::abs(d) <= 1e-14) {
          if (check) throw PoleError(k, l);
          continue;
        }
        acc += ck / d;
      }
    }
    return acc;
  };
  const cplx kappa_n = raw(cplx{}, false);
  return raw(zeta, true) - kappa_n;
}

// Boundary value of the Example 2 series with certified truncation.
inline OmegaValue omega_tilde_full(const PoleSeriesParams& p, cplx zeta, double tol) {
  if (std::abs(zeta) < 1.0 - 1e-14) throw DomainError("omega_tilde_full is defined on |zeta| >= 1");
  const std::size_t N = p.truncation_for(tol);
  return {omega_tilde_partial(p, N, zeta), p.boundary_tail_bound(N), N};
}

// A closed curve in C^n given by parameter-ordered samples.
class SampledCurve {
 public:
  static constexpr std::size_t kMinSamples = 16;

  SampledCurve(std::size_t n, std::vector<double> t, std::vector<std::vector<cplx>> points,
               json meta = json::object())
      : n_(n), t_(std::move(t)), points_(std::move(points)), meta_(std::move(meta)) {
    if (n_ == 0) throw DimensionError("curve dimension must be positive");
    if (t_.size() != points_.size()) throw DimensionError("parameter and point counts differ");
    if (t_.size() < kMinSamples) throw DomainError("a sampled curve needs at least 16 samples");
    for (std::size_t k = 0; k < t_.size(); ++k) {
      if (points_[k].size() != n_) throw DimensionError("sample point of wrong dimension");
      if (!(t_[k] >= 0.0 && t_[k] < 1.0)) throw DomainError("curve parameter outside [0,1)");
      if (k > 0 && !(t_[k] > t_[k - 1])) throw DomainError("curve parameters must increase strictly");
    }
    std::vector<double> gaps(t_.size());
    for (std::size_t k = 0; k < t_.size(); ++k) gaps[k] = distance(points_[k], points_[(k + 1) % t_.size()]);
    std::vector<double> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    max_gap_ = *std::max_element(gaps.begin(), gaps.end());
    if (max_gap_ > 8.0 * median) throw DomainError("curve sampling too uneven (max gap > 8x median gap)");
  }

  std::size_t n() const { return n_; }
  std::size_t size() const { return t_.size(); }
  bool closed() const { return true; }
  double t(std::size_t k) const { return t_[k]; }
  const std::vector<cplx>& point(std::size_t k) const { return points_[k]; }
  const std::vector<double>& parameters() const { return t_; }
  const std::vector<std::vector<cplx>>& points() const { return points_; }
  const json& meta() const { return meta_; }
  double max_gap() const { return max_gap_; }

  static double distance(std::span<const cplx> a, std::span<const cplx> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
  }

 private:
  std::size_t n_;
  std::vector<double> t_;
  std::vector<std::vector<cplx>> points_;
  json meta_;
  double max_gap_ = 0.0;
};

// Sample minimum refined by a quadratic through the nearest sample and its
// two neighbors; never larger than the plain sample minimum.
inline double dist_to_curve(std::span<const cplx> z, const SampledCurve& curve) {
  if (z.size() != curve.n()) throw DimensionError("point and curve dimensions differ");
  const std::size_t m = curve.size();
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m; ++k) {
    const double d = SampledCurve::distance(z, curve.point(k));
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best_d == 0.0) return 0.0;
  const auto& p0 = curve.point(best);
  const auto& pm = curve.point((best + m - 1) % m);
  const auto& pp = curve.point((best + 1) % m);
  const std::size_t n = curve.n();
  // q(s) = p0 + s b + s^2 c, s in [-1, 1].
  std::vector<cplx> b(n), c(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = 0.5 * (pp[i] - pm[i]);
    c[i] = 0.5 * (pp[i] - 2.0 * p0[i] + pm[i]);
    r[i] = p0[i] - z[i];
  }
  const auto f = [&](double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::norm(r[i] + s * b[i] + s * s * c[i]);
    return acc;
  };
  double s_best = 0.0, f_best = f(0.0);
  for (int k = -32; k <= 32; ++k) {
    const double s = k / 32.0;
    const double v = f(s);
    if (v < f_best) {
      f_best = v;
      s_best = s;
    }
  }
  // Newton polish on the quartic |q(s) - z|^2.
  for (int it = 0; it < 20; ++it) {
    double g = 0.0, h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx e = r[i] + s_best * b[i] + s_best * s_best * c[i];
      const cplx de = b[i] + 2.0 * s_best * c[i];
      g += 2.0 * std::real(std::conj(de) * e);
      h += 2.0 * (std::norm(de) + std::real(std::conj(2.0 * c[i]) * e));
    }
    if (!(h > 0.0)) break;
    const double s_new = std::clamp(s_best - g / h, -1.0, 1.0);
    const double v = f(s_new);
    if (!(v < f_best)) break;
    f_best = v;
    s_best = s_new;
  }
  return std::min(best_d, std::sqrt(f_best));
}

struct TubeNeighborhood {
  const SampledCurve* curve;
  double r;

  TubeNeighborhood(const SampledCurve& c, double radius) : curve(&c), r(radius) {
    if (!(radius > 0.0)) throw DomainError("tube radius must be positive");
  }
  bool contains(std::span<const cplx> z) const { return dist_to_curve(z, *curve) < r; }
};

// Evaluation tolerance for every boundary sample of the family curves.
inline constexpr double kCurveSampleTol = 1e-12;

inline cplx unit_root(std::size_t k, std::size_t m) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m));
}

// (zeta_k, omega(zeta_k)) at zeta_k = e^{2 pi i k/m}; the Example 2 variant
// uses the rotated-pole series.
inline SampledCurve build_curve(const PoleSeriesParams& params, std::size_t m) {
  if (m < 64) throw DomainError("build_curve needs m >= 64");
  std::vector<double> t(m);
  std::vector<std::vector<cplx>> pts(m);
  double worst_tail = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    t[k] = static_cast<double>(k) / static_cast<double>(m);
    const cplx zeta = unit_root(k, m);
    const OmegaValue w = params.variant() == SeriesVariant::Example2
                             ? omega_tilde_full(params, zeta, kCurveSampleTol)
                             : omega_full(params, zeta, kCurveSampleTol);
    worst_tail = std::max(worst_tail, w.tail);
    pts[k] = {zeta, w.value};
  }
  json meta = {{"variant", to_string(params.variant())},
               {"m", m},
               {"kappa", params.kappa()},
               {"sample_tail_bound", worst_tail}};
  if (params.variant() == SeriesVariant::Example2) meta["weighted_sum_bound"] = params.weighted_sum_bound();
  return SampledCurve(2, std::move(t), std::move(pts), std::move(meta));
}

// Unit circle in C^1 (or embedded as the first coordinate with zeros after).
inline SampledCurve circle_curve(std::size_t m, std::size_t n = 1, double radius = 1.0) {
  std::vector<double> t(m);
  std::vector<std::vector<cplx>> pts(m, std::vector<cplx>(n, 0.0));
  for (std::size_t k = 0; k < m; ++k) {
    t[k] = static_cast<double>(k) / static_cast<double>(m);
    pts[k][0] = radius * unit_root(k, m);
  }
  return SampledCurve(n, std::move(t), std::move(pts), {{"kind", "circle"}, {"m", m}});
}

// {"n": int, "samples": [{"t": float, "re": [...], "im": [...]}], "meta": {...}}
inline json curve_to_json(const SampledCurve& c) {
  json samples = json::array();
  for (std::size_t k = 0; k < c.size(); ++k) {
    std::vector<double> re, im;
    for (cplx v : c.point(k)) {
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    samples.push_back({{"t", c.t(k)}, {"re", re}, {"im", im}});
  }
  return {{"n", c.n()}, {"samples", std::move(samples)}, {"meta", c.meta()}};
}

inline SampledCurve curve_from_json(const json& j) {
  const auto n = j.at("n").get<std::size_t>();
  std::vector<double> t;
  std::vector<std::vector<cplx>> pts;
  for (const auto& s : j.at("samples")) {
    t.push_back(s.at("t").get<double>());
    const auto re = s.at("re").get<std::vector<double>>();
    const auto im = s.at("im").get<std::vector<double>>();
    if (re.size() != n || im.size() != n) throw DimensionError("curve sample has wrong dimension");
    std::vector<cplx> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = {re[i], im[i]};
    pts.push_back(std::move(p));
  }
  return SampledCurve(n, std::move(t), std::move(pts), j.value("meta", json::object()));
}

}  // namespace projhull
