#pragma once

// Rational analytic disks into P^n, finite Blaschke products, the four disk
// conditions, and the subharmonic test function
//   chi(zeta) = log|P(f(zeta))| + d log|B(zeta)|.

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

#include "projhull/curvelib.hpp"
#include "projhull/errors.hpp"
#include "projhull/logspace.hpp"
#include "projhull/polyring.hpp"

namespace projhull {

class BlaschkeProduct {
 public:
  BlaschkeProduct() = default;
  explicit BlaschkeProduct(std::vector<cplx> zeros) : zeros_(std::move(zeros)) {
    for (cplx z : zeros_)
      if (!(std::abs(z) < 1.0)) throw DomainError("Blaschke zero outside the open unit disk");
  }

  const std::vector<cplx>& zeros() const { return zeros_; }

  // Factor-by-factor product in stored order.
  cplx operator()(cplx zeta) const {
    if (std::abs(zeta) > 1.0 + 1e-9) throw DomainError("Blaschke product evaluated outside the closed disk");
    cplx acc = 1.0;
    for (cplx a : zeros_) acc *= (zeta - a) / (1.0 - std::conj(a) * zeta);
    return acc;
  }

  // B(zeta) / (zeta - a_j) at zeta = a_j: the value of B with its j-th factor's
  // zero divided out.
  cplx deflated_at(std::size_t j) const {
    const cplx p = zeros_.at(j);
    cplx acc = 1.0 / (1.0 - std::norm(p));
    for (std::size_t k = 0; k < zeros_.size(); ++k) {
      if (k == j) continue;
      acc *= (p - zeros_[k]) / (1.0 - std::conj(zeros_[k]) * p);
    }
    return acc;
  }

 private:
  std::vector<cplx> zeros_;
};

inline cplx blaschke_eval(const BlaschkeProduct& b, cplx zeta) { return b(zeta); }

// sum log|zero_j| = log|B(0)|; -inf if a zero sits at the origin.
inline double blaschke_log_center(const BlaschkeProduct& b) {
  double acc = 0.0;
  for (cplx z : b.zeros()) acc += std::log(std::abs(z));
  return acc;
}

struct PoleTerm {
  cplx pole;
  cplx residue;
  unsigned order = 1;
};

struct DiskComponent {
  std::vector<cplx> poly;  // polynomial part, ascending powers of zeta
  std::vector<PoleTerm> poles;
};

// One entry of the deduplicated pole list.
struct MapPole {
  cplx pole;
  std::vector<cplx> residue;  // first-order residue per component
  unsigned order = 1;         // highest order across components
  bool simple = true;
};

// A point of P^n: either affine, or on the hyperplane H at infinity with
// homogeneous coordinates [0 : direction].
struct ProjectivePoint {
  bool at_infinity = false;
  std::vector<cplx> affine;
  std::vector<cplx> direction;
};

class RationalDiskMap {
 public:
  RationalDiskMap(std::size_t n, std::vector<DiskComponent> components)
      : n_(n), components_(std::move(components)) {
    if (components_.size() != n_) throw DimensionError("disk map needs one component per coordinate");
    for (std::size_t i = 0; i < n_; ++i) {
      // Merge repeated first-order terms within a component.
      std::vector<PoleTerm> merged;
      for (const auto& t : components_[i].poles) {
        if (!(std::abs(t.pole) < 1.0)) throw DomainError("disk map pole outside the open unit disk");
        if (t.order == 0) throw DomainError("pole order must be positive");
        auto it = std::find_if(merged.begin(), merged.end(),
                               [&](const PoleTerm& m) { return m.pole == t.pole && m.order == t.order; });
        if (it == merged.end()) merged.push_back(t);
        else it->residue += t.residue;
      }
      std::erase_if(merged, [](const PoleTerm& t) { return t.residue == cplx{}; });
      components_[i].poles = std::move(merged);
    }
    for (std::size_t i = 0; i < n_; ++i) {
      for (const auto& t : components_[i].poles) {
        auto it = std::find_if(pole_list_.begin(), pole_list_.end(), [&](const MapPole& p) { return p.pole == t.pole; });
        if (it == pole_list_.end()) {
          pole_list_.push_back({t.pole, std::vector<cplx>(n_, 0.0), 0, true});
          it = std::prev(pole_list_.end());
        }
        if (t.order == 1) it->residue[i] += t.residue;
        it->order = std::max(it->order, t.order);
      }
    }
    for (auto& p : pole_list_) p.simple = p.order == 1;
  }

  std::size_t n() const { return n_; }
  const std::vector<DiskComponent>& components() const { return components_; }
  const std::vector<MapPole>& pole_list() const { return pole_list_; }

  std::optional<std::size_t> pole_index(cplx zeta) const {
    for (std::size_t j = 0; j < pole_list_.size(); ++j)
      if (pole_list_[j].pole == zeta) return j;
    return std::nullopt;
  }

  // Affine value away from the poles.
  std::vector<cplx> affine(cplx zeta) const {
    std::vector<cplx> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& comp = components_[i];
      cplx acc{};
      for (std::size_t k = comp.poly.size(); k-- > 0;) acc = acc * zeta + comp.poly[k];
      for (const auto& t : comp.poles) {
        const cplx d = zeta - t.pole;
        if (d == cplx{}) throw DomainError("affine value requested at a pole");
        acc += t.residue / std::pow(d, static_cast<int>(t.order));
      }
      out[i] = acc;
    }
    return out;
  }

  ProjectivePoint operator()(cplx zeta) const {
    if (std::abs(zeta) > 1.0 + 1e-12) throw DomainError("disk map evaluated outside the closed unit disk");
    if (auto j = pole_index(zeta)) {
      const auto& p = pole_list_[*j];
      if (!p.simple) throw UnsupportedPoleError("disk map has a higher-order pole at the evaluation point");
      // Normalize the residue direction by its largest-modulus entry.
      std::size_t big = 0;
      for (std::size_t i = 1; i < n_; ++i)
        if (std::abs(p.residue[i]) > std::abs(p.residue[big])) big = i;
      std::vector<cplx> dir(n_);
      for (std::size_t i = 0; i < n_; ++i) dir[i] = p.residue[i] / p.residue[big];
      return {true, {}, std::move(dir)};
    }
    return {false, affine(zeta), {}};
  }

  BlaschkeProduct blaschke() const {
    std::vector<cplx> zs;
    for (const auto& p : pole_list_) zs.push_back(p.pole);
    return BlaschkeProduct(std::move(zs));
  }

 private:
  std::size_t n_;
  std::vector<DiskComponent> components_;
  std::vector<MapPole> pole_list_;
};

inline ProjectivePoint eval_disk(const RationalDiskMap& f, cplx zeta) { return f(zeta); }

// f(zeta) = z0 + (zeta, sum_j c_j/(zeta - a_j) + sum_j c_j/a_j, 0, ...): every
// member satisfies f(0) = z0. With no poles this is the linear disk
// zeta -> z0 + zeta e_1.
inline RationalDiskMap pole_family_map(std::span<const cplx> z0, std::span<const double> a,
                                       std::span<const double> c) {
  const std::size_t n = z0.size();
  if (n == 0) throw DimensionError("family needs a base point");
  if (a.size() != c.size()) throw DimensionError("pole and weight lists differ in length");
  if (!a.empty() && n < 2) throw DimensionError("pole family needs two coordinates");
  std::vector<DiskComponent> comps(n);
  comps[0].poly = {z0[0], 1.0};
  for (std::size_t i = 1; i < n; ++i) comps[i].poly = {z0[i]};
  if (!a.empty()) {
    cplx shift = z0[1];
    // Largest terms last so the constant is summed smallest-first.
    for (std::size_t j = a.size(); j-- > 0;) shift += c[j] / a[j];
    comps[1].poly = {shift};
    for (std::size_t j = 0; j < a.size(); ++j) comps[1].poles.push_back({a[j], c[j], 1});
  }
  return RationalDiskMap(n, std::move(comps));
}

// f_n(zeta) = (zeta, omega_n(zeta)).
inline RationalDiskMap example1_map(const PoleSeriesParams& p, std::size_t n) {
  std::vector<double> a, c;
  for (std::size_t j = 1; j <= n; ++j) {
    a.push_back(p.a(j));
    c.push_back(p.c(j));
  }
  const std::vector<cplx> z0{0.0, 0.0};
  return pole_family_map(z0, a, c);
}

inline double disk_functional(const RationalDiskMap& f) {
  double acc = 0.0;
  for (const auto& p : f.pole_list()) acc += std::log(std::abs(p.pole));
  return acc;
}

struct ConditionI {
  bool holds = false;
  double max_boundary_distance = 0.0;
  double threshold = 0.0;  // r, or r/2 for a certified check
};
struct ConditionII {
  bool holds = false;
  double deviation = 0.0;  // |f(0) - z0|; +inf when 0 is a pole
};
struct ConditionIII {
  bool holds = false;
  double pole_log_sum = 0.0;
  double M = 0.0;
};
struct ConditionIV {
  bool holds = false;
  std::vector<cplx> offending_poles;
};

struct DiskConditionsReport {
  ConditionI cond_i;
  ConditionII cond_ii;
  ConditionIII cond_iii;
  ConditionIV cond_iv;

  bool all_hold() const { return cond_i.holds && cond_ii.holds && cond_iii.holds && cond_iv.holds; }
};

inline constexpr double kCenterTolerance = 1e-12;

inline std::vector<cplx> boundary_samples(std::size_t m) {
  std::vector<cplx> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = unit_root(k, m);
  return out;
}

// Largest distance from the sampled boundary image f(e^{2 pi i k/m}) to the curve.
inline double max_boundary_distance(const RationalDiskMap& f, const SampledCurve& curve, std::size_t m_bdy) {
  double worst = 0.0;
  for (cplx zeta : boundary_samples(m_bdy)) worst = std::max(worst, dist_to_curve(f.affine(zeta), curve));
  return worst;
}

inline DiskConditionsReport check_conditions(const RationalDiskMap& f, const SampledCurve& curve, double r,
                                             std::span<const cplx> z0, double M, std::size_t m_bdy = 1024,
                                             bool certified = false) {
  if (m_bdy < 256) throw DomainError("condition (i) needs at least 256 boundary samples");
  if (z0.size() != f.n() || curve.n() != f.n()) throw DimensionError("map, curve and z0 dimensions differ");
  DiskConditionsReport rep;
  rep.cond_i.threshold = certified ? 0.5 * r : r;
  rep.cond_i.max_boundary_distance = max_boundary_distance(f, curve, m_bdy);
  rep.cond_i.holds = rep.cond_i.max_boundary_distance < rep.cond_i.threshold;

  if (f.pole_index(0.0)) {
    rep.cond_ii.deviation = std::numeric_limits<double>::infinity();
  } else {
    const auto v = f.affine(0.0);
    rep.cond_ii.deviation = SampledCurve::distance(v, z0);
  }
  rep.cond_ii.holds = rep.cond_ii.deviation <= kCenterTolerance;

  rep.cond_iii.M = M;
  rep.cond_iii.pole_log_sum = blaschke_log_center(f.blaschke());
  rep.cond_iii.holds = rep.cond_iii.pole_log_sum >= -M;

  rep.cond_iv.holds = true;
  for (const auto& p : f.pole_list()) {
    if (!p.simple) {
      rep.cond_iv.holds = false;
      rep.cond_iv.offending_poles.push_back(p.pole);
    }
  }
  return rep;
}

// chi value; -inf is carried by the flag, never as a float sentinel.
struct ChiValue {
  double value = 0.0;
  bool minus_infinity = false;

  static ChiValue from_log(double v) {
    if (v == kNegInf) return {0.0, true};
    return {v, false};
  }
};

namespace detail {

inline void require_matching_zeros(const RationalDiskMap& f, const BlaschkeProduct& b) {
  const auto& poles = f.pole_list();
  const auto& zeros = b.zeros();
  bool ok = poles.size() == zeros.size();
  for (std::size_t j = 0; ok && j < poles.size(); ++j) {
    ok = std::any_of(zeros.begin(), zeros.end(), [&](cplx z) { return std::abs(z - poles[j].pole) <= 1e-14; });
  }
  if (!ok) throw DomainError("Blaschke zeros must equal the pole list of the disk map");
}

inline std::size_t zero_index(const BlaschkeProduct& b, cplx p) {
  const auto& zs = b.zeros();
  for (std::size_t k = 0; k < zs.size(); ++k)
    if (std::abs(zs[k] - p) <= 1e-14) return k;
  throw DomainError("pole without matching Blaschke zero");
}

// Degree-d homogeneous part of P evaluated at v.
inline cplx top_part(const ComplexPolynomial& p, unsigned d, std::span<const cplx> v) {
  cplx acc{};
  for (const auto& [md, c] : p.terms()) {
    if (md.total() != d) continue;
    cplx mono = c;
    for (std::size_t i = 0; i < md.size(); ++i) mono *= std::pow(v[i], static_cast<int>(md[i]));
    acc += mono;
  }
  return acc;
}

}  // namespace detail

// At a simple pole p the removable limit is
//   log|P_d(residue)| + d log|B(zeta)/(zeta - p)| at zeta = p,
// which is -inf when P(f) has pole order below d there.
inline ChiValue chi_eval(const ComplexPolynomial& p, unsigned d, const RationalDiskMap& f,
                         const BlaschkeProduct& b, cplx zeta) {
  if (p.degree() > d) throw DegreeError("chi needs deg P <= d");
  if (p.n_vars() != f.n()) throw DimensionError("polynomial and map dimensions differ");
  detail::require_matching_zeros(f, b);
  if (auto j = f.pole_index(zeta)) {
    const auto& pole = f.pole_list()[*j];
    if (!pole.simple) throw UnsupportedPoleError("chi limit needs simple poles");
    const cplx lead = detail::top_part(p, d, pole.residue);
    if (lead == cplx{}) return {0.0, true};
    const cplx bd = b.deflated_at(detail::zero_index(b, pole.pole));
    return ChiValue::from_log(std::log(std::abs(lead)) + d * std::log(std::abs(bd)));
  }
  const cplx pv = p(f.affine(zeta));
  if (pv == cplx{}) return {0.0, true};
  const double lb = std::log(std::abs(b(zeta)));
  if (lb == kNegInf && d > 0) return {0.0, true};
  return ChiValue::from_log(std::log(std::abs(pv)) + d * lb);
}

struct PolarGrid {
  std::size_t radial = 64;
  std::size_t angular = 64;
};

struct MaxPrincipleResult {
  double interior_max = kNegInf;
  double boundary_max = kNegInf;
  bool pass = false;
};

inline constexpr double kMaxPrincipleSlack = 1e-8;

// Interior points r_i e^{i theta_j} with r_i = i/radial (i < radial).
inline MaxPrincipleResult max_principle_check(const ComplexPolynomial& p, unsigned d, const RationalDiskMap& f,
                                              const BlaschkeProduct& b, const PolarGrid& grid,
                                              std::size_t m_bdy) {
  if (grid.radial < 64 || grid.angular < 64) throw DomainError("grid resolution must be at least 64x64");
  MaxPrincipleResult res;
  const auto take = [](double& acc, const ChiValue& v) {
    if (!v.minus_infinity) acc = std::max(acc, v.value);
  };
  take(res.interior_max, chi_eval(p, d, f, b, 0.0));
  for (std::size_t i = 1; i < grid.radial; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(grid.radial);
    for (std::size_t j = 0; j < grid.angular; ++j)
      take(res.interior_max, chi_eval(p, d, f, b, r * unit_root(j, grid.angular)));
  }
  for (cplx zeta : boundary_samples(m_bdy)) take(res.boundary_max, chi_eval(p, d, f, b, zeta));
  res.pass = res.interior_max <= res.boundary_max + kMaxPrincipleSlack;
  return res;
}

struct MembershipBound {
  double lhs = 0.0;  // |P(f(a))|
  double rhs = 0.0;  // sup_on_tube |1/B(a)|^d
  bool holds = false;
};

inline MembershipBound membership_bound_check(const ComplexPolynomial& p, unsigned d, const RationalDiskMap& f,
                                              const BlaschkeProduct& b, cplx a, double sup_on_tube) {
  if (p.degree() > d) throw DegreeError("membership bound needs deg P <= d");
  detail::require_matching_zeros(f, b);
  const cplx ba = b(a);
  if (ba == cplx{} || f.pole_index(a)) throw DomainError("membership bound evaluated at a zero of B");
  MembershipBound out;
  out.lhs = std::abs(p(f.affine(a)));
  out.rhs = sup_on_tube * std::pow(std::abs(ba), -static_cast<double>(d));
  out.holds = out.lhs <= out.rhs;
  return out;
}

struct GProductBound {
  double boundary_sup = 0.0;
  std::vector<std::vector<cplx>> pole_values;  // G at each pole, in pole_list order
  double interior_max = 0.0;
  bool max_principle_holds = false;
};

// G = f B is pole-free; at a simple pole p, G(p) = residue * B(zeta)/(zeta-p)|_p.
inline GProductBound g_product_bound(const RationalDiskMap& f, const BlaschkeProduct& b, std::size_t m_bdy,
                                     const PolarGrid& grid = {}) {
  detail::require_matching_zeros(f, b);
  for (const auto& p : f.pole_list())
    if (!p.simple) throw UnsupportedPoleError("G = f B is pole-free only for simple poles");
  const auto norm_of = [](std::span<const cplx> v) {
    double s = 0.0;
    for (cplx x : v) s += std::norm(x);
    return std::sqrt(s);
  };
  const auto g_at = [&](cplx zeta) -> std::vector<cplx> {
    if (auto j = f.pole_index(zeta)) {
      const auto& pole = f.pole_list()[*j];
      const cplx bd = b.deflated_at(detail::zero_index(b, pole.pole));
      std::vector<cplx> v(f.n());
      for (std::size_t i = 0; i < f.n(); ++i) v[i] = pole.residue[i] * bd;
      return v;
    }
    auto v = f.affine(zeta);
    const cplx bz = b(zeta);
    for (auto& x : v) x *= bz;
    return v;
  };
  GProductBound out;
  for (const auto& p : f.pole_list()) out.pole_values.push_back(g_at(p.pole));
  for (cplx zeta : boundary_samples(m_bdy)) out.boundary_sup = std::max(out.boundary_sup, norm_of(g_at(zeta)));
  out.interior_max = norm_of(g_at(0.0));
  for (std::size_t i = 1; i < grid.radial; ++i) {
    const double r = static_cast<double>(i) / static_cast<double>(grid.radial);
    for (std::size_t j = 0; j < grid.angular; ++j)
      out.interior_max = std::max(out.interior_max, norm_of(g_at(r * unit_root(j, grid.angular))));
  }
  for (const auto& v : out.pole_values) out.interior_max = std::max(out.interior_max, norm_of(v));
  out.max_principle_holds = out.interior_max <= out.boundary_sup + kMaxPrincipleSlack;
  return out;
}

// {"n": int, "components": [{"poly": [{"re","im"}...], "poles": [{"re","im","res_re","res_im","order"?}]}]}
inline nlohmann::json disk_map_to_json(const RationalDiskMap& f) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : f.components()) {
    nlohmann::json poly = nlohmann::json::array();
    for (cplx v : c.poly) poly.push_back({{"re", v.real()}, {"im", v.imag()}});
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& t : c.poles) {
      nlohmann::json pj = {{"re", t.pole.real()}, {"im", t.pole.imag()},
                           {"res_re", t.residue.real()}, {"res_im", t.residue.imag()}};
      if (t.order != 1) pj["order"] = t.order;
      poles.push_back(std::move(pj));
    }
    comps.push_back({{"poly", std::move(poly)}, {"poles", std::move(poles)}});
  }
  return {{"n", f.n()}, {"components", std::move(comps)}};
}

inline RationalDiskMap disk_map_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  std::vector<DiskComponent> comps;
  for (const auto& cj : j.at("components")) {
    DiskComponent c;
    for (const auto& v : cj.value("poly", nlohmann::json::array()))
      c.poly.emplace_back(v.at("re").get<double>(), v.value("im", 0.0));
    for (const auto& pj : cj.value("poles", nlohmann::json::array())) {
      c.poles.push_back({cplx(pj.at("re").get<double>(), pj.value("im", 0.0)),
                         cplx(pj.at("res_re").get<double>(), pj.value("res_im", 0.0)),
                         pj.value("order", 1u)});
    }
    comps.push_back(std::move(c));
  }
  return RationalDiskMap(n, std::move(comps));
}

}  // namespace projhull
