#pragma once

// Sparse multivariate complex polynomials: evaluation, homogenization,
// affine charts, substitution, and the Fubini-Study section norm.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "projhull/errors.hpp"
#include "projhull/logspace.hpp"

namespace projhull {

class Multidegree {
 public:
  Multidegree() = default;
  explicit Multidegree(std::vector<unsigned> exponents) : exps_(std::move(exponents)) {
    total_ = std::accumulate(exps_.begin(), exps_.end(), 0u);
  }
  Multidegree(std::initializer_list<unsigned> exponents)
      : Multidegree(std::vector<unsigned>(exponents)) {}

  static Multidegree zero(std::size_t n) { return Multidegree(std::vector<unsigned>(n, 0u)); }

  std::size_t size() const { return exps_.size(); }
  unsigned total() const { return total_; }
  unsigned operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<unsigned>& exponents() const { return exps_; }

  friend Multidegree operator+(const Multidegree& a, const Multidegree& b) {
    std::vector<unsigned> e(a.exps_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.exps_[i];
    return Multidegree(std::move(e));
  }
  friend bool operator==(const Multidegree&, const Multidegree&) = default;

 private:
  std::vector<unsigned> exps_;
  unsigned total_ = 0;
};

// Graded order: total degree ascending, then exponents lexicographically
// descending (1, z, w, z^2, zw, w^2, ... for two variables).
struct GradedOrder {
  bool operator()(const Multidegree& a, const Multidegree& b) const {
    if (a.total() != b.total()) return a.total() < b.total();
    return a.exponents() > b.exponents();
  }
};

// Every multidegree of total <= d in n variables, in GradedOrder.
inline std::vector<Multidegree> graded_basis(std::size_t n, unsigned d) {
  std::vector<Multidegree> out;
  std::vector<unsigned> e(n, 0);
  for (unsigned t = 0; t <= d; ++t) {
    // Enumerate compositions of t into n parts in lexicographically
    // descending order.
    auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
      if (pos + 1 == n) {
        e[pos] = left;
        out.emplace_back(e);
        return;
      }
      for (unsigned k = left + 1; k-- > 0;) {
        e[pos] = k;
        self(self, pos + 1, left - k);
      }
    };
    if (n == 0) {
      if (t == 0) out.emplace_back(std::vector<unsigned>{});
      continue;
    }
    rec(rec, 0, t);
  }
  return out;
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class ComplexPolynomial {
 public:
  using TermMap = std::map<Multidegree, cplx, GradedOrder>;

  explicit ComplexPolynomial(std::size_t n_vars) : n_vars_(n_vars) {
    if (n_vars == 0) throw DimensionError("polynomial needs at least one variable");
  }

  ComplexPolynomial(std::size_t n_vars, const std::vector<std::pair<Multidegree, cplx>>& terms)
      : ComplexPolynomial(n_vars) {
    for (const auto& [md, c] : terms) add_term(md, c);
  }

  static ComplexPolynomial constant(std::size_t n_vars, cplx c) {
    ComplexPolynomial p(n_vars);
    p.add_term(Multidegree::zero(n_vars), c);
    return p;
  }

  static ComplexPolynomial variable(std::size_t n_vars, std::size_t i) {
    if (i >= n_vars) throw DimensionError("variable index out of range");
    std::vector<unsigned> e(n_vars, 0);
    e[i] = 1;
    ComplexPolynomial p(n_vars);
    p.add_term(Multidegree(std::move(e)), 1.0);
    return p;
  }

  std::size_t n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const { return terms_.empty() ? 0u : terms_.rbegin()->first.total(); }

  cplx coefficient(const Multidegree& md) const {
    auto it = terms_.find(md);
    return it == terms_.end() ? cplx{} : it->second;
  }

  // Accumulates c into the coefficient of md; exact zeros are dropped.
  void add_term(const Multidegree& md, cplx c) {
    if (md.size() != n_vars_) throw DimensionError("multidegree length does not match n_vars");
    auto [it, inserted] = terms_.try_emplace(md, c);
    if (!inserted) it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }

  cplx operator()(std::span<const cplx> z) const {
    if (z.size() != n_vars_) {
      throw DimensionError("point has dimension " + std::to_string(z.size()) +
                           ", polynomial has " + std::to_string(n_vars_) + " variables");
    }
    const unsigned d = degree();
    // powers[i][k] = z_i^k
    std::vector<std::vector<cplx>> powers(n_vars_, std::vector<cplx>(d + 1, 1.0));
    for (std::size_t i = 0; i < n_vars_; ++i)
      for (unsigned k = 1; k <= d; ++k) powers[i][k] = powers[i][k - 1] * z[i];
    cplx acc{};
    for (const auto& [md, c] : terms_) {
      cplx mono = c;
      for (std::size_t i = 0; i < n_vars_; ++i) mono *= powers[i][md[i]];
      acc += mono;
    }
    return acc;
  }
  cplx operator()(std::initializer_list<cplx> z) const {
    return (*this)(std::span<const cplx>(z.begin(), z.size()));
  }

  ComplexPolynomial& operator+=(const ComplexPolynomial& o) {
    check_same(o);
    for (const auto& [md, c] : o.terms_) add_term(md, c);
    return *this;
  }
  ComplexPolynomial& operator-=(const ComplexPolynomial& o) {
    check_same(o);
    for (const auto& [md, c] : o.terms_) add_term(md, -c);
    return *this;
  }
  ComplexPolynomial& operator*=(cplx s) {
    if (s == cplx{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [md, c] : terms_) c *= s;
    return *this;
  }

  friend ComplexPolynomial operator+(ComplexPolynomial a, const ComplexPolynomial& b) { return a += b; }
  friend ComplexPolynomial operator-(ComplexPolynomial a, const ComplexPolynomial& b) { return a -= b; }
  friend ComplexPolynomial operator*(ComplexPolynomial a, cplx s) { return a *= s; }
  friend ComplexPolynomial operator*(cplx s, ComplexPolynomial a) { return a *= s; }

  friend ComplexPolynomial operator*(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    a.check_same(b);
    ComplexPolynomial out(a.n_vars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma + mb, ca * cb);
    return out;
  }

  ComplexPolynomial pow(unsigned k) const {
    ComplexPolynomial out = constant(n_vars_, 1.0);
    for (unsigned i = 0; i < k; ++i) out = out * (*this);
    return out;
  }

  friend bool operator==(const ComplexPolynomial& a, const ComplexPolynomial& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

 private:
  void check_same(const ComplexPolynomial& o) const {
    if (o.n_vars_ != n_vars_) throw DimensionError("polynomials have different variable counts");
  }

  std::size_t n_vars_;
  TermMap terms_;
};

// Degree-d element of H^0(P^n, O(d)) written in n+1 homogeneous variables.
class HomogeneousSection {
 public:
  HomogeneousSection(ComplexPolynomial poly, unsigned degree)
      : poly_(std::move(poly)), degree_(degree) {
    for (const auto& [md, c] : poly_.terms()) {
      if (md.total() != degree_) {
        throw DegreeError("non-homogeneous term of total " + std::to_string(md.total()) +
                          " in a section of degree " + std::to_string(degree_));
      }
    }
  }

  std::size_t n_plus_1_vars() const { return poly_.n_vars(); }
  unsigned degree() const { return degree_; }
  const ComplexPolynomial& polynomial() const { return poly_; }
  cplx operator()(std::span<const cplx> z) const { return poly_(z); }

 private:
  ComplexPolynomial poly_;
  unsigned degree_;
};

// Affine chart of P^n: coordinate `dehomogenize_index` is set to 1 and the
// remaining homogeneous coordinates become affine variables in the order
// listed by `variable_order`.
struct AffineChart {
  std::size_t dehomogenize_index = 0;
  std::vector<std::size_t> variable_order;

  static AffineChart standard(std::size_t n_plus_1) {
    AffineChart c;
    c.dehomogenize_index = 0;
    for (std::size_t i = 1; i < n_plus_1; ++i) c.variable_order.push_back(i);
    return c;
  }

  void validate(std::size_t n_plus_1) const {
    if (dehomogenize_index >= n_plus_1) throw DimensionError("chart index out of range");
    std::vector<std::size_t> seen(variable_order);
    seen.push_back(dehomogenize_index);
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen.size() != n_plus_1 || seen[i] != i)
        throw DimensionError("chart variable_order is not a permutation of the remaining coordinates");
    }
  }
};

inline cplx eval_poly(const ComplexPolynomial& p, std::span<const cplx> z) { return p(z); }

// (1 + |z|^2)^{-d/2} |P(z)|, the Fubini-Study norm of the degree-d section
// represented by P in the standard chart.
inline double section_norm(const ComplexPolynomial& p, std::span<const cplx> z, unsigned d) {
  if (p.degree() > d) {
    throw DegreeError("section degree " + std::to_string(d) + " below polynomial degree " +
                      std::to_string(p.degree()));
  }
  if (p.is_zero()) return 0.0;
  double nrm2 = 1.0;
  for (cplx zi : z) nrm2 += std::norm(zi);
  return std::abs(p(z)) * std::pow(nrm2, -0.5 * d);
}

// |Q(Z)| / |Z|^d for a homogeneous point Z != 0; independent of the scaling of Z.
inline double fs_norm(const HomogeneousSection& q, std::span<const cplx> z) {
  double nrm2 = 0.0;
  for (cplx zi : z) nrm2 += std::norm(zi);
  if (nrm2 == 0.0) throw DomainError("the zero vector is not a projective point");
  return std::abs(q(z)) * std::pow(nrm2, -0.5 * q.degree());
}

// t_0^d P(z/t_0): variable 0 of the result is the new homogenizing coordinate.
inline HomogeneousSection homogenize(const ComplexPolynomial& p, unsigned d) {
  if (p.degree() > d) {
    throw DegreeError("cannot homogenize a degree " + std::to_string(p.degree()) +
                      " polynomial to degree " + std::to_string(d));
  }
  const std::size_t n = p.n_vars();
  ComplexPolynomial out(n + 1);
  for (const auto& [md, c] : p.terms()) {
    std::vector<unsigned> e(n + 1);
    e[0] = d - md.total();
    for (std::size_t i = 0; i < n; ++i) e[i + 1] = md[i];
    out.add_term(Multidegree(std::move(e)), c);
  }
  return HomogeneousSection(std::move(out), d);
}

inline ComplexPolynomial chart_restrict(const HomogeneousSection& q, const AffineChart& chart) {
  const std::size_t np1 = q.n_plus_1_vars();
  chart.validate(np1);
  if (np1 < 2) throw DimensionError("a chart of P^0 has no affine variables");
  ComplexPolynomial out(np1 - 1);
  for (const auto& [md, c] : q.polynomial().terms()) {
    std::vector<unsigned> e(np1 - 1);
    for (std::size_t k = 0; k < chart.variable_order.size(); ++k) e[k] = md[chart.variable_order[k]];
    out.add_term(Multidegree(std::move(e)), c);
  }
  return out;
}

// x_i -> scale_i * y_i + offset_i.
struct AffineSubstitution {
  cplx scale = 1.0;
  cplx offset = 0.0;
};

inline ComplexPolynomial affine_precompose(const ComplexPolynomial& p,
                                           std::span<const AffineSubstitution> subs) {
  const std::size_t n = p.n_vars();
  if (subs.size() != n) throw DimensionError("one substitution per variable is required");
  const unsigned d = p.degree();
  // expansions[i][k] = (scale_i y_i + offset_i)^k as a polynomial in all n variables.
  std::vector<std::vector<ComplexPolynomial>> expansions(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ComplexPolynomial lin =
        ComplexPolynomial::variable(n, i) * subs[i].scale + ComplexPolynomial::constant(n, subs[i].offset);
    expansions[i].push_back(ComplexPolynomial::constant(n, 1.0));
    for (unsigned k = 1; k <= d; ++k) expansions[i].push_back(expansions[i].back() * lin);
  }
  ComplexPolynomial out(n);
  for (const auto& [md, c] : p.terms()) {
    ComplexPolynomial term = ComplexPolynomial::constant(n, c);
    for (std::size_t i = 0; i < n; ++i)
      if (md[i] > 0) term = term * expansions[i][md[i]];
    out += term;
  }
  return out;
}

// (Q o A)(Z) = Q(A Z) for a square matrix A on homogeneous coordinates.
inline HomogeneousSection linear_precompose(const HomogeneousSection& q, const Eigen::MatrixXcd& a) {
  const std::size_t np1 = q.n_plus_1_vars();
  if (static_cast<std::size_t>(a.rows()) != np1 || static_cast<std::size_t>(a.cols()) != np1)
    throw DimensionError("linear change of coordinates has the wrong size");
  const unsigned d = q.degree();
  std::vector<std::vector<ComplexPolynomial>> powers(np1);
  for (std::size_t i = 0; i < np1; ++i) {
    ComplexPolynomial row(np1);
    for (std::size_t j = 0; j < np1; ++j) {
      std::vector<unsigned> e(np1, 0);
      e[j] = 1;
      row.add_term(Multidegree(std::move(e)), a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    powers[i].push_back(ComplexPolynomial::constant(np1, 1.0));
    for (unsigned k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * row);
  }
  ComplexPolynomial out(np1);
  for (const auto& [md, c] : q.polynomial().terms()) {
    ComplexPolynomial term = ComplexPolynomial::constant(np1, c);
    for (std::size_t i = 0; i < np1; ++i)
      if (md[i] > 0) term = term * powers[i][md[i]];
    out += term;
  }
  // Cancellation can leave terms that are not exactly zero but all totals are d.
  return HomogeneousSection(std::move(out), d);
}

// JSON: {"n_vars": int, "terms": [{"exp": [ints], "re": float, "im": float}]}
inline void to_json(nlohmann::json& j, const ComplexPolynomial& p) {
  j = nlohmann::json::object();
  j["n_vars"] = p.n_vars();
  auto terms = nlohmann::json::array();
  for (const auto& [md, c] : p.terms())
    terms.push_back({{"exp", md.exponents()}, {"re", c.real()}, {"im", c.imag()}});
  j["terms"] = std::move(terms);
}

inline ComplexPolynomial polynomial_from_json(const nlohmann::json& j) {
  const auto n = j.at("n_vars").get<std::size_t>();
  ComplexPolynomial p(n);
  for (const auto& t : j.at("terms")) {
    auto e = t.at("exp").get<std::vector<unsigned>>();
    p.add_term(Multidegree(std::move(e)), cplx(t.at("re").get<double>(), t.at("im").get<double>()));
  }
  return p;
}

}  // namespace projhull
