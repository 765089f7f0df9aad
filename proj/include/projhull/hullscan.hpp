#pragma once

// Numerical projective-hull membership from the degree growth of the
// Christoffel kernel of a sampled curve, plus a sup-norm LP oracle at small
// degree.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "projhull/curvelib.hpp"
#include "projhull/errors.hpp"
#include "projhull/json_format.hpp"
#include "projhull/polyring.hpp"
#include "projhull/simplex.hpp"

namespace projhull {

// Monomials of the graded basis at z.
inline Eigen::VectorXcd monomial_vector(const std::vector<Multidegree>& basis, std::span<const cplx> z) {
  unsigned d = 0;
  for (const auto& md : basis) d = std::max(d, md.total());
  std::vector<std::vector<cplx>> powers(z.size(), std::vector<cplx>(d + 1, 1.0));
  for (std::size_t i = 0; i < z.size(); ++i)
    for (unsigned k = 1; k <= d; ++k) powers[i][k] = powers[i][k - 1] * z[i];
  Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t a = 0; a < basis.size(); ++a) {
    cplx m = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) m *= powers[i][basis[a][i]];
    v[static_cast<Eigen::Index>(a)] = m;
  }
  return v;
}

inline constexpr double kDefaultEigenCutoff = 1e-12;

// matrix(a, b) = (1/m) sum_k z_k^a conj(z_k^b), with its eigendecomposition.
class GramOperator {
 public:
  GramOperator(std::size_t n, unsigned degree, std::vector<Multidegree> basis, Eigen::MatrixXcd matrix,
               double eigen_cutoff)
      : n_(n), degree_(degree), basis_(std::move(basis)), matrix_(std::move(matrix)), cutoff_(eigen_cutoff) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_);
    if (es.info() != Eigen::Success) throw SingularGramError("Gram eigendecomposition failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
    const double top = evals_.maxCoeff();
    if (!(top > 0.0)) throw SingularGramError("Gram matrix has no positive eigenvalue");
    threshold_ = cutoff_ * top;
    kept_ = 0;
    for (Eigen::Index i = 0; i < evals_.size(); ++i)
      if (evals_[i] > threshold_) ++kept_;
    if (kept_ == 0) throw SingularGramError("all Gram eigenvalues fall below the cutoff");
  }

  std::size_t n() const { return n_; }
  unsigned degree() const { return degree_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Multidegree>& basis() const { return basis_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Eigen::MatrixXcd& eigenvectors() const { return evecs_; }
  double eigen_cutoff() const { return cutoff_; }
  std::size_t rank() const { return kept_; }

  // Coordinates of v in the eigenbasis.
  Eigen::VectorXcd project(const Eigen::VectorXcd& v) const { return evecs_.adjoint() * v; }
  bool kept(Eigen::Index i) const { return evals_[i] > threshold_; }

 private:
  std::size_t n_;
  unsigned degree_;
  std::vector<Multidegree> basis_;
  Eigen::MatrixXcd matrix_;
  double cutoff_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXcd evecs_;
  double threshold_ = 0.0;
  std::size_t kept_ = 0;
};

inline std::size_t degree_cap(const SampledCurve& curve) { return curve.size() / 4; }

inline GramOperator gram_build(const SampledCurve& curve, unsigned d, double eigen_cutoff = kDefaultEigenCutoff) {
  auto basis = graded_basis(curve.n(), d);
  const std::size_t dim = basis.size();
  if (dim > degree_cap(curve)) throw DegreeCapError(dim, degree_cap(curve));
  const auto m = static_cast<Eigen::Index>(curve.size());
  Eigen::MatrixXcd vt(static_cast<Eigen::Index>(dim), m);
  for (Eigen::Index k = 0; k < m; ++k) vt.col(k) = monomial_vector(basis, curve.point(static_cast<std::size_t>(k)));
  Eigen::MatrixXcd g = (vt * vt.adjoint()) / static_cast<double>(m);
  // Exact Hermitian symmetry; the product is Hermitian up to rounding only.
  g = (0.5 * (g + g.adjoint())).eval();
  return GramOperator(curve.n(), d, std::move(basis), std::move(g), eigen_cutoff);
}

struct ChristoffelValue {
  double K = 0.0;           // v* G^+ v
  double lambda_hat = 0.0;  // K^{1/(2d)}
  double residual = 0.0;    // share of v in the discarded eigenspace
};

inline ChristoffelValue christoffel_lambda(std::span<const cplx> z, const GramOperator& g) {
  if (z.size() != g.n()) throw DimensionError("point and Gram dimensions differ");
  if (g.degree() < 1) throw DegreeError("Christoffel growth needs degree >= 1");
  const Eigen::VectorXcd v = monomial_vector(g.basis(), z);
  const Eigen::VectorXcd y = g.project(v);
  double k = 0.0, dropped = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (g.kept(i)) k += std::norm(y[i]) / g.eigenvalues()[i];
    else dropped += std::norm(y[i]);
  }
  ChristoffelValue out;
  out.K = k;
  out.lambda_hat = std::pow(k, 1.0 / (2.0 * g.degree()));
  out.residual = std::sqrt(dropped / y.squaredNorm());
  return out;
}

// Coefficients (in the Gram basis) of the polynomial attaining K_d(z, z),
// scaled so that P(z) = K^{1/2} and the quadrature norm of P is 1.
inline Eigen::VectorXcd christoffel_optimizer(std::span<const cplx> z, const GramOperator& g) {
  const Eigen::VectorXcd v = monomial_vector(g.basis(), z);
  const Eigen::VectorXcd y = g.project(v);
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(y.size());
  double k = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!g.kept(i)) continue;
    w[i] = y[i] / g.eigenvalues()[i];
    k += std::norm(y[i]) / g.eigenvalues()[i];
  }
  // With P(z) = x^* v and norm^2 = x^* G x, x = G^+ v is optimal; P has coefficients conj(x).
  const Eigen::VectorXcd x = g.eigenvectors() * w;
  return x.conjugate() / std::sqrt(k);
}

// (1/m) sum_k |P(z_k)|^2 for coefficients c in the Gram basis; equals c^T G conj(c).
inline double quadrature_norm2(const Eigen::VectorXcd& c, const GramOperator& g) {
  return std::real(c.conjugate().dot(g.matrix() * c.conjugate()));
}

struct LpOracleResult {
  double phi = 0.0;
  std::vector<Multidegree> basis;
  Eigen::VectorXcd coefficients;  // the maximizing polynomial
  std::size_t iterations = 0;
};

// max Re P(z) subject to Re(e^{-i phi_l} P(z_k)) <= 1 for all samples and
// phases. Rotating P by a grid phase maps the feasible set onto itself, so the
// maximum over theta on the same grid is attained at theta = 0.
inline LpOracleResult sup_extremal_lp(std::span<const cplx> z, const SampledCurve& curve, unsigned d,
                                      std::size_t phases = 64) {
  if (d > 4) throw DegreeError("the LP oracle is limited to degree <= 4");
  if (phases < 32) throw DomainError("the LP oracle needs at least 32 phases");
  if (z.size() != curve.n()) throw DimensionError("point and curve dimensions differ");
  const auto basis = graded_basis(curve.n(), d);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const auto m = static_cast<Eigen::Index>(curve.size());
  const auto L = static_cast<Eigen::Index>(phases);
  Eigen::MatrixXd g(m * L, 2 * dim);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::VectorXcd v = monomial_vector(basis, curve.point(static_cast<std::size_t>(k)));
    for (Eigen::Index l = 0; l < L; ++l) {
      const cplx rot = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(l) / static_cast<double>(L));
      const Eigen::Index row = k * L + l;
      for (Eigen::Index a = 0; a < dim; ++a) {
        const cplx u = rot * v[a];
        g(row, a) = u.real();
        g(row, dim + a) = -u.imag();
      }
    }
  }
  const Eigen::VectorXcd vz = monomial_vector(basis, z);
  Eigen::VectorXd c(2 * dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    c[a] = vz[a].real();
    c[dim + a] = -vz[a].imag();
  }
  const auto sol = maximize_free_leq(g, Eigen::VectorXd::Ones(m * L), c);
  LpOracleResult out;
  out.phi = sol.objective;
  out.basis = basis;
  out.coefficients.resize(dim);
  for (Eigen::Index a = 0; a < dim; ++a) out.coefficients[a] = cplx(sol.p[a], sol.p[dim + a]);
  out.iterations = sol.iterations;
  return out;
}

enum class HullClass { In, Out, Marginal };

inline std::string to_string(HullClass c) {
  switch (c) {
    case HullClass::In: return "IN";
    case HullClass::Out: return "OUT";
    case HullClass::Marginal: return "MARGINAL";
  }
  return "MARGINAL";
}

// Labels combine the growth slope with the near-null residual at the probe
// degree d_max/2. In double precision the Gram spectrum of a real-analytic
// curve saturates, and Lambda_hat_d stops growing for off-hull points; the
// residual (how much of v(z) lives in the numerically discarded eigenspace)
// still separates them. See the README for the calibration runs.
struct ClassifyOptions {
  unsigned d_min = 2;
  double eigen_cutoff = kDefaultEigenCutoff;
  double slope_out = 0.5;
  double slope_in = 0.2;
  double residual_out = 2e-2;
  double residual_in = 5e-3;
};

inline nlohmann::json calibration_json(const ClassifyOptions& o, unsigned d_max) {
  return {{"rule", "OUT if slope > slope_out or residual(d_probe) > residual_out; "
                   "IN if slope < slope_in and residual(d_probe) < residual_in; else MARGINAL"},
          {"d_min", o.d_min},
          {"d_max", d_max},
          {"d_probe", std::max(o.d_min, d_max / 2)},
          {"eigen_cutoff", o.eigen_cutoff},
          {"slope_out", o.slope_out},
          {"slope_in", o.slope_in},
          {"residual_out", o.residual_out},
          {"residual_in", o.residual_in}};
}

struct ExtremalProfile {
  std::vector<cplx> z;
  std::vector<unsigned> degrees;
  std::vector<double> log_K;  // log K_d(z,z)
  std::vector<double> lambda_hat;
  std::vector<double> residual;
  double growth_slope = 0.0;
  unsigned probe_degree = 0;
  double probe_residual = 0.0;
  double lambda_ratio = 1.0;  // Lambda_hat(d_max) / Lambda_hat(d_probe)
  HullClass classification = HullClass::Marginal;
  nlohmann::json certificate = nlohmann::json::object();

  double lambda_at(unsigned d) const {
    for (std::size_t i = 0; i < degrees.size(); ++i)
      if (degrees[i] == d) return lambda_hat[i];
    throw DomainError("degree not in profile");
  }
  double lambda_max() const { return *std::max_element(lambda_hat.begin(), lambda_hat.end()); }
};

// Least-squares slope of ys against xs.
inline double ls_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Gram operators for d_min..d_max built once per curve; classification of many
// points shares them. Immutable after construction.
class HullScanner {
 public:
  HullScanner(const SampledCurve& curve, unsigned d_max, ClassifyOptions opts = {})
      : curve_(&curve), d_max_(d_max), opts_(opts) {
    if (d_max < opts_.d_min || d_max < 2) throw DegreeError("d_max must be at least d_min and 2");
    const std::size_t dim = graded_basis(curve.n(), d_max).size();
    if (dim > degree_cap(curve)) throw DegreeCapError(dim, degree_cap(curve));
    for (unsigned d = opts_.d_min; d <= d_max; ++d) grams_.push_back(gram_build(curve, d, opts_.eigen_cutoff));
  }

  unsigned d_max() const { return d_max_; }
  unsigned probe_degree() const { return std::max(opts_.d_min, d_max_ / 2); }
  const ClassifyOptions& options() const { return opts_; }
  const SampledCurve& curve() const { return *curve_; }
  const GramOperator& gram(unsigned d) const { return grams_.at(d - opts_.d_min); }

  ExtremalProfile classify(std::span<const cplx> z) const {
    ExtremalProfile p;
    p.z.assign(z.begin(), z.end());
    for (const auto& g : grams_) {
      const auto cv = christoffel_lambda(z, g);
      p.degrees.push_back(g.degree());
      p.log_K.push_back(std::log(cv.K));
      p.lambda_hat.push_back(cv.lambda_hat);
      p.residual.push_back(cv.residual);
    }
    // Slope of (log K_d^{1/2})/d against log d over the top half of degrees.
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < p.degrees.size(); ++i) {
      if (p.degrees[i] < std::max(opts_.d_min, d_max_ / 2)) continue;
      xs.push_back(std::log(static_cast<double>(p.degrees[i])));
      ys.push_back(0.5 * p.log_K[i] / p.degrees[i]);
    }
    p.growth_slope = ls_slope(xs, ys);
    p.probe_degree = probe_degree();
    const std::size_t ip = p.probe_degree - opts_.d_min;
    p.probe_residual = p.residual[ip];
    p.lambda_ratio = p.lambda_hat.back() / p.lambda_hat[ip];

    if (p.growth_slope > opts_.slope_out || p.probe_residual > opts_.residual_out) {
      p.classification = HullClass::Out;
      p.certificate = {{"degree_pair", {p.probe_degree, d_max_}},
                       {"lambda_ratio", p.lambda_ratio},
                       {"probe_residual", p.probe_residual},
                       {"slope", p.growth_slope}};
    } else if (p.growth_slope < opts_.slope_in && p.probe_residual < opts_.residual_in) {
      p.classification = HullClass::In;
      p.certificate = {{"C_hat", p.lambda_max()}};
    } else {
      p.classification = HullClass::Marginal;
      p.certificate = {{"probe_residual", p.probe_residual}, {"slope", p.growth_slope}};
    }
    return p;
  }

 private:
  const SampledCurve* curve_;
  unsigned d_max_;
  ClassifyOptions opts_;
  std::vector<GramOperator> grams_;
};

inline ExtremalProfile classify_point(std::span<const cplx> z, const SampledCurve& curve, unsigned d_max,
                                      const ClassifyOptions& opts = {}) {
  return HullScanner(curve, d_max, opts).classify(z);
}

// A complex line through the fixed point, varying one coordinate over a
// rectangle. Endpoints are inclusive; rows run over the imaginary part (outer)
// and columns over the real part (inner).
struct GridSlice {
  std::vector<cplx> fixed;
  std::size_t vary = 1;
  double re_min = -1.0, im_min = -1.0, re_max = 1.0, im_max = 1.0;
  std::size_t res_re = 64, res_im = 64;

  std::size_t size() const { return res_re * res_im; }

  cplx value(std::size_t idx) const {
    const std::size_t i = idx % res_re, j = idx / res_re;
    const auto lerp = [](double a, double b, std::size_t k, std::size_t n) {
      return n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    };
    return {lerp(re_min, re_max, i, res_re), lerp(im_min, im_max, j, res_im)};
  }

  std::vector<cplx> point(std::size_t idx) const {
    std::vector<cplx> z = fixed;
    z.at(vary) = value(idx);
    return z;
  }

  void validate(std::size_t n) const {
    if (fixed.size() != n) throw DimensionError("slice point has the wrong dimension");
    if (vary >= n) throw DimensionError("varying coordinate out of range");
    if (res_re == 0 || res_im == 0 || res_re > 512 || res_im > 512)
      throw DomainError("grid resolution must be between 1x1 and 512x512");
    if (!(re_max >= re_min && im_max >= im_min)) throw DomainError("empty slice rectangle");
  }
};

struct HullScanReport {
  GridSlice slice;
  std::vector<ExtremalProfile> profiles;  // row-major
};

// PROJHULL_THREADS caps the worker count; default is the hardware count.
inline std::size_t default_thread_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PROJHULL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = std::min(n, static_cast<std::size_t>(v));
  }
  return n;
}

inline HullScanReport classify_grid(const GridSlice& slice, const HullScanner& scanner, std::size_t threads = 0) {
  slice.validate(scanner.curve().n());
  if (threads == 0) threads = default_thread_count();
  HullScanReport rep{slice, std::vector<ExtremalProfile>(slice.size())};
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < slice.size(); i = next++) rep.profiles[i] = scanner.classify(slice.point(i));
  };
  threads = std::min(threads, slice.size());
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  return rep;
}

inline HullScanReport classify_grid(const GridSlice& slice, const SampledCurve& curve, unsigned d_max,
                                    const ClassifyOptions& opts = {}, std::size_t threads = 0) {
  return classify_grid(slice, HullScanner(curve, d_max, opts), threads);
}

inline nlohmann::json point_json(std::span<const cplx> z) {
  nlohmann::json out = nlohmann::json::array();
  for (cplx v : z) out.push_back({{"re", v.real()}, {"im", v.imag()}});
  return out;
}

inline nlohmann::json profile_to_json(const ExtremalProfile& p) {
  return {{"z", point_json(p.z)},
          {"degrees", p.degrees},
          {"lambda_hat", p.lambda_hat},
          {"residual", p.residual},
          {"slope", p.growth_slope},
          {"lambda_ratio", p.lambda_ratio},
          {"class", to_string(p.classification)},
          {"certificate", p.certificate}};
}

inline nlohmann::json scan_report_json(const HullScanReport& rep, const HullScanner& scanner) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : rep.profiles) pts.push_back(profile_to_json(p));
  return {{"curve_meta", scanner.curve().meta()},
          {"slice",
           {{"fixed", point_json(rep.slice.fixed)},
            {"vary", rep.slice.vary},
            {"rect", {rep.slice.re_min, rep.slice.im_min, rep.slice.re_max, rep.slice.im_max}},
            {"resolution", {rep.slice.res_re, rep.slice.res_im}}}},
          {"points", std::move(pts)},
          {"calibration", calibration_json(scanner.options(), scanner.d_max())}};
}

inline std::string heatmap_csv(const HullScanReport& rep) {
  std::ostringstream os;
  os << "re,im,lambda_max,slope,class\n";
  for (std::size_t i = 0; i < rep.profiles.size(); ++i) {
    const cplx v = rep.slice.value(i);
    const auto& p = rep.profiles[i];
    os << format_double(v.real(), 12) << ',' << format_double(v.imag(), 12) << ','
       << format_double(p.lambda_max(), 12) << ',' << format_double(p.growth_slope, 12) << ','
       << to_string(p.classification) << '\n';
  }
  return os.str();
}

// Binary PGM; the top image row is the largest imaginary part.
inline std::string heatmap_pgm(const HullScanReport& rep) {
  std::ostringstream os;
  os << "P5\n" << rep.slice.res_re << ' ' << rep.slice.res_im << "\n255\n";
  for (std::size_t j = rep.slice.res_im; j-- > 0;) {
    for (std::size_t i = 0; i < rep.slice.res_re; ++i) {
      const auto c = rep.profiles[j * rep.slice.res_re + i].classification;
      const unsigned char px = c == HullClass::In ? 255 : c == HullClass::Marginal ? 128 : 0;
      os.put(static_cast<char>(px));
    }
  }
  return os.str();
}

}  // namespace projhull
