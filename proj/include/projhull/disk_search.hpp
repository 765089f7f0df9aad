#pragma once

// Lower bound for -V_{K_r}(z0) by searching over pole disks
//   f(zeta) = z0 + (zeta, sum_j c_j/(zeta - a_j) + sum_j c_j/a_j, 0, ...)
// whose boundary stays inside the tube K_r. The reported value is the best
// pole log-sum sum_j log a_j among feasible disks seen.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "projhull/curvelib.hpp"
#include "projhull/diskmaps.hpp"
#include "projhull/errors.hpp"
#include "projhull/nelder_mead.hpp"

namespace projhull {

struct DiskSearchOptions {
  std::size_t max_poles = 4;
  std::size_t restarts = 5;
  std::size_t m_bdy = 256;
  std::size_t max_evals = 400;  // per restart
  double mu_scale = 1e4;        // penalty weight mu = mu_scale / r^2
  std::uint64_t seed = 0;
};

struct DiskCandidate {
  std::vector<double> a, c;
  double value = 0.0;  // sum log a_j
  double boundary_distance = 0.0;
};

struct DiskSearchResult {
  bool feasible = false;
  DiskCandidate best;
  std::vector<double> value_by_count;  // best feasible value with at most k poles (-inf if none)
  double best_penalty = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

namespace detail {

inline double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
inline double logit(double a) { return std::log(a / (1.0 - a)); }

}  // namespace detail

inline DiskSearchResult disk_lower_bound(std::span<const cplx> z0, const SampledCurve& curve, double r,
                                         const DiskSearchOptions& opts = {},
                                         const PoleSeriesParams& init = PoleSeriesParams{}) {
  if (!(r > 0.0)) throw DomainError("tube radius must be positive");
  if (z0.size() != curve.n()) throw DimensionError("z0 and curve dimensions differ");
  if (opts.m_bdy < 256) throw DomainError("boundary sampling needs at least 256 points");
  const std::size_t max_poles = curve.n() >= 2 ? opts.max_poles : 0;
  const double mu = opts.mu_scale / (r * r);

  DiskSearchResult res;
  res.best.value = kNegInf;
  res.value_by_count.assign(max_poles + 1, kNegInf);

  const auto evaluate = [&](std::size_t count, const std::vector<double>& x) {
    std::vector<double> a(count), c(count);
    for (std::size_t j = 0; j < count; ++j) {
      a[j] = detail::logistic(x[j]);
      c[j] = std::exp(x[count + j]);
    }
    double value = 0.0;
    for (double aj : a) value += std::log(aj);
    ++res.evaluations;
    double bd;
    if (std::any_of(a.begin(), a.end(), [](double aj) { return !(aj > 0.0 && aj < 1.0); }) ||
        std::any_of(c.begin(), c.end(), [](double cj) { return !std::isfinite(cj) || cj <= 0.0; })) {
      bd = std::numeric_limits<double>::infinity();
    } else {
      bd = max_boundary_distance(pole_family_map(z0, a, c), curve, opts.m_bdy);
    }
    const double violation = std::max(0.0, bd - r);
    res.best_penalty = std::min(res.best_penalty, violation);
    if (bd < r && value > res.value_by_count[count]) {
      res.value_by_count[count] = value;
      if (value > res.best.value) res.best = {a, c, value, bd};
    }
    if (!std::isfinite(bd)) return std::numeric_limits<double>::max();
    return -value + mu * violation * violation;
  };

  for (std::size_t count = 0; count <= max_poles; ++count) {
    std::vector<double> start(2 * count);
    for (std::size_t j = 0; j < count; ++j) {
      start[j] = detail::logit(init.a(j + 1));
      start[count + j] = init.log_c(j + 1);
    }
    if (count == 0) {
      evaluate(0, start);
      continue;
    }
    for (std::size_t rs = 0; rs < opts.restarts; ++rs) {
      std::vector<double> x0 = start;
      if (rs > 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                          static_cast<std::uint32_t>(count), static_cast<std::uint32_t>(rs)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> nd(0.0, 1.0);
        for (double& v : x0) v += nd(rng);
      }
      NelderMeadOptions nm;
      nm.max_evals = opts.max_evals;
      nm.initial_step = 0.5;
      nelder_mead([&](const std::vector<double>& x) { return evaluate(count, x); }, x0, nm);
    }
  }
  for (std::size_t k = 1; k <= max_poles; ++k)
    res.value_by_count[k] = std::max(res.value_by_count[k], res.value_by_count[k - 1]);
  res.feasible = res.best.value != kNegInf;
  if (!res.feasible) throw InfeasibleError("no disk with boundary inside the tube was found", res.best_penalty);
  return res;
}

inline nlohmann::json to_json(const DiskSearchResult& r) {
  nlohmann::json by_count = nlohmann::json::array();
  for (double v : r.value_by_count) by_count.push_back(v == kNegInf ? nlohmann::json(nullptr) : nlohmann::json(v));
  return {{"feasible", r.feasible},
          {"value", r.best.value},
          {"poles", r.best.a},
          {"weights", r.best.c},
          {"boundary_distance", r.best.boundary_distance},
          {"value_by_pole_count", std::move(by_count)},
          {"evaluations", r.evaluations}};
}

}  // namespace projhull
