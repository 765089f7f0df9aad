#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace projhull {

struct NelderMeadOptions {
  std::size_t max_evals = 2000;
  double initial_step = 0.25;
  double f_tol = 1e-12;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evals = 0;
};

// Standard coefficients (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0, const NelderMeadOptions& opts = {}) {
  const std::size_t k = x0.size();
  NelderMeadResult res;
  if (k == 0) {
    res.x = x0;
    res.f = f(x0);
    res.evals = 1;
    return res;
  }
  std::vector<std::vector<double>> simplex(k + 1, x0);
  for (std::size_t i = 0; i < k; ++i) simplex[i + 1][i] += opts.initial_step;
  std::vector<double> fv(k + 1);
  for (std::size_t i = 0; i <= k; ++i) fv[i] = f(simplex[i]);
  std::size_t evals = k + 1;

  std::vector<std::size_t> order(k + 1);
  const auto affine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  while (evals < opts.max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[k - 1];
    if (fv[worst] - fv[best] <= opts.f_tol * (1.0 + std::abs(fv[best]))) break;

    std::vector<double> centroid(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i) centroid[i] += simplex[order[j]][i] / static_cast<double>(k);

    const auto xr = affine(centroid, simplex[worst], -1.0);
    const double fr = f(xr);
    ++evals;
    if (fr < fv[best]) {
      const auto xe = affine(centroid, simplex[worst], -2.0);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const auto xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, simplex[worst], 0.5);
    const double fc = f(xc);
    ++evals;
    if (fc < (outside ? fr : fv[worst])) {
      simplex[worst] = xc;
      fv[worst] = fc;
      continue;
    }
    for (std::size_t j = 1; j <= k; ++j) {
      const std::size_t idx = order[j];
      simplex[idx] = affine(simplex[best], simplex[idx], 0.5);
      fv[idx] = f(simplex[idx]);
      ++evals;
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
  res.f = *it;
  res.evals = evals;
  return res;
}

}  // namespace projhull
