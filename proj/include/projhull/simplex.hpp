#pragma once

// Dense two-phase simplex for standard-form problems
//   minimize c^T x  subject to  A x = b,  x >= 0.
// Sized for the sup-norm oracle: tens of rows, up to ~1e5 columns.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "projhull/errors.hpp"

namespace projhull {

struct LpResult {
  double objective = 0.0;
  Eigen::VectorXd x;     // primal solution of the standard-form problem
  Eigen::VectorXd dual;  // multipliers pi with A^T pi <= c at optimum
  std::size_t iterations = 0;
};

class InfeasibleLpError : public Error {
 public:
  using Error::Error;
};

namespace detail {

class Tableau {
 public:
  // Columns: [0, n) structural, [n, n + rows) artificial, last = rhs.
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b)
      : rows_(a.rows()), n_(a.cols()), t_(a.rows(), a.cols() + a.rows() + 1), sign_(a.rows()) {
    t_.setZero();
    for (Eigen::Index i = 0; i < rows_; ++i) {
      sign_[i] = b[i] < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign_[i] * a.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, rhs()) = sign_[i] * b[i];
    }
    basis_.resize(static_cast<std::size_t>(rows_));
    for (Eigen::Index i = 0; i < rows_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
  }

  Eigen::Index rows() const { return rows_; }
  Eigen::Index structural() const { return n_; }
  Eigen::Index rhs() const { return n_ + rows_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }
  double sign(Eigen::Index i) const { return sign_[i]; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Minimizes cost^T x over the current basis. Columns with allowed[j] false
  // never enter. Returns the iteration count.
  std::size_t optimize(const Eigen::VectorXd& cost, const std::vector<bool>& allowed, double tol,
                       std::size_t max_iter) {
    std::size_t it = 0;
    std::size_t stall = 0;
    double last_obj = std::numeric_limits<double>::infinity();
    for (; it < max_iter; ++it) {
      Eigen::VectorXd cb(rows_);
      for (Eigen::Index i = 0; i < rows_; ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
      // Reduced costs r_j = c_j - cb^T T_j.
      const Eigen::RowVectorXd z = cb.transpose() * t_.leftCols(n_ + rows_);
      const double obj = cb.dot(t_.col(rhs()));
      stall = obj < last_obj - tol ? 0 : stall + 1;
      last_obj = std::min(last_obj, obj);
      const bool bland = stall > 50;  // degenerate cycling guard
      Eigen::Index enter = -1;
      double best = -tol;
      for (Eigen::Index j = 0; j < n_ + rows_; ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        const double r = cost[j] - z[j];
        if (r < best) {
          enter = j;
          best = r;
          if (bland) break;
        }
      }
      if (enter < 0) return it;
      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        const double a = t_(i, enter);
        if (a <= tol) continue;
        const double q = t_(i, rhs()) / a;
        if (q < ratio - 1e-15 ||
            (q <= ratio + 1e-15 && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          ratio = q;
          leave = i;
        }
      }
      if (leave < 0) throw UnboundedLpError("linear program is unbounded below");
      pivot(leave, enter);
    }
    throw Error("simplex iteration limit reached");
  }

 private:
  Eigen::Index rows_;
  Eigen::Index n_;
  Eigen::MatrixXd t_;
  Eigen::VectorXd sign_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

inline LpResult simplex_minimize(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                                 double tol = 1e-10, std::size_t max_iter = 100000) {
  if (b.size() != a.rows() || c.size() != a.cols()) throw DimensionError("LP data sizes disagree");
  detail::Tableau tab(a, b);
  const Eigen::Index n = a.cols(), m = a.rows();

  // Phase 1: drive the artificial variables to zero.
  Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + m);
  c1.tail(m).setOnes();
  std::vector<bool> allowed(static_cast<std::size_t>(n + m), true);
  LpResult res;
  res.iterations = tab.optimize(c1, allowed, tol, max_iter);
  double infeas = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (tab.basis()[static_cast<std::size_t>(i)] >= n) infeas += tab(i, tab.rhs());
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  if (infeas > 1e-9 * scale) throw InfeasibleLpError("linear program has no feasible point");

  // Pivot zero-level artificials out where a structural column allows it;
  // rows where none does are redundant and keep their artificial at zero.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] < n) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2 with artificials barred from entering.
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(n + m);
  c2.head(n) = c;
  for (Eigen::Index j = n; j < n + m; ++j) allowed[static_cast<std::size_t>(j)] = false;
  res.iterations += tab.optimize(c2, allowed, tol, max_iter);

  res.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = tab.basis()[static_cast<std::size_t>(i)];
    if (j < n) res.x[j] = tab(i, tab.rhs());
  }
  res.objective = c.dot(res.x);
  // pi^T = cb^T B^{-1}; column n+i of the tableau holds B^{-1} e_i times the row sign.
  res.dual = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) acc += c2[tab.basis()[static_cast<std::size_t>(r)]] * tab(r, n + i);
    res.dual[i] = acc * tab.sign(i);
  }
  return res;
}

// maximize c^T p over free p subject to G p <= h with h >= 0, solved through
// the dual  minimize h^T y, G^T y = c, y >= 0.
struct InequalityLpResult {
  double objective = 0.0;
  Eigen::VectorXd p;
  std::size_t iterations = 0;
};

inline InequalityLpResult maximize_free_leq(const Eigen::MatrixXd& g, const Eigen::VectorXd& h,
                                            const Eigen::VectorXd& c, double tol = 1e-10) {
  if (h.minCoeff() < 0.0) throw DomainError("right-hand side must be nonnegative");
  LpResult dual;
  try {
    dual = simplex_minimize(g.transpose(), c, h, tol);
  } catch (const InfeasibleLpError&) {
    throw UnboundedLpError("sup-norm LP is unbounded (too few samples for the degree)");
  }
  return {dual.objective, dual.dual, dual.iterations};
}

}  // namespace projhull
