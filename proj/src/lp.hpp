#pragma once

// Minimal dense two-phase simplex, used only for the orthant/kernel
// feasibility certificate.  Problem sizes here are at most ~20 rows, so a
// plain tableau with Bland's rule is plenty.

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace plank::detail {

struct SimplexResult {
  bool feasible = false;
  bool bounded = true;
  double objective = 0.0;
  Eigen::VectorXd x;
};

// min c^T x  s.t.  E x = b  (b >= 0),  x >= 0.
inline SimplexResult simplex_solve(const Eigen::MatrixXd& E, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c) {
  constexpr double eps = 1e-9;
  const int m = static_cast<int>(E.rows());
  const int nv = static_cast<int>(E.cols());
  const int total = nv + m;  // structural + artificial

  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m, total + 1);
  tab.block(0, 0, m, nv) = E;
  for (int i = 0; i < m; ++i) {
    tab(i, nv + i) = 1.0;
    tab(i, total) = b(i);
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = nv + i;

  Eigen::VectorXd zrow(total);
  double zval = 0.0;
  auto rebuild_zrow = [&](const Eigen::VectorXd& cost) {
    zrow.setZero();
    zval = 0.0;
    for (int j = 0; j < total; ++j) zrow(j) = j < cost.size() ? cost(j) : 0.0;
    for (int i = 0; i < m; ++i) {
      const double cb = basis[i] < cost.size() ? cost(basis[i]) : 0.0;
      if (cb == 0.0) continue;
      zrow -= cb * tab.row(i).head(total);
      zval -= cb * tab(i, total);
    }
  };

  auto pivot = [&](int row, int col) {
    tab.row(row) /= tab(row, col);
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = tab(i, col);
      if (f != 0.0) tab.row(i) -= f * tab.row(row);
    }
    const double fz = zrow(col);
    if (fz != 0.0) {
      zrow -= fz * tab.row(row).head(total);
      zval -= fz * tab(row, total);
    }
    basis[row] = col;
  };

  // allow_artificial: whether artificial columns may (re-)enter the basis
  auto run = [&](bool allow_artificial) -> bool {  // returns bounded
    for (int guard = 0; guard < 20000; ++guard) {
      int enter = -1;
      const int limit = allow_artificial ? total : nv;
      for (int j = 0; j < limit; ++j)
        if (zrow(j) < -eps) {
          enter = j;
          break;  // Bland: lowest index
        }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (tab(i, enter) > eps) {
          const double ratio = tab(i, total) / tab(i, enter);
          if (ratio < best_ratio - eps ||
              (ratio < best_ratio + eps && (leave < 0 || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
    return true;  // iteration guard hit; treat as converged for these sizes
  };

  // Phase 1: minimize the artificial sum.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
  for (int j = nv; j < total; ++j) phase1(j) = 1.0;
  rebuild_zrow(phase1);
  run(true);
  SimplexResult res;
  if (-zval > 1e-7) return res;  // artificials stuck above zero: infeasible
  res.feasible = true;

  // Drive leftover artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (basis[i] < nv) continue;
    for (int j = 0; j < nv; ++j)
      if (std::abs(tab(i, j)) > eps) {
        pivot(i, j);
        break;
      }
  }

  // Phase 2.
  rebuild_zrow(c);
  res.bounded = run(false);
  res.x = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < m; ++i)
    if (basis[i] < nv) res.x(basis[i]) = tab(i, total);
  res.objective = c.dot(res.x);
  return res;
}

// max t such that A c >= t * 1 and (1^T A) c = 1.  The value is >= 0 exactly
// when {c : A c >= 0} contains a nonzero point.  Returns -infinity when the
// normalization is infeasible (A^T 1 = 0), which forces the cone trivial.
inline double cone_max_min(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  const int m = static_cast<int>(A.cols());
  const Eigen::RowVectorXd a = Eigen::RowVectorXd::Ones(n) * A;
  if (a.cwiseAbs().maxCoeff() < 1e-12) return -std::numeric_limits<double>::infinity();

  // Variables: [c+ (m), c- (m), t+, t-, slack (n)].
  const int nv = 2 * m + 2 + n;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n + 1, nv);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  E.block(0, 0, n, m) = A;
  E.block(0, m, n, m) = -A;
  E.col(2 * m).head(n).setConstant(-1.0);      // -t+
  E.col(2 * m + 1).head(n).setConstant(1.0);   // +t-
  E.block(0, 2 * m + 2, n, n) = -Eigen::MatrixXd::Identity(n, n);
  E.row(n).head(m) = a;
  E.row(n).segment(m, m) = -a;
  b(n) = 1.0;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
  c(2 * m) = -1.0;  // min(t- - t+) == max t
  c(2 * m + 1) = 1.0;

  const SimplexResult r = simplex_solve(E, b, c);
  if (!r.feasible) return -std::numeric_limits<double>::infinity();
  if (!r.bounded) return std::numeric_limits<double>::infinity();
  return -r.objective;
}

}  // namespace plank::detail
