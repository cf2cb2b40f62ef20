#include "plank/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "plank/errors.hpp"

namespace plank {

namespace {

double min_margin(const Eigen::MatrixXd& rows, const Eigen::VectorXd& x) {
  return (rows * x).cwiseAbs().minCoeff();
}

}  // namespace

OracleResult grid_search_witness(const UnitVectorSet& vs, int resolution) {
  const int d = vs.dim();
  const Eigen::MatrixXd& rows = vs.rows();
  OracleResult best;

  if (d == 1) {
    best.value = rows.cwiseAbs().minCoeff();  // every |v_k| is 1
    best.argument = Eigen::VectorXd::Ones(1);
    best.method = OracleMethod::exhaustive;
    best.resolution = 0.0;
    return best;
  }
  if (d == 2) {
    if (resolution < 1000)
      throw std::invalid_argument("circle grid needs at least 1000 points");
    best.value = -1.0;
    for (int i = 0; i < resolution; ++i) {
      // Antipodes share margins, so half a turn suffices.
      const double theta = std::numbers::pi * i / resolution;
      Eigen::Vector2d x(std::cos(theta), std::sin(theta));
      const double v = min_margin(rows, x);
      if (v > best.value) {
        best.value = v;
        best.argument = x;
      }
    }
    best.method = OracleMethod::grid;
    best.resolution = resolution;
    return best;
  }
  if (d == 3) {
    if (resolution < 5)
      throw std::invalid_argument("sphere grid needs subdivision level >= 5");
    best.value = -1.0;
    for (const Eigen::Vector3d& x : icosphere_vertices(resolution)) {
      const double v = min_margin(rows, x);
      if (v > best.value) {
        best.value = v;
        best.argument = x;
      }
    }
    best.method = OracleMethod::grid;
    best.resolution = resolution;
    return best;
  }
  throw UnsupportedInput("grid oracle handles d <= 3; maximize the product directly instead");
}

OracleResult analytic_2d(const std::vector<double>& angles) {
  if (angles.empty()) throw std::invalid_argument("need at least one line angle");
  const double pi = std::numbers::pi;
  const auto mod_pi = [pi](double t) {
    double r = std::fmod(t, pi);
    return r < 0.0 ? r + pi : r;
  };

  const auto objective = [&](double theta) {
    double m = std::numeric_limits<double>::infinity();
    for (double a : angles) m = std::min(m, std::abs(std::cos(theta - a)));
    return m;
  };

  std::vector<double> candidates;
  candidates.reserve(angles.size() * (angles.size() + 1));
  for (std::size_t i = 0; i < angles.size(); ++i) {
    for (std::size_t j = i; j < angles.size(); ++j) {
      const double mid = 0.5 * (angles[i] + angles[j]);
      candidates.push_back(mod_pi(mid));
      candidates.push_back(mod_pi(mid + 0.5 * pi));
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                   candidates.end());

  OracleResult best;
  best.value = -1.0;
  double best_theta = 0.0;
  for (double theta : candidates) {
    const double v = objective(theta);
    if (v > best.value) {
      best.value = v;
      best_theta = theta;
    }
  }
  best.argument = Eigen::Vector2d(std::cos(best_theta), std::sin(best_theta));
  best.method = OracleMethod::analytic2d;
  best.resolution = 0.0;
  return best;
}

double bang_value(const GramMatrix& H, const SignPattern& eps) {
  const int n = H.size();
  if (eps.size() != n) throw std::invalid_argument("sign pattern length must match n");
  Eigen::VectorXd e(n);
  for (int i = 0; i < n; ++i) e(i) = eps[i];
  const Eigen::VectorXd he = H.mat() * e;
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) m = std::min(m, e(j) * he(j));
  return m;
}

SignPattern bang_sign_search(const GramMatrix& H) {
  const int n = H.size();
  if (n > 20)
    throw UnsupportedInput("exhaustive sign search supports n <= 20; got n = " +
                                std::to_string(n));
  // e and -e give identical values: pin the first sign to +.
  const std::uint32_t combos = (n > 1) ? (1u << (n - 1)) : 1u;
  double best_value = -std::numeric_limits<double>::infinity();
  std::vector<int> best_signs(n, 1);
  for (std::uint32_t mask = 0; mask < combos; ++mask) {
    std::vector<int> signs(n, 1);
    for (int k = 1; k < n; ++k) signs[k] = ((mask >> (k - 1)) & 1u) ? -1 : 1;
    const double v = bang_value(H, SignPattern(signs));
    if (v > best_value) {
      best_value = v;
      best_signs = std::move(signs);
    }
  }
  return SignPattern(best_signs);
}

namespace {

// Does the closed orthant q touch Ker(H) away from the origin?  Decided by
// Frank-Wolfe minimization of the convex form y^T (diag(q) H diag(q)) y over
// the probability simplex: the minimum is 0 exactly when it does.  The FW
// gap certifies optimality, so a clearly positive minimum is trustworthy.
// Independent of the solver's kernel test (which works from an eigenbasis).
bool orthant_touches_kernel(const Eigen::MatrixXd& H, const SignPattern& q) {
  const int n = static_cast<int>(H.rows());
  Eigen::VectorXd qv(n);
  for (int i = 0; i < n; ++i) qv(i) = q[i];
  const Eigen::MatrixXd A = qv.asDiagonal() * H * qv.asDiagonal();

  Eigen::VectorXd y = Eigen::VectorXd::Constant(n, 1.0 / n);
  double fy = y.dot(A * y);
  for (int it = 0; it < 20000 && fy > 1e-12; ++it) {
    const Eigen::VectorXd g = 2.0 * (A * y);
    int vertex = 0;
    for (int i = 1; i < n; ++i)
      if (g(i) < g(vertex)) vertex = i;
    const double gap = g.dot(y) - g(vertex);  // >= f(y) - min f
    if (gap <= 1e-12) break;
    const Eigen::VectorXd d = Eigen::VectorXd::Unit(n, vertex) - y;
    const double a = d.dot(A * d);
    const double b = 2.0 * y.dot(A * d);
    double gamma = 1.0;
    if (a > 0.0) gamma = std::clamp(-b / (2.0 * a), 0.0, 1.0);
    else if (b >= 0.0) gamma = 0.0;
    if (gamma == 0.0) break;
    y += gamma * d;
    fy = y.dot(A * y);
  }
  return fy <= 1e-9;
}

// max sum log|w_i| over {w in orthant q, w^T H w = n} via compass search on
// the log-magnitude parameterization w = sqrt(n) (q o e^t) / ||q o e^t||_H.
// Only called when the max is attained (orthant clear of the kernel), where
// the unique interior stationary point is that max.  Shares nothing with the
// Newton/ascent machinery it cross-checks.  Directions include coordinate
// steps and all pairwise differences: the score ignores the all-ones
// component of t, and the differences span its complement.
double compass_quadrant_max(const Eigen::MatrixXd& H, const SignPattern& q) {
  const int n = static_cast<int>(H.rows());
  Eigen::VectorXd qv(n);
  for (int i = 0; i < n; ++i) qv(i) = q[i];

  const auto score = [&](const Eigen::VectorXd& t) -> double {
    const Eigen::VectorXd x = qv.array() * t.array().exp();
    const double quad = x.dot(H * x);
    if (quad <= 0.0) return std::numeric_limits<double>::infinity();
    return t.sum() + 0.5 * n * (std::log(static_cast<double>(n)) - std::log(quad));
  };

  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Eigen::VectorXd::Unit(n, i));
    dirs.push_back(-Eigen::VectorXd::Unit(n, i));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
      d(i) = 1.0;
      d(j) = -1.0;
      dirs.push_back(d);
      dirs.push_back(-d);
    }

  Eigen::VectorXd t = Eigen::VectorXd::Zero(n);
  double val = score(t);
  for (double h = 1.0; h > 1e-10;) {
    bool improved = false;
    for (const auto& d : dirs) {
      const Eigen::VectorXd cand = t + h * d;
      const double cv = score(cand);
      if (std::isfinite(cv) && cv > val + 1e-14) {
        t = cand;
        val = cv;
        improved = true;
        break;
      }
    }
    if (!improved) h *= 0.5;
  }
  return val;
}

}  // namespace

EnumerationCheck cross_check_enumeration(const GramMatrix& H, const SolveOptions& opts) {
  const int n = H.size();
  if (n > 12)
    throw UnsupportedInput("cross-check supports n <= 12; got n = " + std::to_string(n));

  std::vector<InverseEigenSolution> sols = enumerate_all(H, opts);
  EnumerationCheck report;
  report.quadrants = 1 << n;

  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> signs(n);
    for (int i = 0; i < n; ++i) signs[i] = ((mask >> i) & 1u) ? -1 : 1;
    const SignPattern q(signs);

    const InverseEigenSolution* found = nullptr;
    for (const auto& s : sols) {
      if (s.quadrant == q) {
        found = &s;
        break;
      }
    }

    const bool attainable = !orthant_touches_kernel(H.mat(), q);
    std::ostringstream detail;
    if (found && attainable) {
      const double solver_value = found->w.array().abs().log().sum();
      const double search_value = compass_quadrant_max(H.mat(), q);
      if (std::abs(solver_value - search_value) <= 1e-6) {
        ++report.agreements;
      } else {
        detail << "quadrant " << q.str() << ": log-product " << solver_value
               << " from the solver vs " << search_value << " from compass search";
        report.mismatches.push_back(detail.str());
      }
    } else if (!found && !attainable) {
      ++report.agreements;
    } else {
      detail << "quadrant " << q.str() << ": solver "
             << (found ? "found a solution" : "found none") << ", independent search says the max is "
             << (attainable ? "attained" : "not attained");
      report.mismatches.push_back(detail.str());
    }
  }
  return report;
}

}  // namespace plank
