#include "plank/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "plank/bounds.hpp"
#include "plank/inverse_eigen.hpp"

namespace plank {

namespace {

constexpr double kWall = 1e-14;  // inner products may not cross zero

double log_margin_product(const Eigen::MatrixXd& rows, const Eigen::VectorXd& v) {
  const Eigen::VectorXd ip = rows * v;
  if (ip.cwiseAbs().minCoeff() <= kWall) return -std::numeric_limits<double>::infinity();
  return ip.array().abs().log().sum();
}

Eigen::VectorXd retract(const Eigen::VectorXd& v, double radius) {
  return (radius / v.norm()) * v;
}

// Projected gradient ascent for sum_k log|<v_k, v>| on the sphere ||v|| = sqrt(n).
Eigen::VectorXd ascend_margins(const Eigen::MatrixXd& rows, Eigen::VectorXd v,
                               int max_iterations) {
  const double radius = std::sqrt(static_cast<double>(rows.rows()));
  double value = log_margin_product(rows, v);
  if (!std::isfinite(value)) return v;
  double eta = 0.1;
  for (int it = 0; it < max_iterations; ++it) {
    const Eigen::VectorXd ip = rows * v;
    const Eigen::VectorXd g = rows.transpose() * ip.cwiseInverse();
    const Eigen::VectorXd gt = g - (g.dot(v) / v.squaredNorm()) * v;
    if (gt.cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, g.cwiseAbs().maxCoeff())) break;
    bool accepted = false;
    double t = eta;
    for (int bt = 0; bt < 60; ++bt) {
      const Eigen::VectorXd cand = retract(v + t * gt, radius);
      const double cand_value = log_margin_product(rows, cand);
      if (std::isfinite(cand_value) && cand_value > value) {
        v = cand;
        value = cand_value;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    eta = std::clamp(t * 1.6, 1e-10, 1e3);
  }
  return v;
}

struct PolishOutcome {
  Eigen::VectorXd v;
  double stationarity = std::numeric_limits<double>::infinity();
  bool ok = false;
};

// Newton iteration on Phi(v) = v - sum_k v_k / <v_k, v>.  Fixed points are the
// stationary points of the product and automatically satisfy ||v||^2 = n.
PolishOutcome polish_stationary(const Eigen::MatrixXd& rows, Eigen::VectorXd v,
                                int max_iterations) {
  const auto phi_norm = [&](const Eigen::VectorXd& x) -> double {
    const Eigen::VectorXd ip = rows * x;
    if (ip.cwiseAbs().minCoeff() <= kWall) return std::numeric_limits<double>::infinity();
    return (x - rows.transpose() * ip.cwiseInverse()).norm();
  };

  double fv = phi_norm(v);
  if (!std::isfinite(fv)) return {std::move(v), fv, false};
  for (int it = 0; it < max_iterations && fv > 1e-13; ++it) {
    const Eigen::VectorXd ip = rows * v;
    const Eigen::VectorXd phi = v - rows.transpose() * ip.cwiseInverse();
    Eigen::MatrixXd J = Eigen::MatrixXd::Identity(v.size(), v.size());
    J.noalias() += rows.transpose() * ip.cwiseAbs2().cwiseInverse().asDiagonal() * rows;
    const Eigen::VectorXd dv = J.llt().solve(phi);
    double t = 1.0;
    bool moved = false;
    while (t >= 1e-12) {
      const Eigen::VectorXd cand = v - t * dv;
      const double fc = phi_norm(cand);
      if (std::isfinite(fc) && fc < fv * (1.0 - 1e-4 * t)) {
        v = cand;
        fv = fc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return {std::move(v), fv, fv < std::numeric_limits<double>::infinity()};
}

void canonicalize_sign(Eigen::VectorXd& v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      return;
    }
  }
}

WitnessResult result_from_vector(const UnitVectorSet& vs, Eigen::VectorXd v,
                                 double stationarity, const WitnessOptions& opts) {
  WitnessResult r;
  canonicalize_sign(v);
  const Eigen::VectorXd ip = vs.rows() * v;
  r.v = std::move(v);
  r.margins = ip.cwiseAbs();
  r.w = ip.cwiseInverse();
  r.min_margin = r.margins.minCoeff();
  r.bound = witness_margin_bound(vs.count());
  r.certified = r.min_margin >= r.bound - opts.margin_tol;
  r.stationarity = stationarity;
  r.converged = stationarity <= opts.stationarity_tol;
  return r;
}

}  // namespace

Eigen::VectorXd WitnessResult::unit_margins() const {
  return margins / std::sqrt(static_cast<double>(margins.size()));
}

double WitnessResult::unit_min_margin() const {
  return min_margin / std::sqrt(static_cast<double>(margins.size()));
}

WitnessResult maximize_product(const UnitVectorSet& vs, const WitnessOptions& opts) {
  const int n = vs.count();
  const int d = vs.dim();
  if (n < 1) throw std::invalid_argument("maximize_product needs at least one vector");
  const Eigen::MatrixXd& rows = vs.rows();
  const double radius = std::sqrt(static_cast<double>(n));

  struct Candidate {
    double value;
    Eigen::VectorXd v;
    double stationarity;
  };
  std::optional<Candidate> best;

  auto consider = [&](const Eigen::VectorXd& start) {
    Eigen::VectorXd va = ascend_margins(rows, start, opts.max_ascent_iterations);
    PolishOutcome p = polish_stationary(rows, std::move(va), opts.max_newton_iterations);
    if (!p.ok || p.stationarity > opts.stationarity_tol) return;
    const double value = log_margin_product(rows, p.v);
    if (!std::isfinite(value)) return;
    if (!best || value > best->value + 1e-12) {
      best = Candidate{value, std::move(p.v), p.stationarity};
    }
  };

  // Best coordinate direction (when no inner product vanishes there).
  {
    int arg = -1;
    double top = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < d; ++j) {
      const double val = log_margin_product(rows, radius * Eigen::VectorXd::Unit(d, j));
      if (std::isfinite(val) && val > top) {
        top = val;
        arg = j;
      }
    }
    if (arg >= 0) consider(radius * Eigen::VectorXd::Unit(d, arg));
  }

  // Signed combinations sum_k s_k v_k: one start per +/- pair.  The maximizer
  // has this form with s = sign(w), so these starts blanket the sign basins.
  if (n <= 10) {
    const std::uint32_t combos = 1u << (n - 1);
    for (std::uint32_t mask = 0; mask < combos; ++mask) {
      Eigen::VectorXd s(n);
      s(0) = 1.0;
      for (int k = 1; k < n; ++k) s(k) = ((mask >> (k - 1)) & 1u) ? -1.0 : 1.0;
      const Eigen::VectorXd combo = rows.transpose() * s;
      if (combo.norm() < 1e-9) continue;
      consider(retract(combo, radius));
    }
  }

  // Gaussian starts.
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < opts.starts_per_n * n; ++r) {
    Eigen::VectorXd z(d);
    for (int tries = 0; tries < 50; ++tries) {
      for (int i = 0; i < d; ++i) z(i) = gauss(rng);
      if (z.norm() > 1e-9 &&
          std::isfinite(log_margin_product(rows, retract(z, radius)))) break;
    }
    if (z.norm() > 1e-9) consider(retract(z, radius));
  }

  if (!best) {
    // Every start failed; report the best-effort point without certification.
    WitnessResult r = result_from_vector(
        vs, retract(Eigen::VectorXd::Ones(d), radius),
        std::numeric_limits<double>::infinity(), opts);
    r.certified = false;
    r.converged = false;
    return r;
  }
  return result_from_vector(vs, std::move(best->v), best->stationarity, opts);
}

WitnessResult witness_from_w(const UnitVectorSet& vs, const Eigen::VectorXd& w,
                             const WitnessOptions& opts) {
  const int n = vs.count();
  if (w.size() != n) throw std::invalid_argument("coefficient vector length must match n");
  const GramMatrix H = gram(vs);
  const Eigen::VectorXd res = inverse_eigen_residual(H, w);
  const double resnorm = res.cwiseAbs().maxCoeff();
  if (resnorm > 1e-8) {
    std::ostringstream msg;
    msg << "w is not an inverse eigenvector of the Gram matrix (residual " << resnorm << ")";
    throw std::invalid_argument(msg.str());
  }
  Eigen::VectorXd v = vs.rows().transpose() * w;
  const Eigen::VectorXd ip = vs.rows() * v;
  const double stationarity =
      ip.cwiseAbs().minCoeff() > kWall
          ? (v - vs.rows().transpose() * ip.cwiseInverse()).norm()
          : std::numeric_limits<double>::infinity();
  WitnessResult r = result_from_vector(vs, std::move(v), stationarity, opts);
  r.path = WitnessPath::dual;
  return r;
}

ConjugatedMatrix ConjugatedMatrix::from_entries(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1)
    throw std::invalid_argument("conjugated matrix must be square and nonempty");
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10)
    throw std::invalid_argument("conjugated matrix must be symmetric; deviation " +
                                std::to_string(asym));
  entries = 0.5 * (entries + entries.transpose()).eval();
  const double row_err = ((entries.rowwise().sum()).array() - 1.0).abs().maxCoeff();
  if (row_err > 1e-7)
    throw std::invalid_argument("conjugated matrix row sums must be 1; error " +
                                std::to_string(row_err));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries, Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -1e-10)
    throw std::invalid_argument("conjugated matrix must be positive semidefinite; "
                                "min eigenvalue " + std::to_string(min_ev));
  return ConjugatedMatrix(std::move(entries), min_ev);
}

double ConjugatedMatrix::row_sum_error() const {
  return ((mat_.rowwise().sum()).array() - 1.0).abs().maxCoeff();
}

ConjugatedMatrix conjugated_matrix(const GramMatrix& H, const Eigen::VectorXd& w) {
  const int n = H.size();
  if (w.size() != n) throw std::invalid_argument("coefficient vector length must match n");
  if (w.cwiseAbs().minCoeff() < 1e-300)
    throw std::invalid_argument("coefficient vector entries must be nonzero");
  const double resnorm = inverse_eigen_residual(H, w).cwiseAbs().maxCoeff();
  if (resnorm > 1e-8) {
    std::ostringstream msg;
    msg << "w is not an inverse eigenvector (residual " << resnorm
        << "); row sums of diag(w) H diag(w) would drift from 1";
    throw std::invalid_argument(msg.str());
  }
  Eigen::MatrixXd m = w.asDiagonal() * H.mat() * w.asDiagonal();
  m = 0.5 * (m + m.transpose()).eval();
  m.diagonal() = w.cwiseAbs2();  // h_kk = 1 exactly, so m_kk = w_k^2
  return ConjugatedMatrix::from_entries(std::move(m));
}

MatrixBoundReport check_matrix_bounds(const ConjugatedMatrix& M, double tol) {
  const int n = M.size();
  if (n < 2) throw std::invalid_argument("bound report needs n >= 2");
  MatrixBoundReport r;
  r.n = n;
  r.row_sum_error = M.row_sum_error();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.mat(), Eigen::EigenvaluesOnly);
  r.lambda_max = es.eigenvalues().maxCoeff();
  r.lambda_min = es.eigenvalues().minCoeff();
  r.diag_min = M.mat().diagonal().minCoeff();
  r.diag_max = M.mat().diagonal().maxCoeff();
  r.spectral_limit = static_cast<double>(n - 1);
  r.diag_lower_limit = 1.0 / n;
  r.diag_upper_limit = conjugated_diag_bound(n);
  r.diag_upper_weak = (1.0 + static_cast<double>(n - 1) * (n - 1)) / n;
  r.unit_eigenpair_ok = r.row_sum_error <= 1e-9;
  r.spectral_ok = r.lambda_max <= r.spectral_limit + tol;
  r.diag_lower_ok = r.diag_min >= r.diag_lower_limit - tol;
  r.diag_upper_ok = r.diag_max <= r.diag_upper_limit + tol;
  r.diag_weak_ok = r.diag_max <= r.diag_upper_weak + tol;
  return r;
}

WitnessResult certify_zone_bound(const UnitVectorSet& vs, const WitnessOptions& opts) {
  const int n = vs.count();
  if (n < 2) throw std::invalid_argument("certification needs n >= 2");
  const GramMatrix H = gram(vs);

  std::optional<WitnessResult> dual;
  if (H.invertible(opts.kernel_tol)) {
    SolveOptions sopts;
    sopts.residual_tol = opts.residual_tol;
    sopts.kernel_tol = opts.kernel_tol;
    sopts.starts_per_n = opts.starts_per_n;
    sopts.seed = opts.seed;
    try {
      const InverseEigenSolution sol = solve_dual(H, sopts);
      if (sol.converged) {
        WitnessResult r = witness_from_w(vs, sol.w, opts);
        r.path = WitnessPath::dual;
        if (r.certified) return r;
        dual = std::move(r);
      }
    } catch (const std::exception&) {
      // fall through to the direct construction
    }
  }

  WitnessResult direct = maximize_product(vs, opts);
  direct.path = WitnessPath::direct;
  if (dual && dual->min_margin > direct.min_margin) return *dual;
  return direct;
}

}  // namespace plank
