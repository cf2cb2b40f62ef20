#include "plank/inverse_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "plank/bounds.hpp"
#include "plank/errors.hpp"
#include "lp.hpp"

namespace plank {

namespace {

constexpr double kWall = 1e-14;  // orthant wall: reject, never clamp

double linf(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

Eigen::VectorXd reciprocal_checked(const Eigen::VectorXd& w) {
  Eigen::VectorXd r(w.size());
  for (int i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) < 1e-300)
      throw std::invalid_argument("vector entry " + std::to_string(i) +
                                  " is zero; componentwise reciprocal undefined");
    r(i) = 1.0 / w(i);
  }
  return r;
}

SignPattern signs_of(const Eigen::VectorXd& w) {
  std::vector<int> s(w.size());
  for (int i = 0; i < w.size(); ++i) s[i] = w(i) >= 0.0 ? 1 : -1;
  return SignPattern(std::move(s));
}

double log_abs_product(const Eigen::VectorXd& w) {
  double f = 0.0;
  for (int i = 0; i < w.size(); ++i) f += std::log(std::abs(w(i)));
  return f;
}

// Projected gradient ascent for sum_i log|w_i| on {w^T S w = n}, staying in
// the orthant of the start.  Stops at an approximately stationary point;
// Newton finishes the job.
Eigen::VectorXd ascend_log_product(const Eigen::MatrixXd& S, Eigen::VectorXd w,
                                   int max_iterations) {
  const int n = static_cast<int>(S.rows());
  const double target = static_cast<double>(n);
  {
    const double qf = w.dot(S * w);
    if (!(qf > 1e-12)) return w;  // degenerate start; let Newton report failure
    w *= std::sqrt(target / qf);
  }
  double f = log_abs_product(w);
  double eta = 0.5;
  for (int iter = 0; iter < max_iterations; ++iter) {
    const Eigen::VectorXd g = w.cwiseInverse();
    const Eigen::VectorXd sw = S * w;
    const double sw2 = sw.squaredNorm();
    if (!(sw2 > 0.0)) break;
    const Eigen::VectorXd gt = g - (g.dot(sw) / sw2) * sw;
    if (linf(gt) <= 1e-8 * std::max(1.0, linf(g))) break;

    bool moved = false;
    for (int trial = 0; trial < 60; ++trial) {
      Eigen::VectorXd cand = w + eta * gt;
      const double qf = cand.dot(S * cand);
      if (qf > 1e-12) {
        cand *= std::sqrt(target / qf);
        bool ok = true;
        for (int i = 0; i < n; ++i)
          if (cand(i) * w(i) <= 0.0 || std::abs(cand(i)) < kWall) {
            ok = false;
            break;
          }
        if (ok) {
          const double fc = log_abs_product(cand);
          if (fc > f) {
            w = std::move(cand);
            f = fc;
            eta *= 1.6;
            moved = true;
            break;
          }
        }
      }
      eta *= 0.5;
    }
    if (!moved) break;
  }
  return w;
}

}  // namespace

Eigen::VectorXd inverse_eigen_residual(const Eigen::MatrixXd& S, const Eigen::VectorXd& w) {
  if (S.rows() != S.cols() || S.rows() != w.size())
    throw std::invalid_argument("matrix/vector size mismatch in residual");
  return S * w - reciprocal_checked(w);
}

Eigen::VectorXd inverse_eigen_residual(const GramMatrix& H, const Eigen::VectorXd& w) {
  return inverse_eigen_residual(H.mat(), w);
}

InverseEigenSolution newton_inverse_eigen(const Eigen::MatrixXd& S, Eigen::VectorXd w,
                                          const SolveOptions& opts) {
  const int n = static_cast<int>(S.rows());
  if (S.cols() != n || w.size() != n)
    throw std::invalid_argument("matrix/vector size mismatch in Newton solve");
  for (int i = 0; i < n; ++i)
    if (std::abs(w(i)) < kWall)
      throw std::invalid_argument("Newton start has a (near-)zero entry at index " +
                                  std::to_string(i));

  const SignPattern q = signs_of(w);
  Eigen::VectorXd F = S * w - w.cwiseInverse();
  double res2 = F.norm();
  bool converged = false;
  int iter = 0;
  int polish_left = 3;

  for (; iter < opts.max_newton_iterations; ++iter) {
    const double res_inf = linf(F);
    if (res_inf <= opts.residual_tol) {
      converged = true;
      if (res_inf <= 1e-15 || polish_left-- <= 0) break;
    }
    Eigen::MatrixXd J = S;
    J.diagonal() += w.array().square().inverse().matrix();
    const Eigen::VectorXd step = J.ldlt().solve(-F);

    double t = 1.0;
    bool accepted = false;
    while (t >= 1e-12) {
      Eigen::VectorXd cand = w + t * step;
      bool in_orthant = true;
      for (int i = 0; i < n; ++i)
        if (q[i] * cand(i) < kWall) {
          in_orthant = false;
          break;
        }
      if (in_orthant) {
        Eigen::VectorXd Fc = S * cand - cand.cwiseInverse();
        const double c2 = Fc.norm();
        if (c2 < res2 * (1.0 - 1e-4 * t)) {
          w = std::move(cand);
          F = std::move(Fc);
          res2 = c2;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) break;  // stalled against the orthant wall or flat residual
  }

  const double res_inf = linf(F);
  return InverseEigenSolution{std::move(w), res_inf, q,
                              converged || res_inf <= opts.residual_tol, iter};
}

bool quadrant_meets_kernel(const GramMatrix& H, const SignPattern& q, double tol) {
  if (q.size() != H.size()) throw std::invalid_argument("sign pattern size mismatch");
  const auto basis = kernel_basis(H, tol);
  if (basis.empty()) return false;
  const int n = H.size();
  const int m = static_cast<int>(basis.size());
  Eigen::MatrixXd A(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) A(i, j) = q[i] * basis[j](i);
  return detail::cone_max_min(A) >= -1e-9;
}

namespace {

QuadrantResult solve_in_quadrant_impl(const GramMatrix& H, const SignPattern& q,
                                      const std::vector<Eigen::VectorXd>& kernel,
                                      const SolveOptions& opts) {
  const int n = H.size();
  if (!kernel.empty()) {
    const int m = static_cast<int>(kernel.size());
    Eigen::MatrixXd A(n, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) A(i, j) = q[i] * kernel[j](i);
    if (detail::cone_max_min(A) >= -1e-9) return QuadrantResult{QuadrantStatus::no_solution, {}};
  }

  Eigen::VectorXd w0(n);
  for (int i = 0; i < n; ++i) w0(i) = static_cast<double>(q[i]);
  if (w0.dot(H.mat() * w0) < 1e-10) {
    // Sign vector sits (numerically) on the kernel; nudge it inside the orthant.
    for (int i = 0; i < n; ++i) w0(i) = q[i] * (1.0 + 0.25 * ((i % 7) + 1) / 8.0);
  }

  Eigen::VectorXd w1 = ascend_log_product(H.mat(), w0, opts.max_ascent_iterations);
  InverseEigenSolution sol = newton_inverse_eigen(H.mat(), w1, opts);
  if (!sol.converged) {
    w1 = ascend_log_product(H.mat(), sol.w, 4 * opts.max_ascent_iterations);
    sol = newton_inverse_eigen(H.mat(), w1, opts);
  }
  if (!sol.converged) return QuadrantResult{QuadrantStatus::no_convergence, std::move(sol)};
  return QuadrantResult{QuadrantStatus::found, std::move(sol)};
}

SignPattern pattern_from_mask(std::uint32_t mask, int n) {
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1u ? -1 : 1;
  return SignPattern(std::move(s));
}

}  // namespace

QuadrantResult solve_in_quadrant(const GramMatrix& H, const SignPattern& q,
                                 const SolveOptions& opts) {
  if (q.size() != H.size()) throw std::invalid_argument("sign pattern size mismatch");
  const auto kernel =
      H.invertible(opts.kernel_tol) ? std::vector<Eigen::VectorXd>{} : kernel_basis(H, opts.kernel_tol);
  return solve_in_quadrant_impl(H, q, kernel, opts);
}

std::vector<InverseEigenSolution> enumerate_all(const GramMatrix& H, const SolveOptions& opts) {
  const int n = H.size();
  if (n > 20)
    throw UnsupportedInput("enumerate_all supports n <= 20 (2^n orthants); got n = " +
                                std::to_string(n));
  const auto kernel =
      H.invertible(opts.kernel_tol) ? std::vector<Eigen::VectorXd>{} : kernel_basis(H, opts.kernel_tol);

  const std::uint32_t count = 1u << n;
  std::vector<std::optional<InverseEigenSolution>> slots(count);
  // Solve one orthant per +/- pair (those with leading sign +), then mirror:
  // -w solves in the negated orthant whenever w solves in its own.
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if ((mask & 1u) != 0u) continue;
    const SignPattern q = pattern_from_mask(mask, n);
    QuadrantResult r = solve_in_quadrant_impl(H, q, kernel, opts);
    if (r.status == QuadrantStatus::found) slots[mask] = std::move(*r.solution);
  }
  for (std::uint32_t mask = 1; mask < count; mask += 2) {
    const std::uint32_t mirror = (~mask) & (count - 1u);
    if (!slots[mirror].has_value()) continue;
    Eigen::VectorXd w = -slots[mirror]->w;
    const double res = linf(inverse_eigen_residual(H.mat(), w));
    const bool conv = res <= opts.residual_tol;
    slots[mask] = InverseEigenSolution{std::move(w), res, pattern_from_mask(mask, n), conv, 0};
  }
  std::vector<InverseEigenSolution> out;
  out.reserve(count);
  for (auto& s : slots)
    if (s.has_value()) out.push_back(std::move(*s));
  return out;
}

InverseEigenSolution solve_dual(const GramMatrix& H, const SolveOptions& opts) {
  const int n = H.size();
  if (!H.invertible(opts.kernel_tol)) {
    std::ostringstream msg;
    msg << "dual construction needs an invertible Gram matrix (min eigenvalue "
        << H.min_eigenvalue() << ")";
    throw UnsupportedInput(msg.str());
  }
  Eigen::MatrixXd G = H.mat().ldlt().solve(Eigen::MatrixXd::Identity(n, n));
  G = 0.5 * (G + G.transpose()).eval();

  struct Candidate {
    double value;
    Eigen::VectorXd u;
    SignPattern quadrant;
    int index;
  };
  std::optional<Candidate> best;
  int index = 0;

  auto consider = [&](Eigen::VectorXd start) {
    const int my_index = index++;
    Eigen::VectorXd ua = ascend_log_product(G, std::move(start), opts.max_ascent_iterations);
    InverseEigenSolution su = newton_inverse_eigen(G, ua, opts);
    if (!su.converged) return;
    Eigen::VectorXd u = std::move(su.w);
    // Canonical representative of the +/- pair: lexicographically smaller signs.
    if (signs_of(-u).lex_less(signs_of(u))) u = -u;
    const double value = log_abs_product(u);
    SignPattern q = signs_of(u);
    constexpr double tie = 1e-12;
    if (!best || value > best->value + tie ||
        (value > best->value - tie && q.lex_less(best->quadrant))) {
      best = Candidate{value, std::move(u), std::move(q), my_index};
    }
  };

  // Sign-vector starts (all 2^min(n,10), halved by the +/- symmetry).
  const int nb = std::min(n, 10);
  for (std::uint32_t mask = 0; mask < (1u << nb); ++mask) {
    if (nb == n && (mask & 1u)) continue;  // mirror of an enumerated start
    Eigen::VectorXd s(n);
    for (int i = 0; i < n; ++i) s(i) = (i < nb && ((mask >> i) & 1u)) ? -1.0 : 1.0;
    consider(std::move(s));
  }
  // Gaussian starts.
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int r = 0; r < opts.starts_per_n * n; ++r) {
    Eigen::VectorXd z(n);
    for (int tries = 0; tries < 100; ++tries) {
      for (int i = 0; i < n; ++i) z(i) = gauss(rng);
      if (z.cwiseAbs().minCoeff() > 1e-9) break;
    }
    consider(std::move(z));
  }

  if (!best) throw std::runtime_error("dual search failed to converge from any start");

  // Polish on the primal system and report the primal residual.
  Eigen::VectorXd w0 = best->u.cwiseInverse();
  InverseEigenSolution sol = newton_inverse_eigen(H.mat(), w0, opts);
  if (signs_of(-sol.w).lex_less(signs_of(sol.w))) sol.w = -sol.w;
  sol.quadrant = signs_of(sol.w);
  sol.residual = linf(inverse_eigen_residual(H.mat(), sol.w));
  sol.converged = sol.residual <= opts.residual_tol;
  return sol;
}

WBoundReport verify_w_bounds(const InverseEigenSolution& sol, int n, double tol) {
  if (n < 1) throw std::invalid_argument("verify_w_bounds needs n >= 1");
  WBoundReport r;
  r.sup_norm = linf(sol.w);
  r.sharp_limit = inverse_vector_sup_bound(n);
  r.bang_limit = std::sqrt(static_cast<double>(n));
  r.strong_limit = std::sqrt(static_cast<double>(n - 1));
  r.sharp = r.sup_norm <= r.sharp_limit + tol;
  r.bang = r.sup_norm <= r.bang_limit + tol;
  r.strong = r.sup_norm <= r.strong_limit + tol;
  return r;
}

}  // namespace plank
