#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "plank/geometry.hpp"

namespace plank {

struct SolveOptions {
  double residual_tol = 1e-10;   // convergence test on ||Hw - w^{-1}||_inf
  double kernel_tol = 1e-10;     // eigenvalue cutoff for the kernel
  int max_newton_iterations = 120;
  int max_ascent_iterations = 400;
  int starts_per_n = 8;          // random-start multiplier for the dual search
  std::uint64_t seed = 0;
};

// A solution of H w = w^{-1} (componentwise reciprocal).  Such a w satisfies
// w^T H w = n automatically.
struct InverseEigenSolution {
  Eigen::VectorXd w;
  double residual = 0.0;  // ||Hw - w^{-1}||_inf at the returned point
  SignPattern quadrant;
  bool converged = false;
  int iterations = 0;
};

// Componentwise Hw - w^{-1}; throws if any entry of w is zero.
Eigen::VectorXd inverse_eigen_residual(const Eigen::MatrixXd& S, const Eigen::VectorXd& w);
Eigen::VectorXd inverse_eigen_residual(const GramMatrix& H, const Eigen::VectorXd& w);

// Damped Newton on F(w) = Sw - w^{-1} from an explicit start.  S must be
// symmetric positive semidefinite; steps are clipped to the start's orthant
// (components are rejected below 1e-14 rather than clamped) and must not
// increase ||F||.  Low-level entry used by the quadrant and dual solvers.
InverseEigenSolution newton_inverse_eigen(const Eigen::MatrixXd& S, Eigen::VectorXd start,
                                          const SolveOptions& opts = {});

// Does the closed orthant named by q contain a nonzero kernel vector of H?
// Decided by a small linear program over the kernel basis, so the answer is a
// certificate rather than a side effect of solver convergence.
bool quadrant_meets_kernel(const GramMatrix& H, const SignPattern& q, double tol = 1e-10);

enum class QuadrantStatus { found, no_solution, no_convergence };

struct QuadrantResult {
  QuadrantStatus status = QuadrantStatus::no_convergence;
  std::optional<InverseEigenSolution> solution;
};

// The unique solution of Hw = w^{-1} with signs q, when one exists.  A
// solution exists iff the orthant meets Ker(H) only at the origin; that test
// alone decides `no_solution`, so non-convergence is reported distinctly.
QuadrantResult solve_in_quadrant(const GramMatrix& H, const SignPattern& q,
                                 const SolveOptions& opts = {});

// All inverse eigenvectors of H, one orthant at a time (n <= 20).  For
// invertible H this returns exactly 2^n solutions.
std::vector<InverseEigenSolution> enumerate_all(const GramMatrix& H,
                                                const SolveOptions& opts = {});

// The distinguished solution: maximize prod |u_k| over {u^T H^{-1} u = n}
// by multi-start projected ascent plus Newton polish, then set w = u^{-1}.
// The result obeys ||w||_inf <= csc(pi/2n)/sqrt(n).  Throws UnsupportedInput
// when H is singular.
InverseEigenSolution solve_dual(const GramMatrix& H, const SolveOptions& opts = {});

struct WBoundReport {
  double sup_norm = 0.0;
  double sharp_limit = 0.0;   // csc(pi/2n)/sqrt(n)
  double bang_limit = 0.0;    // sqrt(n)
  double strong_limit = 0.0;  // sqrt(n-1)
  bool sharp = false;
  bool bang = false;
  bool strong = false;
};

WBoundReport verify_w_bounds(const InverseEigenSolution& sol, int n, double tol = 1e-8);

}  // namespace plank
