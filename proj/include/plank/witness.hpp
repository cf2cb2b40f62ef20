#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "plank/geometry.hpp"

namespace plank {

struct WitnessOptions {
  double stationarity_tol = 1e-9;  // on ||v - sum_k v_k / <v_k,v>||
  double margin_tol = 1e-9;        // slack in the certification test
  double kernel_tol = 1e-10;       // invertibility threshold for path choice
  double residual_tol = 1e-10;     // forwarded to the inverse-eigenvector solver
  int max_ascent_iterations = 400;
  int max_newton_iterations = 60;
  int starts_per_n = 8;            // Gaussian starts = starts_per_n * n
  std::uint64_t seed = 0;
};

// How the witness was produced: direct product maximization on the sphere, or
// algebraically from an inverse eigenvector of the Gram matrix (v = sum w_k v_k).
enum class WitnessPath { direct, dual };

// A vector v with ||v||^2 = n whose inner products against every v_k stay
// above sqrt(n) sin(pi/2n) in absolute value (when certified).
struct WitnessResult {
  Eigen::VectorXd v;
  Eigen::VectorXd margins;  // |<v_k, v>|
  Eigen::VectorXd w;        // 1 / <v_k, v>, so margins[k] * |w[k]| = 1
  double min_margin = 0.0;
  double bound = 0.0;       // sqrt(n) sin(pi/2n)
  bool certified = false;   // min_margin >= bound - margin_tol
  bool converged = false;   // stationarity <= stationarity_tol
  double stationarity = 0.0;
  WitnessPath path = WitnessPath::direct;

  // Margins of the unit vector v / sqrt(n); their floor is sin(pi/2n).
  Eigen::VectorXd unit_margins() const;
  double unit_min_margin() const;
};

// Maximize prod_k |<v_k, v>| over the sphere ||v|| = sqrt(n) by multi-start
// projected gradient ascent with a Newton polish on the fixed-point form
// v = sum_k v_k / <v_k, v>.  Works whether or not gram(vs) is invertible.
// Never throws on search failure; converged=false marks a failed search.
WitnessResult maximize_product(const UnitVectorSet& vs, const WitnessOptions& opts = {});

// The algebraic construction v = sum_k w_k v_k from an inverse eigenvector w
// of gram(vs) (residual <= 1e-8 required, else std::invalid_argument).  Then
// <v_k, v> = 1/w_k and ||v||^2 = n up to the residual.
WitnessResult witness_from_w(const UnitVectorSet& vs, const Eigen::VectorXd& w,
                             const WitnessOptions& opts = {});

// Symmetric PSD matrix m_jk = w_j H_jk w_k with unit row sums (M 1 = 1).
class ConjugatedMatrix {
 public:
  // Validates: square, symmetric (1e-10), PSD (min eigenvalue >= -1e-10),
  // row sums within 1e-7 of 1.  Reports measure the row sums exactly.
  static ConjugatedMatrix from_entries(Eigen::MatrixXd entries);

  int size() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  double row_sum_error() const;  // ||M 1 - 1||_inf

 private:
  ConjugatedMatrix(Eigen::MatrixXd m, double min_ev)
      : mat_(std::move(m)), min_eigenvalue_(min_ev) {}
  Eigen::MatrixXd mat_;
  double min_eigenvalue_;
};

// diag(w) H diag(w) for an inverse eigenvector w of H; the inverse-eigenvector
// identity w_j (Hw)_j = 1 is exactly what makes the row sums 1.  Throws
// std::invalid_argument when ||Hw - w^{-1}||_inf > 1e-8.
ConjugatedMatrix conjugated_matrix(const GramMatrix& H, const Eigen::VectorXd& w);

// Spectral and diagonal facts about a conjugated matrix.  Every bound here is
// a theorem for matrices built from a product-maximizing inverse eigenvector;
// the report records measurements and never throws on a violation.
struct MatrixBoundReport {
  int n = 0;
  double row_sum_error = 0.0;  // ||M 1 - 1||_inf
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double diag_min = 0.0;
  double diag_max = 0.0;
  double spectral_limit = 0.0;    // n - 1
  double diag_lower_limit = 0.0;  // 1/n
  double diag_upper_limit = 0.0;  // csc^2(pi/2n) / n
  double diag_upper_weak = 0.0;   // (1 + (n-1)^2) / n
  bool unit_eigenpair_ok = false;  // row_sum_error <= 1e-9, i.e. (1, ones) is an eigenpair
  bool spectral_ok = false;
  bool diag_lower_ok = false;
  bool diag_upper_ok = false;
  bool diag_weak_ok = false;

  bool all_ok() const {
    return unit_eigenpair_ok && spectral_ok && diag_lower_ok && diag_upper_ok && diag_weak_ok;
  }
};

// Requires n >= 2 (the csc^2 limit needs it); tol guards every inequality.
MatrixBoundReport check_matrix_bounds(const ConjugatedMatrix& M, double tol = 1e-8);

// Full certification pipeline.  Invertible Gram: w = solve_dual, v = sum w_k v_k.
// Singular Gram (or a dual-search failure): direct maximization.  The result's
// `path` records which construction produced the returned witness; when both
// run, the larger min_margin wins.  Requires n >= 2.
WitnessResult certify_zone_bound(const UnitVectorSet& vs, const WitnessOptions& opts = {});

}  // namespace plank
