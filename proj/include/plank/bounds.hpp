#pragma once

#include <cmath>
#include <numbers>

namespace plank {

// The three closed-form limits the verification pipeline checks against.
// All are sharp: the equally spaced configuration attains them exactly.

// Margin guaranteed for a witness of norm sqrt(n): sqrt(n) * sin(pi/2n).
inline double witness_margin_bound(int n) {
  return std::sqrt(static_cast<double>(n)) * std::sin(std::numbers::pi / (2.0 * n));
}

// Sup-norm ceiling for the distinguished inverse eigenvector:
// csc(pi/2n) / sqrt(n).  Equals 1/witness_margin_bound(n).
inline double inverse_vector_sup_bound(int n) {
  return 1.0 / witness_margin_bound(n);
}

// Ceiling for the diagonal of the conjugated matrix: csc^2(pi/2n) / n.
inline double conjugated_diag_bound(int n) {
  const double s = std::sin(std::numbers::pi / (2.0 * n));
  return 1.0 / (n * s * s);
}

}  // namespace plank
