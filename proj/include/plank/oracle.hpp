#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "plank/geometry.hpp"
#include "plank/inverse_eigen.hpp"

namespace plank {

enum class OracleMethod { grid, analytic2d, exhaustive };

struct OracleResult {
  double value = 0.0;
  Eigen::VectorXd argument;
  OracleMethod method = OracleMethod::grid;
  double resolution = 0.0;  // point count (circle) or subdivision level (sphere); 0 when exact
};

// Brute-force max-min margin max_x min_k |<v_k, x>| over unit x.  d=2 walks a
// half-circle grid (resolution = point count, >= 1000; spacing pi/resolution),
// d=3 an icosphere (resolution = subdivision level, >= 5), d=1 is exact.
// Throws UnsupportedInput for d > 3.  The objective is 1-Lipschitz in geodesic
// distance, so the grid value sits within one spacing of the true optimum.
// No code shared with the sphere solvers this cross-checks.
OracleResult grid_search_witness(const UnitVectorSet& vs, int resolution);

// Exact d=2 max-min margin for lines at the given angles.  The piecewise
// objective theta -> min_k |cos(theta - theta_k)| can only peak at a line
// direction or at a pairwise bisector (mod pi/2); every candidate is checked.
OracleResult analytic_2d(const std::vector<double>& angles);

// min_j e_j (H e)_j, the quantity bounded below by 1/n for a good sign vector.
double bang_value(const GramMatrix& H, const SignPattern& eps);

// Exhaustive search (n <= 20) for the sign vector maximizing bang_value.
// A maximizer always reaches at least 1/n; the caller asserts that.
SignPattern bang_sign_search(const GramMatrix& H);

// Per-orthant existence/value table for max sum log|w_i| on {w^T H w = n},
// re-derived by derivative-free compass search and compared against
// enumerate_all.  n <= 12.
struct EnumerationCheck {
  int quadrants = 0;
  int agreements = 0;
  std::vector<std::string> mismatches;
  bool ok() const { return agreements == quadrants; }
};
EnumerationCheck cross_check_enumeration(const GramMatrix& H, const SolveOptions& opts = {});

}  // namespace plank
