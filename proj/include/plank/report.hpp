#pragma once

#include <cstdint>
#include <string>

#include "plank/inverse_eigen.hpp"
#include "plank/oracle.hpp"
#include "plank/witness.hpp"

namespace plank {

struct VerificationOptions {
  double residual_tol = 1e-10;  // inverse-eigenvector convergence
  double bound_tol = 1e-8;      // spectral/diagonal/sup-norm inequalities
  double margin_tol = 1e-9;     // witness certification slack
  double oracle_slack = 1e-6;   // brute-force comparison slack
  bool with_oracle = false;
  int oracle_circle_points = 20000;
  int oracle_sphere_level = 5;
  int starts_per_n = 8;
  std::uint64_t seed = 0;
  std::string source;  // label copied into the report
};

// One block per pipeline stage; `pass` per block, `overall` their conjunction.
struct VerificationReport {
  std::string source;
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;

  WitnessResult witness;
  bool witness_pass = false;

  struct InverseBlock {
    Eigen::VectorXd w;
    double residual = 0.0;    // ||Hw - w^{-1}||_inf
    double quad_error = 0.0;  // |w^T H w - n|
    std::string quadrant;
    WBoundReport bounds;      // recorded, not asserted (sharp only holds via the dual path)
    bool pass = false;        // residual and quadratic constraint only
  } inverse;

  struct MatrixBlock {
    bool built = false;
    MatrixBoundReport bounds;
    bool pass = false;
  } matrix;

  struct TrigBlock {
    bool ran = false;  // at least one nondegenerate coordinate slice
    int slices = 0;
    int skipped = 0;      // slices with n m_kk - 1 below 1e-6
    double sup_t = 0.0;   // max over slices of sampled ||T||_inf
    bool norm_ok = false; // sup_t <= 1 + margin_tol
    bool bernstein_first_ok = false;
    bool bernstein_second_ok = false;
    double q_residual = 0.0;  // max over slices
    bool q_ok = false;        // q_residual <= 1e-10
    int root_max = 0;
    int root_limit = 0;  // 2n - 2
    bool roots_ok = false;
    bool pass = false;
  } trig;

  struct OracleBlock {
    bool ran = false;
    double grid_value = 0.0;
    double grid_resolution = 0.0;
    bool has_analytic = false;
    double analytic_value = 0.0;
    double witness_unit_margin = 0.0;
    bool floor_ok = false;       // oracle optimum >= sin(pi/2n) - slack
    bool dominates_ok = false;   // oracle optimum >= witness margin - slack
    bool grid_consistent = true; // d=2: grid <= analytic <= grid + pi/points
    std::string bang_pattern;
    double bang_min = 0.0;
    bool bang_ok = false;
    bool pass = false;
  } oracle;

  bool overall = false;
};

// gram -> solve -> witness -> conjugated matrix -> slice checks -> optional
// brute-force oracle.  Never throws on a mathematical violation; those fail
// the corresponding block.  Requires n >= 2.
VerificationReport run_verification(const UnitVectorSet& vs, const VerificationOptions& opts = {});

// Machine-readable rendering; reals keep full round-trip precision.
std::string report_to_json(const VerificationReport& report, int indent = 2);

}  // namespace plank
