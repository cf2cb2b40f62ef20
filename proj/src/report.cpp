#include "plank/report.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "plank/bounds.hpp"
#include "plank/trigpoly.hpp"

namespace plank {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SignPattern signs_of(const Eigen::VectorXd& w) {
  std::vector<int> s(static_cast<std::size_t>(w.size()));
  for (int k = 0; k < w.size(); ++k) s[static_cast<std::size_t>(k)] = w[k] >= 0.0 ? 1 : -1;
  return SignPattern(std::move(s));
}

void fill_inverse_block(const GramMatrix& H, const VerificationOptions& opts,
                        VerificationReport& rep) {
  auto& inv = rep.inverse;
  inv.w = rep.witness.w;
  inv.quadrant = signs_of(inv.w).str();
  inv.residual = kInf;
  inv.quad_error = kInf;
  try {
    const Eigen::VectorXd r = inverse_eigen_residual(H, inv.w);
    inv.residual = r.cwiseAbs().maxCoeff();
    inv.quad_error = std::abs(inv.w.dot(H.mat() * inv.w) - rep.n);
  } catch (const std::invalid_argument&) {
    // a zero component: the witness run already failed, keep the infinities
  }
  const InverseEigenSolution sol{inv.w, inv.residual, signs_of(inv.w), rep.witness.converged, 0};
  inv.bounds = verify_w_bounds(sol, rep.n, opts.bound_tol);
  inv.pass = inv.residual <= 1e-8 && inv.quad_error <= opts.bound_tol;
}

void fill_trig_block(const ConjugatedMatrix& M, const VerificationOptions& opts,
                     VerificationReport& rep) {
  auto& tb = rep.trig;
  const int n = M.size();
  tb.root_limit = 2 * n - 2;
  bool first_ok = true;
  bool second_ok = true;
  for (int k = 0; k < n; ++k) {
    // Below this the slice direction blows up and T'(0) inherits the
    // amplified row-sum error; nothing sharp is lost by skipping.
    if (n * M.mat()(k, k) - 1.0 <= 1e-6) {
      ++tb.skipped;
      continue;
    }
    ++tb.slices;
    try {
      const Eigen::VectorXd vk = coordinate_slice(M, k);
      const FourierForm F = to_fourier(slice_poly(M, vk));
      const BernsteinReport br = bernstein_check(F, 1024 * n, opts.margin_tol);
      tb.sup_t = std::max(tb.sup_t, br.sup_value);
      first_ok = first_ok && br.first_ok;
      second_ok = second_ok && br.second_ok;
      const QDecomposition qd = q_decompose(F, n);
      tb.q_residual = std::max(tb.q_residual, qd.residual);
      const RootCount rc = count_roots(q_form(F, n), 4096 * n);
      tb.root_max = std::max(tb.root_max, rc.count);
    } catch (const std::invalid_argument&) {
      tb.q_residual = kInf;  // fails q_ok below; never hide a broken slice
    }
  }
  tb.ran = tb.slices > 0;
  tb.norm_ok = tb.sup_t <= 1.0 + opts.margin_tol;
  tb.bernstein_first_ok = first_ok;
  tb.bernstein_second_ok = second_ok;
  tb.q_ok = tb.q_residual <= 1e-10;
  tb.roots_ok = tb.root_max <= tb.root_limit;
  tb.pass = !tb.ran || (tb.norm_ok && first_ok && second_ok && tb.q_ok && tb.roots_ok);
}

void fill_oracle_block(const UnitVectorSet& vs, const GramMatrix& H,
                       const VerificationOptions& opts, VerificationReport& rep) {
  auto& ob = rep.oracle;
  ob.ran = true;
  ob.witness_unit_margin = rep.witness.unit_min_margin();
  const double unit_bound = rep.witness.bound / std::sqrt(static_cast<double>(rep.n));
  bool pass = true;
  if (rep.d <= 3) {
    const int resolution =
        rep.d == 3 ? opts.oracle_sphere_level : std::max(opts.oracle_circle_points, 1000);
    const OracleResult g = grid_search_witness(vs, resolution);
    ob.grid_value = g.value;
    ob.grid_resolution = g.resolution;
    double best = g.value;
    if (rep.d == 2) {
      std::vector<double> angles(static_cast<std::size_t>(rep.n));
      for (int k = 0; k < rep.n; ++k)
        angles[static_cast<std::size_t>(k)] = std::atan2(vs.rows()(k, 1), vs.rows()(k, 0));
      const OracleResult a = analytic_2d(angles);
      ob.has_analytic = true;
      ob.analytic_value = a.value;
      best = std::max(best, a.value);
      // the grid undershoots the exact optimum by at most one grid spacing
      const double spacing = std::numbers::pi / g.resolution;
      ob.grid_consistent = a.value >= g.value - 1e-12 && a.value <= g.value + spacing + 1e-12;
      pass = pass && ob.grid_consistent;
    }
    ob.floor_ok = best >= unit_bound - opts.oracle_slack;
    ob.dominates_ok = best >= ob.witness_unit_margin - opts.oracle_slack;
    pass = pass && ob.floor_ok && ob.dominates_ok;
  } else {
    ob.floor_ok = true;  // no brute-force search available in this dimension
    ob.dominates_ok = true;
  }
  if (rep.n <= 20) {
    const SignPattern eps = bang_sign_search(H);
    ob.bang_pattern = eps.str();
    ob.bang_min = bang_value(H, eps);
    ob.bang_ok = ob.bang_min >= 1.0 / rep.n - opts.bound_tol;
    pass = pass && ob.bang_ok;
  } else {
    ob.bang_ok = true;
  }
  ob.pass = pass;
}

}  // namespace

VerificationReport run_verification(const UnitVectorSet& vs, const VerificationOptions& opts) {
  const int n = vs.count();
  if (n < 2) throw std::invalid_argument("verification needs at least 2 vectors");

  VerificationReport rep;
  rep.source = opts.source;
  rep.n = n;
  rep.d = vs.dim();
  rep.seed = opts.seed;

  const GramMatrix H = gram(vs);

  WitnessOptions wopts;
  wopts.margin_tol = opts.margin_tol;
  wopts.residual_tol = opts.residual_tol;
  wopts.starts_per_n = opts.starts_per_n;
  wopts.seed = opts.seed;
  rep.witness = certify_zone_bound(vs, wopts);
  rep.witness_pass = rep.witness.certified && rep.witness.converged;

  fill_inverse_block(H, opts, rep);

  if (rep.witness.converged && rep.inverse.residual <= 1e-8) {
    try {
      const ConjugatedMatrix M = conjugated_matrix(H, rep.inverse.w);
      rep.matrix.built = true;
      rep.matrix.bounds = check_matrix_bounds(M, opts.bound_tol);
      rep.matrix.pass = rep.matrix.bounds.all_ok();
      fill_trig_block(M, opts, rep);
    } catch (const std::invalid_argument&) {
      rep.matrix.built = false;  // conjugation rejected the vector after all
    }
  }
  if (!rep.matrix.built) rep.trig.pass = true;  // vacuous; matrix.pass already gates overall

  if (opts.with_oracle) fill_oracle_block(vs, H, opts, rep);

  rep.overall = rep.witness_pass && rep.inverse.pass && rep.matrix.pass && rep.trig.pass &&
                (!opts.with_oracle || rep.oracle.pass);
  return rep;
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_array(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

std::string report_to_json(const VerificationReport& rep, int indent) {
  ordered_json j;
  j["schema"] = "1";
  j["kind"] = "verification_report";
  j["source"] = rep.source;
  j["n"] = rep.n;
  j["d"] = rep.d;
  j["seed"] = rep.seed;
  j["overall"] = rep.overall;

  {
    const WitnessResult& w = rep.witness;
    ordered_json b;
    b["pass"] = rep.witness_pass;
    b["path"] = w.path == WitnessPath::dual ? "dual" : "direct";
    b["certified"] = w.certified;
    b["converged"] = w.converged;
    b["stationarity"] = w.stationarity;
    b["min_margin"] = w.min_margin;
    b["bound"] = w.bound;
    b["unit_min_margin"] = w.unit_min_margin();
    b["unit_bound"] = w.bound / std::sqrt(static_cast<double>(rep.n));
    b["v"] = to_array(w.v);
    b["margins"] = to_array(w.margins);
    b["unit_margins"] = to_array(w.unit_margins());
    j["witness"] = std::move(b);
  }
  {
    const auto& inv = rep.inverse;
    ordered_json b;
    b["pass"] = inv.pass;
    b["residual"] = inv.residual;
    b["quadratic_error"] = inv.quad_error;
    b["quadrant"] = inv.quadrant;
    b["w"] = to_array(inv.w);
    ordered_json wb;
    wb["sup_norm"] = inv.bounds.sup_norm;
    wb["sharp_limit"] = inv.bounds.sharp_limit;
    wb["bang_limit"] = inv.bounds.bang_limit;
    wb["strong_limit"] = inv.bounds.strong_limit;
    wb["sharp"] = inv.bounds.sharp;
    wb["bang"] = inv.bounds.bang;
    wb["strong"] = inv.bounds.strong;
    b["w_bounds"] = std::move(wb);
    j["inverse_eigenvector"] = std::move(b);
  }
  {
    const auto& m = rep.matrix;
    ordered_json b;
    b["pass"] = m.pass;
    b["built"] = m.built;
    if (m.built) {
      b["row_sum_error"] = m.bounds.row_sum_error;
      b["lambda_max"] = m.bounds.lambda_max;
      b["lambda_min"] = m.bounds.lambda_min;
      b["diag_min"] = m.bounds.diag_min;
      b["diag_max"] = m.bounds.diag_max;
      b["spectral_limit"] = m.bounds.spectral_limit;
      b["diag_lower_limit"] = m.bounds.diag_lower_limit;
      b["diag_upper_limit"] = m.bounds.diag_upper_limit;
      b["diag_upper_weak"] = m.bounds.diag_upper_weak;
      b["unit_eigenpair_ok"] = m.bounds.unit_eigenpair_ok;
      b["spectral_ok"] = m.bounds.spectral_ok;
      b["diag_lower_ok"] = m.bounds.diag_lower_ok;
      b["diag_upper_ok"] = m.bounds.diag_upper_ok;
      b["diag_weak_ok"] = m.bounds.diag_weak_ok;
    }
    j["conjugated_matrix"] = std::move(b);
  }
  {
    const auto& t = rep.trig;
    ordered_json b;
    b["pass"] = t.pass;
    b["ran"] = t.ran;
    b["slices"] = t.slices;
    b["skipped"] = t.skipped;
    if (t.ran) {
      b["sup_t"] = t.sup_t;
      b["norm_ok"] = t.norm_ok;
      b["bernstein_first_ok"] = t.bernstein_first_ok;
      b["bernstein_second_ok"] = t.bernstein_second_ok;
      b["q_residual"] = t.q_residual;
      b["q_ok"] = t.q_ok;
      b["root_max"] = t.root_max;
      b["root_limit"] = t.root_limit;
      b["roots_ok"] = t.roots_ok;
    }
    j["slice_polynomials"] = std::move(b);
  }
  {
    const auto& o = rep.oracle;
    ordered_json b;
    b["ran"] = o.ran;
    if (o.ran) {
      b["pass"] = o.pass;
      b["witness_unit_margin"] = o.witness_unit_margin;
      if (rep.d <= 3) {
        b["grid_value"] = o.grid_value;
        b["grid_resolution"] = o.grid_resolution;
        if (o.has_analytic) {
          b["analytic_value"] = o.analytic_value;
          b["grid_consistent"] = o.grid_consistent;
        }
        b["floor_ok"] = o.floor_ok;
        b["dominates_ok"] = o.dominates_ok;
      }
      if (!o.bang_pattern.empty()) {
        b["bang_pattern"] = o.bang_pattern;
        b["bang_min"] = o.bang_min;
        b["bang_ok"] = o.bang_ok;
      }
    }
    j["oracle"] = std::move(b);
  }
  return j.dump(indent) + "\n";
}

}  // namespace plank
