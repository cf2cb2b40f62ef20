// plank: certify that n unit vectors admit a common witness with margin
// sqrt(n) sin(pi/2n), via inverse eigenvectors of the Gram matrix.
//
// Subcommands: gen, verify, inv-eigen, trace, zones.  Exit codes: 0 success,
// 1 mathematical failure or unsupported input, 2 usage or parse error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "plank/bounds.hpp"
#include "plank/errors.hpp"
#include "plank/io.hpp"
#include "plank/report.hpp"
#include "plank/trigpoly.hpp"

namespace {

using plank::GramMatrix;
using plank::UnitVectorSet;
using plank::UnsupportedInput;
using ordered_json = nlohmann::ordered_json;

std::uint64_t default_seed() {
  const char* env = std::getenv("PLANK_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw std::invalid_argument(std::string("PLANK_SEED is not an integer: ") + env);
  return static_cast<std::uint64_t>(v);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

ordered_json to_array(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// Vector families carry their own rows; bare Gram inputs get a spectral
// factorization H = R R^T with unit rows, which has the same Gram matrix.
UnitVectorSet instance_vectors(const plank::Instance& inst) {
  if (inst.vectors) return *inst.vectors;
  const Eigen::MatrixXd& h = inst.gram.mat();
  const int n = static_cast<int>(h.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  int rank = 0;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()[i] > 1e-12) ++rank;
  if (rank == 0) throw UnsupportedInput("gram matrix is numerically zero");
  Eigen::MatrixXd rows(n, rank);
  int c = 0;
  for (int i = 0; i < n; ++i) {
    if (es.eigenvalues()[i] <= 1e-12) continue;
    rows.col(c++) = es.eigenvectors().col(i) * std::sqrt(es.eigenvalues()[i]);
  }
  for (int k = 0; k < n; ++k) {
    const double norm = rows.row(k).norm();
    if (norm < 1e-6) throw UnsupportedInput("gram row " + std::to_string(k) + " has no unit preimage");
    rows.row(k) /= norm;
  }
  return UnitVectorSet::from_rows(std::move(rows));
}

// A slice direction: JSON array, JSON object with a "vector" array, or a bare
// list of numbers separated by commas/whitespace.
Eigen::VectorXd read_direction(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw plank::ParseFailure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw plank::ParseFailure("empty direction file " + path);
  std::vector<double> entries;
  if (text[first] == '[' || text[first] == '{') {
    ordered_json doc = ordered_json::parse(text);
    if (doc.is_object()) {
      if (!doc.contains("vector")) throw plank::ParseFailure("direction object needs a \"vector\" array");
      doc = doc["vector"];
    }
    if (!doc.is_array()) throw plank::ParseFailure("direction must be an array of numbers");
    for (const auto& e : doc) {
      if (!e.is_number()) throw plank::ParseFailure("direction entries must be numbers");
      entries.push_back(e.get<double>());
    }
  } else {
    for (char& ch : text)
      if (ch == ',' || ch == ';') ch = ' ';
    std::istringstream stream(text);
    std::string tok;
    while (stream >> tok) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(tok, &used);
      } catch (const std::exception&) {
        throw plank::ParseFailure("bad number \"" + tok + "\" in " + path);
      }
      if (used != tok.size()) throw plank::ParseFailure("bad number \"" + tok + "\" in " + path);
      entries.push_back(value);
    }
  }
  if (entries.empty()) throw plank::ParseFailure("no numbers in direction file " + path);
  return Eigen::Map<Eigen::VectorXd>(entries.data(), static_cast<Eigen::Index>(entries.size()));
}

ordered_json bounds_json(const plank::WBoundReport& b) {
  ordered_json j;
  j["sup_norm"] = b.sup_norm;
  j["sharp_limit"] = b.sharp_limit;
  j["bang_limit"] = b.bang_limit;
  j["strong_limit"] = b.strong_limit;
  j["sharp"] = b.sharp;
  j["bang"] = b.bang;
  j["strong"] = b.strong;
  return j;
}

ordered_json solution_json(const plank::InverseEigenSolution& s, const GramMatrix& H) {
  ordered_json j;
  j["quadrant"] = s.quadrant.str();
  j["converged"] = s.converged;
  j["residual"] = s.residual;
  j["iterations"] = s.iterations;
  j["quadratic_error"] = std::abs(s.w.dot(H.mat() * s.w) - H.size());
  j["w"] = to_array(s.w);
  j["w_bounds"] = bounds_json(plank::verify_w_bounds(s, H.size()));
  return j;
}

int run_gen(int extremal_n, const std::vector<int>& random_nd, std::uint64_t seed,
            const std::string& out) {
  if (extremal_n > 0) {
    emit(plank::vectors_to_json(plank::extremal_configuration(extremal_n)), out);
    return 0;
  }
  const int n = random_nd[0];
  const int d = random_nd[1];
  if (n < 1 || d < 1) throw std::invalid_argument("--random needs n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd rows(n, d);
  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    do {
      for (int j = 0; j < d; ++j) rows(k, j) = gauss(rng);
      norm = rows.row(k).norm();
    } while (norm < 1e-8);
    rows.row(k) /= norm;
  }
  emit(plank::vectors_to_json(UnitVectorSet::from_rows(std::move(rows))), out);
  return 0;
}

int run_verify(const std::string& input, bool oracle, double tol, double residual_tol,
               double slack, std::uint64_t seed, const std::string& out) {
  const plank::Instance inst = plank::read_instance(input);
  const UnitVectorSet vs = instance_vectors(inst);
  plank::VerificationOptions opts;
  opts.with_oracle = oracle;
  opts.bound_tol = tol;
  opts.residual_tol = residual_tol;
  opts.oracle_slack = slack;
  opts.seed = seed;
  opts.source = input;
  const plank::VerificationReport rep = plank::run_verification(vs, opts);
  emit(plank::report_to_json(rep), out);
  return rep.overall ? 0 : 1;
}

int run_inv_eigen(const std::string& input, const std::string& quadrant, bool all, bool dual,
                  std::uint64_t seed, const std::string& out) {
  const plank::Instance inst = plank::read_instance(input);
  const GramMatrix& H = inst.gram;
  plank::SolveOptions opts;
  opts.seed = seed;

  ordered_json j;
  j["schema"] = "1";
  j["kind"] = "inverse_eigen";
  j["n"] = H.size();
  int rc = 0;

  if (!quadrant.empty()) {
    const plank::SignPattern q = plank::SignPattern::parse(quadrant);
    if (q.size() != H.size())
      throw std::invalid_argument("quadrant pattern has length " + std::to_string(q.size()) +
                                  ", need " + std::to_string(H.size()));
    j["mode"] = "quadrant";
    const plank::QuadrantResult r = plank::solve_in_quadrant(H, q, opts);
    switch (r.status) {
      case plank::QuadrantStatus::found:
        j["status"] = "found";
        j["solution"] = solution_json(*r.solution, H);
        break;
      case plank::QuadrantStatus::no_solution:
        j["status"] = "no_solution";
        j["detail"] = "the orthant meets the kernel of H away from the origin";
        rc = 1;
        break;
      case plank::QuadrantStatus::no_convergence:
        j["status"] = "no_convergence";
        rc = 1;
        break;
    }
  } else if (all) {
    j["mode"] = "all";
    const std::vector<plank::InverseEigenSolution> sols = plank::enumerate_all(H, opts);
    j["count"] = sols.size();
    j["invertible"] = H.invertible();
    if (H.invertible()) {
      j["expected"] = std::size_t{1} << H.size();
      if (sols.size() != (std::size_t{1} << H.size())) rc = 1;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& s : sols) {
      arr.push_back(solution_json(s, H));
      if (!s.converged) rc = 1;
    }
    j["solutions"] = std::move(arr);
  } else if (dual) {
    j["mode"] = "dual";
    const plank::InverseEigenSolution s = plank::solve_dual(H, opts);  // UnsupportedInput if singular
    j["solution"] = solution_json(s, H);
    if (!s.converged) rc = 1;
  }
  emit(j.dump(2) + "\n", out);
  return rc;
}

int run_trace(const std::string& input, int slice_k, const std::string& vector_file, int samples,
              std::uint64_t seed, const std::string& out) {
  const plank::Instance inst = plank::read_instance(input);
  const UnitVectorSet vs = instance_vectors(inst);
  const GramMatrix H = plank::gram(vs);
  const int n = H.size();

  plank::WitnessOptions wopts;
  wopts.seed = seed;
  const plank::WitnessResult wit = plank::certify_zone_bound(vs, wopts);
  if (!wit.converged)
    throw UnsupportedInput("witness search did not converge; cannot build the conjugated matrix");
  std::optional<plank::ConjugatedMatrix> M;
  try {
    M.emplace(plank::conjugated_matrix(H, wit.w));
  } catch (const std::invalid_argument& e) {
    // a genuine math failure at this stage, not a usage error
    throw UnsupportedInput(std::string("pipeline failed before the conjugated matrix: ") + e.what());
  }

  Eigen::VectorXd v;
  if (slice_k >= 0) {
    if (slice_k >= n)
      throw std::invalid_argument("--slice index " + std::to_string(slice_k) + " out of range [0, " +
                                  std::to_string(n) + ")");
    if (n * M->mat()(slice_k, slice_k) - 1.0 <= 1e-9)
      throw UnsupportedInput("slice " + std::to_string(slice_k) +
                             " is degenerate (n m_kk = 1); pick another coordinate");
    v = plank::coordinate_slice(*M, slice_k);
  } else {
    v = read_direction(vector_file);
    if (v.size() != n)
      throw plank::ParseFailure("direction has " + std::to_string(v.size()) + " entries, need " +
                                std::to_string(n));
  }

  const plank::ProductTrigPoly T = plank::slice_poly(*M, v);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  std::string csv = "theta,T,T1,T2,Q,quadform\n";
  char line[256];
  for (int i = 0; i < samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / samples;
    const auto der = T.eval_derivatives(theta);
    const double q = der.value - std::cos(n * theta);
    const Eigen::VectorXd vt = std::cos(theta) * ones + std::sin(theta) * v;
    const double quadform = vt.dot(M->mat() * vt);
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", theta, der.value,
                  der.first, der.second, q, quadform);
    csv += line;
  }
  emit(csv, out);
  return 0;
}

int run_zones(const std::string& zone_file, const std::string& from_vectors, double width,
              int resolution, const std::string& out) {
  std::vector<plank::Zone> zones;
  if (!from_vectors.empty()) {
    const UnitVectorSet vs = plank::read_vectors(from_vectors);
    if (vs.dim() != 2 && vs.dim() != 3)
      throw UnsupportedInput("zones need directions in R^2 or R^3; got d = " +
                             std::to_string(vs.dim()));
    for (int k = 0; k < vs.count(); ++k) {
      Eigen::Vector3d normal = Eigen::Vector3d::Zero();
      normal.head(vs.dim()) = vs.vector(k);
      zones.emplace_back(normal, width);
    }
  } else {
    zones = plank::read_zones(zone_file);
  }
  if (zones.empty()) throw plank::ParseFailure("zone list is empty");

  const plank::CoverageReport cr = plank::zone_covers(zones, resolution);
  double total = 0.0;
  for (const auto& z : zones) total += z.width();

  ordered_json j;
  j["schema"] = "1";
  j["kind"] = "coverage";
  j["zones"] = zones.size();
  j["resolution"] = resolution;
  j["covered"] = cr.covered;
  j["total_width"] = total;
  j["pi"] = std::numbers::pi;
  j["width_at_least_pi"] = total >= std::numbers::pi - 1e-12;
  if (cr.uncovered_point) {
    j["uncovered_point"] = to_array(*cr.uncovered_point);
    j["margin"] = cr.margin;
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Witness certificates for families of unit vectors: inverse eigenvectors\n"
      "of the Gram matrix, margin bounds, slice-polynomial checks, and sphere\n"
      "zone coverage.  JSON in/out; exit 0 on pass, 1 on a mathematical or\n"
      "unsupported-input failure, 2 on usage or parse errors."};
  app.require_subcommand(1);

  int exit_code = 0;
  std::string out;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* cmd, bool with_seed) {
    cmd->add_option("-o,--output", out, "Write to this file instead of stdout");
    if (with_seed)
      cmd->add_option("--seed", seed, "Seed for randomized starts (default: $PLANK_SEED or 0)");
  };

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a unit-vector family as a JSON vector file");
  int extremal_n = 0;
  std::vector<int> random_nd;
  auto* gen_ex = gen->add_option("--extremal", extremal_n,
                                 "n coplanar unit vectors with equally spaced lines")
                     ->check(CLI::PositiveNumber);
  auto* gen_rn = gen->add_option("--random", random_nd,
                                 "n d: rows are normalized Gaussian samples in R^d")
                     ->expected(2);
  gen_ex->excludes(gen_rn);
  gen_rn->excludes(gen_ex);
  add_common(gen, true);
  gen->callback([&] {
    if (!*gen_ex && !*gen_rn)
      throw CLI::RequiredError("gen: one of --extremal / --random");
    exit_code = run_gen(*gen_ex ? extremal_n : 0, random_nd, seed, out);
  });

  // verify
  auto* ver = app.add_subcommand(
      "verify", "Run the full pipeline (gram, inverse eigenvector, witness, conjugated\n"
                "matrix, slice polynomials, optional brute-force oracle) and report JSON");
  std::string ver_input;
  bool with_oracle = false;
  double bound_tol = 1e-8;
  double residual_tol = 1e-10;
  double oracle_slack = 1e-6;
  ver->add_option("input", ver_input, "Vector or gram file (JSON, or CSV rows)")->required();
  ver->add_flag("--oracle", with_oracle,
                "Cross-check with grid search (d <= 3), exact d=2 optimum, and sign search");
  ver->add_option("--tol", bound_tol, "Tolerance for spectral/diagonal/quadratic bounds")
      ->capture_default_str();
  ver->add_option("--residual-tol", residual_tol, "Inverse-eigenvector convergence tolerance")
      ->capture_default_str();
  ver->add_option("--oracle-slack", oracle_slack, "Slack for oracle comparisons")
      ->capture_default_str();
  add_common(ver, true);
  ver->callback([&] {
    exit_code = run_verify(ver_input, with_oracle, bound_tol, residual_tol, oracle_slack, seed, out);
  });

  // inv-eigen
  auto* ie = app.add_subcommand("inv-eigen",
                                "Solve Hw = w^{-1}: one quadrant, all orthants, or the\n"
                                "distinguished solution of maximal coordinate product");
  std::string ie_input;
  std::string ie_quadrant;
  bool ie_all = false;
  bool ie_dual = false;
  ie->add_option("input", ie_input, "Vector or gram file")->required();
  auto* ie_q = ie->add_option("--quadrant", ie_quadrant, "Sign pattern such as ++- naming the orthant");
  auto* ie_a = ie->add_flag("--all", ie_all, "Enumerate every orthant (n <= 20)");
  auto* ie_d = ie->add_flag("--dual", ie_dual, "Distinguished solution; requires invertible H");
  ie_q->excludes(ie_a)->excludes(ie_d);
  ie_a->excludes(ie_q)->excludes(ie_d);
  ie_d->excludes(ie_q)->excludes(ie_a);
  add_common(ie, true);
  ie->callback([&] {
    if (!*ie_q && !*ie_a && !*ie_d)
      throw CLI::RequiredError("inv-eigen: one of --quadrant / --all / --dual");
    exit_code = run_inv_eigen(ie_input, ie_quadrant, ie_all, ie_dual, seed, out);
  });

  // trace
  auto* tr = app.add_subcommand("trace",
                                "Sample the slice polynomial T, its derivatives, Q = T - cos(n theta),\n"
                                "and the ellipse quadratic form to CSV for plotting");
  std::string tr_input;
  std::string tr_vector;
  int tr_slice = -1;
  int tr_samples = 360;
  tr->add_option("input", tr_input, "Vector or gram file")->required();
  auto* tr_s = tr->add_option("--slice", tr_slice, "Coordinate slice index k (0-based)")
                   ->check(CLI::NonNegativeNumber);
  auto* tr_v = tr->add_option("--vector", tr_vector, "File with a slice direction in R^n");
  tr_s->excludes(tr_v);
  tr_v->excludes(tr_s);
  tr->add_option("--samples", tr_samples, "Rows to emit; theta_i = 2 pi i / samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_common(tr, true);
  tr->callback([&] {
    if (!*tr_s && !*tr_v)
      throw CLI::RequiredError("trace: one of --slice / --vector");
    exit_code = run_trace(tr_input, *tr_s ? tr_slice : -1, tr_vector, tr_samples, seed, out);
  });

  // zones
  auto* zn = app.add_subcommand("zones", "Test whether zones cover the sphere S^2");
  std::string zn_file;
  std::string zn_vectors;
  double zn_width = 0.0;
  int zn_resolution = 6;
  auto* zn_pos = zn->add_option("zonefile", zn_file, "JSON zone file with normals and widths");
  auto* zn_fv = zn->add_option("--from-vectors", zn_vectors,
                               "Vector file; each vector becomes a zone normal (d = 2 or 3)");
  auto* zn_w = zn->add_option("--width", zn_width, "Common zone width for --from-vectors")
                   ->check(CLI::PositiveNumber);
  zn_pos->excludes(zn_fv);
  zn_fv->needs(zn_w);
  zn->add_option("--resolution", zn_resolution, "Icosphere subdivision level for the grid test")
      ->check(CLI::Range(2, 8))
      ->capture_default_str();
  add_common(zn, false);
  zn->callback([&] {
    if (!*zn_pos && !*zn_fv)
      throw CLI::RequiredError("zones: a zone file or --from-vectors");
    exit_code = run_zones(zn_file, zn_vectors, zn_width, zn_resolution, out);
  });

  try {
    seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const plank::ParseFailure& e) {
    if (e.line() > 0)
      std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": "
                << e.what() << "\n";
    else
      std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedInput& e) {
    std::cerr << "unsupported input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
