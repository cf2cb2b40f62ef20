#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "plank/bounds.hpp"
#include "plank/errors.hpp"
#include "plank/inverse_eigen.hpp"
#include "support.hpp"

using namespace plank;

namespace {
double linf(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_CASE("residual at the identity solution is zero") {
  const Eigen::VectorXd w = Eigen::VectorXd::Ones(4);
  CHECK(linf(inverse_eigen_residual(Eigen::MatrixXd::Identity(4, 4), w)) == 0.0);
  CHECK_THROWS_AS(inverse_eigen_residual(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 0)),
                  std::invalid_argument);
}

TEST_CASE("newton converges inside the orthant") {
  Eigen::VectorXd start(3);
  start << 2, 2, 2;
  const auto sol = newton_inverse_eigen(Eigen::MatrixXd::Identity(3, 3), start);
  CHECK(sol.converged);
  CHECK(sol.residual <= 1e-10);
  CHECK((sol.w - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(sol.quadrant.str() == "+++");
}

TEST_CASE("hand quadrant solution of the extremal triple") {
  const GramMatrix H = gram(extremal_configuration(3));
  const auto r = solve_in_quadrant(H, SignPattern::parse("++-"));
  REQUIRE(r.status == QuadrantStatus::found);
  const Eigen::VectorXd& w = r.solution->w;
  const double s = std::sqrt(3.0);
  CHECK(std::abs(w[0] - 1 / s) <= 1e-9);
  CHECK(std::abs(w[1] - 2 / s) <= 1e-9);
  CHECK(std::abs(w[2] + 2 / s) <= 1e-9);
  CHECK(r.solution->residual <= 1e-10);
  CHECK(std::abs(w.dot(H.mat() * w) - 3.0) <= 1e-8);
}

TEST_CASE("quadrants meeting the kernel have no solution") {
  const GramMatrix H = gram(extremal_configuration(3));
  // kernel direction (1,-1,1)
  CHECK(quadrant_meets_kernel(H, SignPattern::parse("+-+")));
  CHECK(quadrant_meets_kernel(H, SignPattern::parse("-+-")));
  CHECK_FALSE(quadrant_meets_kernel(H, SignPattern::parse("++-")));

  CHECK(solve_in_quadrant(H, SignPattern::parse("+-+")).status == QuadrantStatus::no_solution);
  CHECK_FALSE(quadrant_meets_kernel(GramMatrix::from_entries(Eigen::MatrixXd::Identity(3, 3)),
                                    SignPattern::parse("-+-")));
}

TEST_CASE("enumerate_all on the identity lists every sign vector") {
  const GramMatrix H = GramMatrix::from_entries(Eigen::MatrixXd::Identity(3, 3));
  const auto sols = enumerate_all(H);
  REQUIRE(sols.size() == 8);
  std::set<std::string> quadrants;
  for (const auto& s : sols) {
    quadrants.insert(s.quadrant.str());
    CHECK(s.converged);
    CHECK(s.residual <= 1e-10);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(std::abs(s.w[i]) - 1.0) <= 1e-10);
  }
  CHECK(quadrants.size() == 8);
}

TEST_CASE("enumerate_all skips exactly the kernel quadrants") {
  const auto sols = enumerate_all(gram(extremal_configuration(3)));
  CHECK(sols.size() == 6);
  std::set<std::string> found;
  for (const auto& s : sols) found.insert(s.quadrant.str());
  CHECK(found.count("+-+") == 0);
  CHECK(found.count("-+-") == 0);
}

TEST_CASE("repeated vector admits only the diagonal solutions") {
  Eigen::MatrixXd rows(2, 2);
  rows << 1, 0, 1, 0;
  const auto sols = enumerate_all(gram(UnitVectorSet::from_rows(rows)));
  REQUIRE(sols.size() == 2);
  for (const auto& s : sols) {
    CHECK(std::abs(std::abs(s.w[0]) - 1 / std::sqrt(2.0)) <= 1e-10);
    CHECK(s.w[0] == doctest::Approx(s.w[1]).epsilon(1e-10));
  }
}

TEST_CASE("solve_dual respects the sharp sup-norm bound") {
  for (int n : {2, 4, 6, 8}) {
    const UnitVectorSet vs = testsup::random_invertible_set(n, 40 + static_cast<unsigned>(n));
    const GramMatrix H = gram(vs);
    const auto sol = solve_dual(H);
    CHECK(sol.converged);
    CHECK(sol.residual <= 1e-10);
    CHECK(std::abs(sol.w.dot(H.mat() * sol.w) - n) <= 1e-8);
    CHECK(linf(sol.w) <= inverse_vector_sup_bound(n) + 1e-8);
  }
}

TEST_CASE("solve_dual is deterministic") {
  const UnitVectorSet vs = testsup::random_invertible_set(5, 17);
  const GramMatrix H = gram(vs);
  SolveOptions opts;
  opts.seed = 3;
  const auto a = solve_dual(H, opts);
  const auto b = solve_dual(H, opts);
  CHECK(a.quadrant.str() == b.quadrant.str());
  CHECK((a.w - b.w).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solve_dual refuses singular gram matrices") {
  CHECK_THROWS_AS(solve_dual(gram(extremal_configuration(3))), UnsupportedInput);
}

TEST_CASE("w bound report on the extremal equality case") {
  const GramMatrix H = gram(extremal_configuration(3));
  const auto r = solve_in_quadrant(H, SignPattern::parse("++-"));
  REQUIRE(r.status == QuadrantStatus::found);
  const WBoundReport b = verify_w_bounds(*r.solution, 3);
  CHECK(b.sharp_limit == doctest::Approx(2 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::abs(b.sup_norm - b.sharp_limit) <= 1e-10);  // attained exactly here
  CHECK(b.sharp);
  CHECK(b.bang);
  CHECK(b.strong);
}

TEST_CASE("enumerate_all rejects oversized problems") {
  CHECK_THROWS_AS(enumerate_all(GramMatrix::from_entries(Eigen::MatrixXd::Identity(21, 21))),
                  UnsupportedInput);
}
