#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "plank/geometry.hpp"
#include "support.hpp"

using namespace plank;
constexpr double pi = std::numbers::pi;

TEST_CASE("unit vector set validates row norms") {
  Eigen::MatrixXd good(2, 2);
  good << 1, 0, 0, -1;
  CHECK(UnitVectorSet::from_rows(good).count() == 2);

  Eigen::MatrixXd bad(1, 2);
  bad << 1.0, 1e-5;  // norm deviates by 5e-11, past the 1e-12 gate
  CHECK_THROWS_AS(UnitVectorSet::from_rows(bad), std::invalid_argument);
}

TEST_CASE("gram of the extremal triple") {
  const GramMatrix H = gram(extremal_configuration(3));
  CHECK(H.size() == 3);
  CHECK(H.mat()(0, 0) == 1.0);
  CHECK(H.mat()(1, 1) == 1.0);
  CHECK(H.mat()(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(H.mat()(0, 2) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(H.mat()(1, 2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK((H.mat() - H.mat().transpose()).norm() == 0.0);
  CHECK_FALSE(H.invertible());
  CHECK(H.min_eigenvalue() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("extremal configuration angles") {
  const UnitVectorSet vs = extremal_configuration(3);
  CHECK(vs.dim() == 2);
  for (int k = 0; k < 3; ++k) {
    const double theta = k * pi / 3;
    CHECK(vs.rows()(k, 0) == doctest::Approx(std::cos(theta)).epsilon(1e-15));
    CHECK(vs.rows()(k, 1) == doctest::Approx(std::sin(theta)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(extremal_configuration(0), std::invalid_argument);
}

TEST_CASE("gram matrix construction rejects bad input") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.4, 1;
  CHECK_THROWS_AS(GramMatrix::from_entries(asym), std::invalid_argument);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(GramMatrix::from_entries(indefinite), std::invalid_argument);

  Eigen::MatrixXd scaled(2, 2);
  scaled << 2, 0, 0, 2;
  CHECK_THROWS_AS(GramMatrix::from_entries(scaled), std::invalid_argument);

  CHECK(GramMatrix::from_entries(Eigen::MatrixXd::Identity(4, 4)).invertible());
}

TEST_CASE("sign patterns") {
  const SignPattern q = SignPattern::parse("++-");
  CHECK(q.size() == 3);
  CHECK(q[0] == 1);
  CHECK(q[2] == -1);
  CHECK(q.str() == "++-");
  CHECK(q.flipped().str() == "--+");
  CHECK(q == SignPattern::parse("++-"));
  CHECK(SignPattern::all_plus(2).str() == "++");
  CHECK_THROWS_AS(SignPattern::parse("+x"), std::invalid_argument);
  CHECK_THROWS_AS(SignPattern::parse(""), std::invalid_argument);

  // minus sorts first
  CHECK(SignPattern::parse("--").lex_less(SignPattern::parse("-+")));
  CHECK(SignPattern::parse("-+").lex_less(SignPattern::parse("+-")));
  CHECK_FALSE(SignPattern::parse("++").lex_less(SignPattern::parse("++")));
}

TEST_CASE("kernel basis") {
  CHECK(kernel_basis(GramMatrix::from_entries(Eigen::MatrixXd::Identity(3, 3))).empty());

  const auto basis = kernel_basis(gram(extremal_configuration(3)));
  REQUIRE(basis.size() == 1);
  CHECK(basis[0].norm() == doctest::Approx(1.0).epsilon(1e-12));
  // direction (1,-1,1)/sqrt(3)
  Eigen::Vector3d expected(1, -1, 1);
  expected /= std::sqrt(3.0);
  CHECK(std::abs(basis[0].dot(expected)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("icosphere sizes and norms") {
  CHECK(icosphere_vertices(0).size() == 12);
  CHECK(icosphere_vertices(1).size() == 42);
  CHECK(icosphere_vertices(2).size() == 162);
  for (const auto& v : icosphere_vertices(2)) CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zone membership") {
  const Zone z(Eigen::Vector3d(0, 0, 1), pi / 2);
  CHECK(z.sin_half_width() == doctest::Approx(std::sin(pi / 4)).epsilon(1e-15));
  CHECK(z.contains(Eigen::Vector3d(1, 0, 0)));
  CHECK(z.contains(Eigen::Vector3d(std::sqrt(0.5), 0, std::sqrt(0.5))));  // boundary
  CHECK_FALSE(z.contains(Eigen::Vector3d(0, 0, 1)));
}

TEST_CASE("extremal zones cover exactly at width pi/3") {
  const UnitVectorSet vs = extremal_configuration(3);
  std::vector<Zone> zones;
  for (int k = 0; k < 3; ++k)
    zones.emplace_back(Eigen::Vector3d(vs.rows()(k, 0), vs.rows()(k, 1), 0), pi / 3);

  const CoverageReport full = zone_covers(zones, 6);
  CHECK(full.covered);
  CHECK_FALSE(full.uncovered_point.has_value());

  std::vector<Zone> shrunk;
  for (int k = 0; k < 3; ++k)
    shrunk.emplace_back(zones[k].normal(), 0.95 * pi / 3);
  const CoverageReport gap = zone_covers(shrunk, 6);
  CHECK_FALSE(gap.covered);
  REQUIRE(gap.uncovered_point.has_value());
  CHECK(gap.margin > 1.0);
  // the hole opens along the first configuration vector
  const double align = std::abs(gap.uncovered_point->dot(Eigen::Vector3d(1, 0, 0)));
  CHECK(std::acos(std::min(1.0, align)) < 1e-2);
}

TEST_CASE("single zone leaves its poles uncovered") {
  const std::vector<Zone> zones{Zone(Eigen::Vector3d(0, 0, 1), 1.0)};
  const CoverageReport r = zone_covers(zones, 3);
  CHECK_FALSE(r.covered);
  REQUIRE(r.uncovered_point.has_value());
  CHECK(std::abs((*r.uncovered_point)(2)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("zone_covers validates resolution") {
  const std::vector<Zone> zones{Zone(Eigen::Vector3d(0, 0, 1), 3.0)};
  CHECK_THROWS_AS(zone_covers(zones, 1), std::invalid_argument);
}
