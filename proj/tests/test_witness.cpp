#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "plank/bounds.hpp"
#include "plank/inverse_eigen.hpp"
#include "plank/witness.hpp"
#include "support.hpp"

using namespace plank;

TEST_CASE("extremal triple witness attains the bound") {
  const UnitVectorSet vs = extremal_configuration(3);
  const WitnessResult r = maximize_product(vs);
  CHECK(r.certified);
  CHECK(r.converged);
  CHECK(r.stationarity <= 1e-9);
  CHECK(r.bound == doctest::Approx(std::sqrt(3.0) * 0.5).epsilon(1e-15));
  CHECK(std::abs(r.min_margin - r.bound) <= 1e-9);
  CHECK(std::abs(r.v.norm() - std::sqrt(3.0)) <= 1e-10);

  std::vector<double> m(r.margins.data(), r.margins.data() + 3);
  std::sort(m.begin(), m.end());
  const double s = std::sqrt(3.0);
  CHECK(std::abs(m[0] - s / 2) <= 1e-9);
  CHECK(std::abs(m[1] - s / 2) <= 1e-9);
  CHECK(std::abs(m[2] - s) <= 1e-9);
}

TEST_CASE("witness margins and w are reciprocal") {
  const UnitVectorSet vs = testsup::random_set(6, 3, 11);
  const WitnessResult r = maximize_product(vs);
  REQUIRE(r.converged);
  for (int k = 0; k < 6; ++k)
    CHECK(std::abs(r.margins[k] * std::abs(r.w[k]) - 1.0) <= 1e-9);
  CHECK(std::abs(r.v.squaredNorm() - 6.0) <= 1e-10);
  CHECK(r.unit_min_margin() == doctest::Approx(r.min_margin / std::sqrt(6.0)).epsilon(1e-14));
}

TEST_CASE("orthonormal frame margins are all equal") {
  const UnitVectorSet vs = UnitVectorSet::from_rows(Eigen::MatrixXd::Identity(3, 3));
  const WitnessResult r = maximize_product(vs);
  CHECK(r.certified);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r.margins[k] - 1.0) <= 1e-9);
  // unit-normalized: 1/sqrt(3) against floor sin(pi/6) = 1/2
  CHECK(r.unit_min_margin() == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-9));
}

TEST_CASE("witness_from_w reproduces the algebraic construction") {
  const UnitVectorSet vs = extremal_configuration(3);
  Eigen::VectorXd w(3);
  const double s = std::sqrt(3.0);
  w << 1 / s, 2 / s, -2 / s;
  const WitnessResult r = witness_from_w(vs, w);
  CHECK(r.path == WitnessPath::dual);
  CHECK(r.certified);
  CHECK(std::abs(std::abs(r.v[0]) - s) <= 1e-9);
  CHECK(std::abs(r.v[1]) <= 1e-9);

  CHECK_THROWS_AS(witness_from_w(vs, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST_CASE("duplicated vector still certifies") {
  Eigen::MatrixXd rows(2, 3);
  rows << 1, 0, 0, 1, 0, 0;
  const WitnessResult r = maximize_product(UnitVectorSet::from_rows(rows));
  CHECK(r.certified);
  CHECK(std::abs(r.min_margin - std::sqrt(2.0)) <= 1e-9);
}

TEST_CASE("conjugated matrix of the extremal triple") {
  const GramMatrix H = gram(extremal_configuration(3));
  Eigen::VectorXd w(3);
  const double s = std::sqrt(3.0);
  w << 1 / s, 2 / s, -2 / s;
  const ConjugatedMatrix M = conjugated_matrix(H, w);

  Eigen::MatrixXd expected(3, 3);
  expected << 1 / 3.0, 1 / 3.0, 1 / 3.0, 1 / 3.0, 4 / 3.0, -2 / 3.0, 1 / 3.0, -2 / 3.0, 4 / 3.0;
  CHECK((M.mat() - expected).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(M.row_sum_error() <= 1e-12);
  CHECK(M.mat()(1, 1) == doctest::Approx(w[1] * w[1]).epsilon(1e-12));

  CHECK_THROWS_AS(conjugated_matrix(H, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST_CASE("matrix bounds on the extremal triple hit both limits") {
  const GramMatrix H = gram(extremal_configuration(3));
  Eigen::VectorXd w(3);
  const double s = std::sqrt(3.0);
  w << 1 / s, 2 / s, -2 / s;
  const MatrixBoundReport b = check_matrix_bounds(conjugated_matrix(H, w));
  CHECK(b.all_ok());
  CHECK(std::abs(b.lambda_max - 2.0) <= 1e-10);
  CHECK(b.spectral_limit == 2.0);
  CHECK(std::abs(b.diag_max - 4 / 3.0) <= 1e-10);
  CHECK(b.diag_upper_limit == doctest::Approx(4 / 3.0).epsilon(1e-14));
  CHECK(std::abs(b.diag_min - 1 / 3.0) <= 1e-10);
  CHECK(b.diag_lower_limit == doctest::Approx(1 / 3.0).epsilon(1e-14));
}

TEST_CASE("from_entries validates conjugated matrices") {
  Eigen::MatrixXd bad_rows(2, 2);
  bad_rows << 0.6, 0.6, 0.6, 0.6;  // row sums 1.2
  CHECK_THROWS_AS(ConjugatedMatrix::from_entries(bad_rows), std::invalid_argument);

  Eigen::MatrixXd fixture(2, 2);
  fixture << 2, -1, -1, 2;
  CHECK(ConjugatedMatrix::from_entries(fixture).min_eigenvalue() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("strong norm inequality for the witness vector family") {
  const UnitVectorSet vs = testsup::random_invertible_set(5, 23);
  const WitnessResult r = certify_zone_bound(vs);
  REQUIRE(r.converged);
  const int n = 5;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x[i] = g(rng);
    const Eigen::VectorXd combo = vs.rows().transpose() * (r.w.cwiseProduct(x));
    CHECK(combo.norm() <= std::sqrt(n - 1.0) * x.norm() + 1e-8);
  }
}

TEST_CASE("certify_zone_bound picks a working path") {
  const WitnessResult direct = certify_zone_bound(extremal_configuration(3));
  CHECK(direct.path == WitnessPath::direct);  // singular gram, dual unavailable
  CHECK(direct.certified);

  const WitnessResult dual = certify_zone_bound(extremal_configuration(2));
  CHECK(dual.path == WitnessPath::dual);
  CHECK(dual.certified);
  CHECK(std::abs(dual.min_margin - 1.0) <= 1e-9);  // sqrt(2) sin(pi/4)
}

TEST_CASE("certification is deterministic") {
  const UnitVectorSet vs = testsup::random_set(6, 4, 31);
  WitnessOptions opts;
  opts.seed = 5;
  const WitnessResult a = certify_zone_bound(vs, opts);
  const WitnessResult b = certify_zone_bound(vs, opts);
  CHECK((a.v - b.v).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.min_margin == b.min_margin);
}

TEST_CASE("random instances certify across dimensions") {
  for (int s = 0; s < 25; ++s) {
    const int n = 2 + s % 7;
    const int d = 2 + s % std::max(1, n - 1);
    const UnitVectorSet vs = testsup::random_set(n, std::min(n, d), 300 + s);
    WitnessOptions opts;
    opts.seed = s;
    const WitnessResult r = certify_zone_bound(vs, opts);
    CHECK(r.certified);
    CHECK(r.min_margin >= witness_margin_bound(n) - 1e-9);
  }
}
