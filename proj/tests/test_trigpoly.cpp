#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "plank/bounds.hpp"
#include "plank/inverse_eigen.hpp"
#include "plank/trigpoly.hpp"
#include "support.hpp"

using namespace plank;
constexpr double pi = std::numbers::pi;

namespace {

ConjugatedMatrix extremal3_matrix() {
  const double s = std::sqrt(3.0);
  Eigen::VectorXd w(3);
  w << 1 / s, 2 / s, -2 / s;
  return conjugated_matrix(gram(extremal_configuration(3)), w);
}

}  // namespace

TEST_CASE("product polynomial evaluates factor by factor") {
  Eigen::VectorXd a(2);
  a << 1, -1;
  const ProductTrigPoly T(a);  // (cos+sin)(cos-sin) = cos 2theta
  for (double th : {0.0, 0.3, 1.1, 2.9, 4.2})
    CHECK(T.eval(th) == doctest::Approx(std::cos(2 * th)).epsilon(1e-14));

  const auto d = T.eval_derivatives(0.7);
  CHECK(d.value == doctest::Approx(std::cos(1.4)).epsilon(1e-14));
  CHECK(d.first == doctest::Approx(-2 * std::sin(1.4)).epsilon(1e-13));
  CHECK(d.second == doctest::Approx(-4 * std::cos(1.4)).epsilon(1e-13));
}

TEST_CASE("derivatives at zero match the closed forms") {
  Eigen::VectorXd a(4);
  a << 0.5, -1.5, 2.0, 0.25;
  const ProductTrigPoly T(a);
  const auto d = T.eval_derivatives(0.0);
  CHECK(d.value == 1.0);  // every factor is exactly 1
  CHECK(d.first == doctest::Approx(a.sum()).epsilon(1e-14));
  CHECK(d.second == doctest::Approx(a.sum() * a.sum() - a.squaredNorm() - 4).epsilon(1e-13));
}

TEST_CASE("derivatives agree with finite differences") {
  Eigen::VectorXd a(5);
  a << 0.3, -0.8, 1.7, -2.2, 0.9;
  const ProductTrigPoly T(a);
  const double h = 1e-6;
  for (double th : {0.0, 0.4, 1.3, 3.0}) {
    const auto d = T.eval_derivatives(th);
    const double fd1 = (T.eval(th + h) - T.eval(th - h)) / (2 * h);
    const double fd2 = (T.eval(th + h) - 2 * T.eval(th) + T.eval(th - h)) / (h * h);
    CHECK(d.first == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(d.second == doctest::Approx(fd2).epsilon(1e-3));
  }
}

TEST_CASE("fourier expansion is exact") {
  Eigen::VectorXd a(3);
  a << 0.4, -1.1, 2.3;
  const ProductTrigPoly T(a);
  const FourierForm F = to_fourier(T);
  CHECK(F.degree() == 3);
  for (int i = 0; i < 64; ++i) {
    const double th = 2 * pi * i / 64;
    CHECK(F.eval(th) == doctest::Approx(T.eval(th)).epsilon(1e-13));
    CHECK(F.eval_derivative(th) == doctest::Approx(T.eval_derivatives(th).first).epsilon(1e-12));
    CHECK(F.eval_second(th) == doctest::Approx(T.eval_derivatives(th).second).epsilon(1e-12));
  }
}

TEST_CASE("single factor fourier coefficients") {
  Eigen::VectorXd a(1);
  a << 2.5;
  const FourierForm F = to_fourier(ProductTrigPoly(a));
  CHECK(F.cos_coeffs[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(F.cos_coeffs[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(F.sin_coeffs[1] == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("bernstein comparison on cos n theta") {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(4), s = Eigen::VectorXd::Zero(4);
  c[3] = 1.0;  // cos 3theta
  const FourierForm F{c, s};
  const BernsteinReport b = bernstein_check(F, 4096);
  CHECK(b.sup_value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(b.sup_first == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(b.sup_second == doctest::Approx(9.0).epsilon(1e-6));
  CHECK(b.first_ok);   // equality case, tolerance absorbs the grid gap
  CHECK(b.second_ok);
  CHECK_THROWS_AS(bernstein_check(F, 100), std::invalid_argument);
}

TEST_CASE("extremal slice polynomial is cos n theta") {
  const ConjugatedMatrix M = extremal3_matrix();
  const Eigen::VectorXd v = coordinate_slice(M, 1);
  CHECK(std::abs(v.sum()) <= 1e-12);
  CHECK(v.dot(M.mat() * v) == doctest::Approx(3.0).epsilon(1e-12));

  const ProductTrigPoly T = slice_poly(M, v);
  for (double th : {0.0, 0.5, 1.4, 2.7})
    CHECK(T.eval(th) == doctest::Approx(std::cos(3 * th)).epsilon(1e-12));

  const FourierForm F = to_fourier(T);
  const QDecomposition qd = q_decompose(F, 3);
  CHECK(qd.residual <= 1e-12);
  const RootCount rc = count_roots(q_form(F, 3), 4096 * 3);
  CHECK(rc.identically_zero);
  CHECK(rc.count == 0);
}

TEST_CASE("coordinate slice needs a nondegenerate diagonal entry") {
  const ConjugatedMatrix M = extremal3_matrix();
  CHECK_THROWS_AS(coordinate_slice(M, 0), std::invalid_argument);  // m_00 = 1/3, n m - 1 = 0
}

TEST_CASE("q_decompose rejects polynomials without the double contact") {
  Eigen::VectorXd a(2);
  a << 1.0, 1.0;  // T'(0) = 2
  CHECK_THROWS_AS(q_decompose(to_fourier(ProductTrigPoly(a)), 2), std::invalid_argument);
}

TEST_CASE("count_roots sees the sign changes of cos 2theta") {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(3), s = Eigen::VectorXd::Zero(3);
  c[2] = 1.0;
  const RootCount rc = count_roots(FourierForm{c, s}, 4096 * 2);
  CHECK(rc.count == 4);
  CHECK_FALSE(rc.identically_zero);
}

TEST_CASE("alpha slice fixture in dimension two") {
  Eigen::MatrixXd m(2, 2);
  m << 2, -1, -1, 2;
  const ConjugatedMatrix M = ConjugatedMatrix::from_entries(m);
  const AlphaSlice sl = alpha_slice(M, 0);
  CHECK(sl.alpha == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(sl.slope_k == doctest::Approx(-1.0).epsilon(1e-12));  // -cot(pi/4)
  CHECK(sl.root_theta == doctest::Approx(pi / 4).epsilon(1e-12));
  CHECK(sl.v_k[0] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-12));
  CHECK(sl.v_k[1] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-12));
  for (double th : {0.2, 0.9, 2.2})
    CHECK(sl.poly.eval(th) == doctest::Approx(std::cos(2 * th)).epsilon(1e-12));
}

TEST_CASE("alpha slice requires an oversized diagonal entry") {
  // the genuine extremal matrix sits exactly at the threshold
  CHECK_THROWS_AS(alpha_slice(extremal3_matrix(), 1), std::invalid_argument);
}

TEST_CASE("contradiction certificate for the two dimensional fixture") {
  Eigen::MatrixXd m(2, 2);
  m << 2, -1, -1, 2;
  const ConjugatedMatrix M = ConjugatedMatrix::from_entries(m);
  const ContradictionCertificate cert = contradiction_search(M, 0);
  REQUIRE(cert.found);
  CHECK(std::abs(cert.quadform - 2.0) <= 1e-9);
  CHECK(cert.product == doctest::Approx(3.0).epsilon(1e-9));
  const double s = std::sqrt(3.0);
  const double aligned = std::min((cert.b - Eigen::Vector2d(-1 / s, 1 / s)).norm(),
                                  (cert.b + Eigen::Vector2d(-1 / s, 1 / s)).norm());
  CHECK(aligned <= 1e-9);
}

TEST_CASE("contradiction certificates across bumped matrices") {
  for (int n = 2; n <= 5; ++n) {
    const ConjugatedMatrix M = testsup::bumped_matrix(n, n / 2, 0.3, 0.4);
    const ContradictionCertificate cert = contradiction_search(M, n / 2);
    REQUIRE(cert.found);
    CHECK(std::abs(cert.quadform - n) <= 1e-9);
    CHECK(cert.product >= 1.0 + 1e-9);
    CHECK(cert.scale > 1.0);
  }
}

TEST_CASE("alpha slice q decomposition on bumped matrices") {
  for (int n = 2; n <= 5; ++n) {
    const ConjugatedMatrix M = testsup::bumped_matrix(n, 0, 0.8, 0.25);
    const AlphaSlice sl = alpha_slice(M, 0);
    CHECK(sl.slope_k ==
          doctest::Approx(-1.0 / std::tan(pi / (2 * n))).epsilon(1e-10));
    CHECK(sl.root_theta == doctest::Approx(pi / (2 * n)).epsilon(1e-12));
    const FourierForm F = to_fourier(sl.poly);
    const QDecomposition qd = q_decompose(F, n);
    CHECK(qd.residual <= 1e-10);
    CHECK(qd.psi.degree() <= std::max(0, n - 2));
    CHECK(count_roots(q_form(F, n), 4096 * n).count <= 2 * n - 2);
  }
}

TEST_CASE("slice polynomials from the pipeline stay below one") {
  const UnitVectorSet vs = testsup::random_invertible_set(5, 61);
  const GramMatrix H = gram(vs);
  const auto sol = solve_dual(H);
  const ConjugatedMatrix M = conjugated_matrix(H, sol.w);
  for (int k = 0; k < 5; ++k) {
    if (5 * M.mat()(k, k) - 1.0 <= 1e-6) continue;
    const FourierForm F = to_fourier(slice_poly(M, coordinate_slice(M, k)));
    const BernsteinReport b = bernstein_check(F, 1024 * 5);
    CHECK(b.sup_value <= 1.0 + 1e-9);
    CHECK(b.first_ok);
    CHECK(b.second_ok);
    CHECK(q_decompose(F, 5).residual <= 1e-10);
  }
}
