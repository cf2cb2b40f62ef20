#include "plank/trigpoly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plank/bounds.hpp"

namespace plank {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double golden_section_max(double lo, double hi, const auto& f) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace

ProductTrigPoly::ProductTrigPoly(Eigen::VectorXd slopes) : slopes_(std::move(slopes)) {
  if (slopes_.size() < 1) throw std::invalid_argument("slice polynomial needs n >= 1 slopes");
}

double ProductTrigPoly::eval(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  double p = 1.0;
  for (int j = 0; j < slopes_.size(); ++j) p *= c + slopes_(j) * s;
  return p;
}

ProductTrigPoly::Derivatives ProductTrigPoly::eval_derivatives(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  // Running product with its first two derivatives; each factor f_j satisfies
  // f_j'' = -f_j, which keeps the recurrence to three terms.
  double p = 1.0, p1 = 0.0, p2 = 0.0;
  for (int j = 0; j < slopes_.size(); ++j) {
    const double f = c + slopes_(j) * s;
    const double f1 = -s + slopes_(j) * c;
    const double np2 = p2 * f + 2.0 * p1 * f1 - p * f;
    const double np1 = p1 * f + p * f1;
    p2 = np2;
    p1 = np1;
    p *= f;
  }
  return {p, p1, p2};
}

double FourierForm::eval(double theta) const {
  double acc = cos_coeffs(0);
  for (int k = 1; k < cos_coeffs.size(); ++k)
    acc += cos_coeffs(k) * std::cos(k * theta) + sin_coeffs(k) * std::sin(k * theta);
  return acc;
}

double FourierForm::eval_derivative(double theta) const {
  double acc = 0.0;
  for (int k = 1; k < cos_coeffs.size(); ++k)
    acc += k * (sin_coeffs(k) * std::cos(k * theta) - cos_coeffs(k) * std::sin(k * theta));
  return acc;
}

double FourierForm::eval_second(double theta) const {
  double acc = 0.0;
  for (int k = 1; k < cos_coeffs.size(); ++k)
    acc -= static_cast<double>(k) * k *
           (cos_coeffs(k) * std::cos(k * theta) + sin_coeffs(k) * std::sin(k * theta));
  return acc;
}

FourierForm to_fourier(const ProductTrigPoly& T) {
  const int n = T.degree();
  // cos t + a sin t = (1 - ia)/2 e^{it} + (1 + ia)/2 e^{-it}; multiply out in
  // the exponential basis, indices shifted by the current degree.
  std::vector<std::complex<double>> cur = {{1.0, 0.0}};
  for (int j = 0; j < n; ++j) {
    const std::complex<double> up{0.5, -0.5 * T.slopes()(j)};
    const std::complex<double> down{0.5, 0.5 * T.slopes()(j)};
    std::vector<std::complex<double>> next(cur.size() + 2, {0.0, 0.0});
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 2] += cur[i] * up;
      next[i] += cur[i] * down;
    }
    cur = std::move(next);
  }
  FourierForm F;
  F.cos_coeffs = Eigen::VectorXd::Zero(n + 1);
  F.sin_coeffs = Eigen::VectorXd::Zero(n + 1);
  F.cos_coeffs(0) = cur[n].real();
  for (int k = 1; k <= n; ++k) {
    F.cos_coeffs(k) = 2.0 * cur[n + k].real();
    F.sin_coeffs(k) = -2.0 * cur[n + k].imag();
  }
  return F;
}

ProductTrigPoly slice_poly(const ConjugatedMatrix& M, const Eigen::VectorXd& v) {
  if (v.size() != M.size())
    throw std::invalid_argument("slice direction length must match the matrix");
  return ProductTrigPoly(M.mat() * v);
}

BernsteinReport bernstein_check(const FourierForm& F, int grid, double tol) {
  const int n = std::max(F.degree(), 1);
  if (grid < 1024 * n)
    throw std::invalid_argument("need at least 1024 grid points per degree");
  BernsteinReport r;
  r.grid = grid;
  for (int i = 0; i < grid; ++i) {
    const double theta = kTwoPi * i / grid;
    r.sup_value = std::max(r.sup_value, std::abs(F.eval(theta)));
    r.sup_first = std::max(r.sup_first, std::abs(F.eval_derivative(theta)));
    r.sup_second = std::max(r.sup_second, std::abs(F.eval_second(theta)));
  }
  r.first_ok = r.sup_first <= n * r.sup_value + tol;
  r.second_ok = r.sup_second <= static_cast<double>(n) * n * r.sup_value + tol;
  return r;
}

FourierForm q_form(const FourierForm& F, int n) {
  if (F.degree() > n) throw std::invalid_argument("form degree exceeds n");
  FourierForm Q;
  Q.cos_coeffs = Eigen::VectorXd::Zero(n + 1);
  Q.sin_coeffs = Eigen::VectorXd::Zero(n + 1);
  Q.cos_coeffs.head(F.cos_coeffs.size()) = F.cos_coeffs;
  Q.sin_coeffs.head(F.sin_coeffs.size()) = F.sin_coeffs;
  Q.cos_coeffs(n) -= 1.0;
  return Q;
}

QDecomposition q_decompose(const FourierForm& F, int n) {
  if (F.degree() > n) throw std::invalid_argument("form degree exceeds n");
  const double at0 = F.eval(0.0);
  if (std::abs(at0 - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "slice value at 0 must be 1, got " << at0;
    throw std::invalid_argument(msg.str());
  }
  const double d0 = F.eval_derivative(0.0);
  if (std::abs(d0) > 1e-8) {
    std::ostringstream msg;
    msg << "slice derivative at 0 must vanish, got " << d0
        << "; the difference with cos(n theta) has no sin^2 factor otherwise";
    throw std::invalid_argument(msg.str());
  }

  const FourierForm Q = q_form(F, n);
  const int m = std::max(n - 2, 0);  // degree of psi

  // Unknowns: psi cosine coefficients p_0..p_m then sine coefficients q_1..q_m.
  // Map each basis element through multiplication by sin^2 = 1/2 - cos(2t)/2
  // into (c_0..c_n, s_1..s_n) coordinate rows.
  const int cols = (n >= 2) ? (2 * m + 1) : 0;
  const int rows = 2 * n + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
  const auto c_row = [](int k) { return k; };
  const auto s_row = [n](int k) { return n + k; };
  const auto add_cos = [&](int k, double val, int col) {
    // cos(-kt) = cos(kt)
    A(c_row(std::abs(k)), col) += val;
  };
  const auto add_sin = [&](int k, double val, int col) {
    // sin(-kt) = -sin(kt), sin(0) drops out
    if (k == 0) return;
    if (k < 0)
      A(s_row(-k), col) -= val;
    else
      A(s_row(k), col) += val;
  };
  for (int k = 0; k <= m && cols > 0; ++k) {
    const int col = k;  // basis cos(kt)
    add_cos(k, 0.5, col);
    // cos(2t) cos(kt) = (cos((k+2)t) + cos((k-2)t)) / 2
    add_cos(k + 2, -0.25, col);
    add_cos(k - 2, -0.25, col);
  }
  for (int k = 1; k <= m; ++k) {
    const int col = m + k;  // basis sin(kt)
    add_sin(k, 0.5, col);
    // cos(2t) sin(kt) = (sin((k+2)t) + sin((k-2)t)) / 2
    add_sin(k + 2, -0.25, col);
    add_sin(k - 2, -0.25, col);
  }

  Eigen::VectorXd rhs(rows);
  rhs.head(n + 1) = Q.cos_coeffs;
  rhs.tail(n) = Q.sin_coeffs.tail(n);

  QDecomposition out;
  out.psi.cos_coeffs = Eigen::VectorXd::Zero(m + 1);
  out.psi.sin_coeffs = Eigen::VectorXd::Zero(m + 1);
  if (cols > 0) {
    const Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);
    out.psi.cos_coeffs = x.head(m + 1);
    out.psi.sin_coeffs.tail(m) = x.tail(m);
  }

  constexpr int kResidualGrid = 4096;
  for (int i = 0; i < kResidualGrid; ++i) {
    const double theta = kTwoPi * i / kResidualGrid;
    const double s = std::sin(theta);
    const double err = std::abs(Q.eval(theta) - s * s * out.psi.eval(theta));
    out.residual = std::max(out.residual, err);
  }
  return out;
}

RootCount count_roots(const FourierForm& F, int grid) {
  const int n = std::max(F.degree(), 1);
  if (grid < 4096 * n)
    throw std::invalid_argument("need at least 4096 grid points per degree");
  constexpr double kZero = 1e-12;

  std::vector<double> theta;
  std::vector<int> sign;
  theta.reserve(grid);
  double sup = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = kTwoPi * i / grid;
    const double val = F.eval(t);
    sup = std::max(sup, std::abs(val));
    if (std::abs(val) < kZero) continue;  // plateau sample: gap, not a crossing
    theta.push_back(t);
    sign.push_back(val > 0.0 ? 1 : -1);
  }
  RootCount rc;
  if (theta.empty()) {
    rc.identically_zero = sup < kZero;
    return rc;
  }

  const auto confirmed = [&](double lo, double hi) {
    // Bisection inside the bracket; near-zero midpoints shrink toward `hi`.
    double flo = F.eval(lo);
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      const double fm = F.eval(mid);
      if (flo * fm < 0.0) {
        hi = mid;
      } else {
        lo = mid;
        if (std::abs(fm) >= kZero) flo = fm;
      }
    }
    return true;
  };

  const std::size_t kept = theta.size();
  for (std::size_t i = 0; i < kept; ++i) {
    const std::size_t j = (i + 1) % kept;
    if (sign[i] == sign[j]) continue;
    const double lo = theta[i];
    const double hi = (j == 0) ? theta[j] + kTwoPi : theta[j];
    if (confirmed(lo, hi)) ++rc.count;
  }
  return rc;
}

Eigen::VectorXd coordinate_slice(const ConjugatedMatrix& M, int k) {
  const int n = M.size();
  if (k < 0 || k >= n) throw std::invalid_argument("slice index out of range");
  const double denom = n * M.mat()(k, k) - 1.0;
  if (denom <= 1e-9)
    throw std::invalid_argument(
        "coordinate slice degenerates: n * m_kk - 1 = " + std::to_string(denom));
  Eigen::VectorXd v = -Eigen::VectorXd::Ones(n);
  v(k) += n;
  return v / std::sqrt(denom);
}

AlphaSlice alpha_slice(const ConjugatedMatrix& M, int k) {
  const int n = M.size();
  if (k < 0 || k >= n) throw std::invalid_argument("slice index out of range");
  if (n < 2) throw std::invalid_argument("alpha slice needs n >= 2");
  if (M.min_eigenvalue() <= 1e-12)
    throw std::invalid_argument("alpha slice needs a positive definite matrix");
  const double threshold = conjugated_diag_bound(n);  // csc^2(pi/2n) / n
  const double mkk = M.mat()(k, k);
  if (mkk <= threshold) {
    std::ostringstream msg;
    msg << "diagonal entry m_kk = " << mkk << " does not exceed the threshold "
        << threshold << " (csc^2(pi/2n)/n); compression needs alpha < 1";
    throw std::invalid_argument(msg.str());
  }
  const double cot2 = n * threshold - 1.0;  // cot^2(pi/2n) = csc^2 - 1
  const double alpha = cot2 / (n * mkk - 1.0);
  Eigen::VectorXd v_k = coordinate_slice(M, k);
  Eigen::VectorXd v_k_alpha = -std::sqrt(alpha) * v_k;
  ProductTrigPoly poly = slice_poly(M, v_k_alpha);
  const double slope_k = poly.slopes()(k);
  // cos(t) + a sin(t) = 0 at t = atan2(1, -a), which lands in (0, pi).
  return AlphaSlice{k,    alpha, std::move(v_k),          std::move(v_k_alpha),
                    std::move(poly), slope_k, std::atan2(1.0, -slope_k)};
}

ContradictionCertificate contradiction_search(const ConjugatedMatrix& M, int k) {
  const AlphaSlice slice = alpha_slice(M, k);
  const int n = M.size();
  const double pi = std::numbers::pi;

  // log of the coordinate product after rescaling onto the ellipsoid:
  // s(t) = (cos^2 t + alpha sin^2 t)^{-1/2} >= 1, product = s^n |T(t)|.
  const auto score = [&](double t) -> double {
    const double c = std::cos(t), sn = std::sin(t);
    const double quad = c * c + slice.alpha * sn * sn;
    const double tv = std::abs(slice.poly.eval(t));
    if (tv <= 0.0) return -std::numeric_limits<double>::infinity();
    return -0.5 * n * std::log(quad) + std::log(tv);
  };

  const std::array<std::pair<double, double>, 2> ranges = {
      std::pair{pi / n, (n - 1) * pi / n},
      std::pair{(n + 1) * pi / n, (2 * n - 1) * pi / n}};

  double best_t = ranges[0].first;
  double best_score = -std::numeric_limits<double>::infinity();
  constexpr int kGrid = 100000;
  const int per_range = kGrid / 2;
  for (const auto& [lo, hi] : ranges) {
    if (hi - lo < 1e-15) {
      const double sc = score(lo);
      if (sc > best_score) {
        best_score = sc;
        best_t = lo;
      }
      continue;
    }
    for (int i = 0; i <= per_range; ++i) {
      const double t = lo + (hi - lo) * i / per_range;
      const double sc = score(t);
      if (sc > best_score) {
        best_score = sc;
        best_t = t;
      }
    }
  }

  // Local refinement inside whichever interval holds the best grid point.
  for (const auto& [lo, hi] : ranges) {
    if (best_t < lo - 1e-12 || best_t > hi + 1e-12 || hi - lo < 1e-15) continue;
    const double h = (hi - lo) / per_range;
    best_t = golden_section_max(std::max(lo, best_t - h), std::min(hi, best_t + h), score);
    break;
  }

  ContradictionCertificate cert;
  cert.theta = best_t;
  const double c = std::cos(best_t), sn = std::sin(best_t);
  const double quad = c * c + slice.alpha * sn * sn;
  cert.scale = 1.0 / std::sqrt(quad);
  cert.t_value = std::abs(slice.poly.eval(best_t));
  Eigen::VectorXd v_theta = c * Eigen::VectorXd::Ones(n) + sn * slice.v_k_alpha;
  cert.b = cert.scale * v_theta;
  cert.quadform = cert.b.dot(M.mat() * cert.b);
  cert.product = (M.mat() * cert.b).cwiseAbs().prod();
  cert.found = cert.product > 1.0;
  return cert;
}

}  // namespace plank
