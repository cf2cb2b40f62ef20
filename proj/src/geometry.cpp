#include "plank/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace plank {

namespace {
constexpr double kUnitTol = 1e-12;
constexpr double kSymTol = 1e-12;
constexpr double kPsdTol = 1e-10;
}  // namespace

UnitVectorSet UnitVectorSet::from_rows(Eigen::MatrixXd rows) {
  if (rows.rows() < 1 || rows.cols() < 1)
    throw std::invalid_argument("vector set needs n >= 1 rows and d >= 1 columns");
  for (int k = 0; k < rows.rows(); ++k) {
    const double nrm = rows.row(k).norm();
    if (std::abs(nrm - 1.0) > kUnitTol) {
      std::ostringstream msg;
      msg << "row " << k << " is not a unit vector (norm " << nrm << ")";
      throw std::invalid_argument(msg.str());
    }
  }
  return UnitVectorSet(std::move(rows));
}

GramMatrix GramMatrix::from_entries(Eigen::MatrixXd entries) {
  const int n = static_cast<int>(entries.rows());
  if (n < 1 || entries.cols() != n)
    throw std::invalid_argument("Gram matrix must be square and nonempty");
  for (int j = 0; j < n; ++j) {
    if (std::abs(entries(j, j) - 1.0) > kUnitTol)
      throw std::invalid_argument("Gram matrix diagonal entry " + std::to_string(j) +
                                  " differs from 1");
    for (int k = 0; k < n; ++k) {
      if (std::abs(entries(j, k) - entries(k, j)) > kSymTol)
        throw std::invalid_argument("Gram matrix is not symmetric");
      if (std::abs(entries(j, k)) > 1.0 + kUnitTol)
        throw std::invalid_argument("Gram matrix entry exceeds 1 in magnitude");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(entries, Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -kPsdTol)
    throw std::invalid_argument("Gram matrix is not positive semidefinite (min eigenvalue " +
                                std::to_string(min_ev) + ")");
  return GramMatrix(std::move(entries), min_ev);
}

SignPattern::SignPattern(std::vector<int> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw std::invalid_argument("sign pattern must be nonempty");
  for (int s : signs_)
    if (s != 1 && s != -1) throw std::invalid_argument("sign pattern entries must be +1 or -1");
}

SignPattern SignPattern::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("sign pattern string is empty");
  std::vector<int> signs;
  signs.reserve(s.size());
  for (char c : s) {
    if (c == '+')
      signs.push_back(1);
    else if (c == '-')
      signs.push_back(-1);
    else
      throw std::invalid_argument(std::string("bad character '") + c +
                                  "' in sign pattern (use '+' and '-')");
  }
  return SignPattern(std::move(signs));
}

SignPattern SignPattern::all_plus(int n) {
  if (n < 1) throw std::invalid_argument("sign pattern must be nonempty");
  return SignPattern(std::vector<int>(n, 1));
}

SignPattern SignPattern::flipped() const {
  std::vector<int> s(signs_);
  for (int& v : s) v = -v;
  return SignPattern(std::move(s));
}

std::string SignPattern::str() const {
  std::string s;
  s.reserve(signs_.size());
  for (int v : signs_) s.push_back(v > 0 ? '+' : '-');
  return s;
}

bool SignPattern::lex_less(const SignPattern& o) const {
  return std::lexicographical_compare(signs_.begin(), signs_.end(), o.signs_.begin(),
                                      o.signs_.end());
}

Zone::Zone(Eigen::Vector3d normal, double width)
    : normal_(std::move(normal)), width_(width) {
  if (std::abs(normal_.norm() - 1.0) > kUnitTol)
    throw std::invalid_argument("zone normal must be a unit vector");
  if (!(width > 0.0) || !(width < std::numbers::pi))
    throw std::invalid_argument("zone width must lie strictly between 0 and pi");
  sin_half_ = std::sin(0.5 * width);
}

GramMatrix gram(const UnitVectorSet& vs) {
  Eigen::MatrixXd h = vs.rows() * vs.rows().transpose();
  h = 0.5 * (h + h.transpose()).eval();
  h.diagonal().setOnes();  // <v_k, v_k> = 1 for unit rows
  return GramMatrix::from_entries(std::move(h));
}

UnitVectorSet extremal_configuration(int n) {
  if (n < 1) throw std::invalid_argument("extremal configuration needs n >= 1");
  Eigen::MatrixXd rows(n, 2);
  for (int k = 0; k < n; ++k) {
    const double theta = k * std::numbers::pi / n;
    rows(k, 0) = std::cos(theta);
    rows(k, 1) = std::sin(theta);
  }
  return UnitVectorSet::from_rows(std::move(rows));
}

std::vector<Eigen::VectorXd> kernel_basis(const GramMatrix& H, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("kernel tolerance must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.mat());
  std::vector<Eigen::VectorXd> basis;
  for (int i = 0; i < H.size(); ++i)
    if (es.eigenvalues()(i) < tol) basis.push_back(es.eigenvectors().col(i));
  return basis;
}

std::vector<Eigen::Vector3d> icosphere_vertices(int level) {
  if (level < 0) throw std::invalid_argument("subdivision level must be nonnegative");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0},   {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int iter = 0; iter < level; ++iter) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Eigen::Vector3d m = (verts[a] + verts[b]).normalized();
      verts.push_back(m);
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = mid(f[0], f[1]), b = mid(f[1], f[2]), c = mid(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces.swap(next);
  }
  return verts;
}

namespace {

double coverage_ratio(const std::vector<Zone>& zones, const Eigen::Vector3d& x) {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& z : zones)
    r = std::min(r, std::abs(z.normal().dot(x)) / z.sin_half_width());
  return r;
}

// Deterministic compass search on the sphere, maximizing the coverage ratio.
// Only ever moves uphill, so a point starting outside all zones stays outside.
Eigen::Vector3d refine_uncovered(const std::vector<Zone>& zones, Eigen::Vector3d p,
                                 double step) {
  double best = coverage_ratio(zones, p);
  while (step > 1e-10) {
    const Eigen::Vector3d axis =
        std::abs(p.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d t1 = p.cross(axis).normalized();
    const Eigen::Vector3d t2 = p.cross(t1).normalized();
    const std::array<Eigen::Vector3d, 4> dirs = {t1, -t1, t2, -t2};
    bool improved = false;
    for (const Eigen::Vector3d& dir : dirs) {
      const Eigen::Vector3d q = (p + step * dir).normalized();
      const double r = coverage_ratio(zones, q);
      if (r > best) {
        best = r;
        p = q;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return p;
}

}  // namespace

CoverageReport zone_covers(const std::vector<Zone>& zones, int resolution) {
  if (zones.empty()) throw std::invalid_argument("zone list is empty");
  if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
  for (const auto& z : zones)
    if (!(z.width() > 0.0)) throw std::invalid_argument("zone width must be positive");

  const auto pts = icosphere_vertices(resolution);
  bool covered = true;
  double best = -1.0;
  Eigen::Vector3d best_pt = Eigen::Vector3d::Zero();
  for (const auto& p : pts) {
    bool inside = false;
    for (const auto& z : zones)
      if (z.contains(p)) {
        inside = true;
        break;
      }
    if (inside) continue;
    covered = false;
    const double r = coverage_ratio(zones, p);
    if (r > best) {
      best = r;
      best_pt = p;
    }
  }
  if (covered) return CoverageReport{true, std::nullopt, 0.0};

  const double edge = 1.1071487177940904 / static_cast<double>(1 << resolution);
  best_pt = refine_uncovered(zones, best_pt, edge);
  return CoverageReport{false, best_pt, coverage_ratio(zones, best_pt)};
}

}  // namespace plank
