#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace plank {

// A family of n unit vectors in R^d, stored as the rows of an n x d matrix.
// Construction rejects rows whose norm deviates from 1 by more than 1e-12.
class UnitVectorSet {
 public:
  static UnitVectorSet from_rows(Eigen::MatrixXd rows);

  int count() const { return static_cast<int>(rows_.rows()); }
  int dim() const { return static_cast<int>(rows_.cols()); }
  const Eigen::MatrixXd& rows() const { return rows_; }
  Eigen::VectorXd vector(int k) const { return rows_.row(k).transpose(); }

 private:
  explicit UnitVectorSet(Eigen::MatrixXd rows) : rows_(std::move(rows)) {}
  Eigen::MatrixXd rows_;
};

// Symmetric positive semidefinite matrix with unit diagonal.  Entries are
// pairwise inner products of unit vectors, so |h_jk| <= 1 up to roundoff.
class GramMatrix {
 public:
  static GramMatrix from_entries(Eigen::MatrixXd entries);

  int size() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  bool invertible(double tol = 1e-10) const { return min_eigenvalue_ > tol; }

 private:
  GramMatrix(Eigen::MatrixXd m, double min_ev)
      : mat_(std::move(m)), min_eigenvalue_(min_ev) {}
  Eigen::MatrixXd mat_;
  double min_eigenvalue_;
};

// Sign pattern (+1/-1 per coordinate) naming an orthant of R^n.
class SignPattern {
 public:
  explicit SignPattern(std::vector<int> signs);
  static SignPattern parse(const std::string& s);  // e.g. "++-"
  static SignPattern all_plus(int n);

  int size() const { return static_cast<int>(signs_.size()); }
  int operator[](int k) const { return signs_[k]; }
  const std::vector<int>& signs() const { return signs_; }
  SignPattern flipped() const;
  std::string str() const;  // '+' / '-' per coordinate

  bool operator==(const SignPattern& o) const { return signs_ == o.signs_; }
  // Lexicographic order with -1 before +1; used for deterministic tie-breaks.
  bool lex_less(const SignPattern& o) const;

 private:
  std::vector<int> signs_;
};

// Closed zone of spherical width w about a great circle with pole `normal`:
// { x in S^2 : |<normal, x>| <= sin(w/2) }.  sin(w/2) is cached.
class Zone {
 public:
  Zone(Eigen::Vector3d normal, double width);

  const Eigen::Vector3d& normal() const { return normal_; }
  double width() const { return width_; }
  double sin_half_width() const { return sin_half_; }
  bool contains(const Eigen::Vector3d& x, double tol = 1e-12) const {
    return std::abs(normal_.dot(x)) <= sin_half_ + tol;
  }

 private:
  Eigen::Vector3d normal_;
  double width_;
  double sin_half_;
};

struct CoverageReport {
  bool covered = false;                            // at grid resolution
  std::optional<Eigen::Vector3d> uncovered_point;  // locally refined
  // min_k |<normal_k, x>| / sin(w_k/2) at uncovered_point; 0 when covered.
  double margin = 0.0;
};

// Pairwise inner products of the rows; diagonal pinned to exactly 1.
GramMatrix gram(const UnitVectorSet& vs);

// n unit vectors in R^2 at angles (k-1)*pi/n, k = 1..n: the equally spaced
// family of n lines through the origin that attains every sharp bound here.
UnitVectorSet extremal_configuration(int n);

// Orthonormal basis of the eigenspace with eigenvalue < tol (tol > 0).
// Empty exactly when H is invertible at that tolerance.
std::vector<Eigen::VectorXd> kernel_basis(const GramMatrix& H, double tol = 1e-10);

// Vertices of an icosahedron subdivided `level` times (10*4^level + 2 points),
// projected to the unit sphere.  Deterministic ordering.
std::vector<Eigen::Vector3d> icosphere_vertices(int level);

// Tests whether the zones cover S^2 on an icosahedral grid (subdivision
// `resolution` >= 2).  If not, reports the uncovered direction maximizing
// min_k |<normal_k, x>| / sin(w_k/2), refined off-grid by a compass search.
CoverageReport zone_covers(const std::vector<Zone>& zones, int resolution);

}  // namespace plank
