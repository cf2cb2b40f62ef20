#pragma once

#include <Eigen/Dense>

#include "plank/witness.hpp"

namespace plank {

// T(theta) = prod_j (cos theta + a_j sin theta), the restriction of the
// coordinate product x -> prod_j x_j to the path cos(theta) 1 + sin(theta) v
// pushed through M (a = Mv).  T(0) = 1 exactly: every factor is 1.0 there.
class ProductTrigPoly {
 public:
  explicit ProductTrigPoly(Eigen::VectorXd slopes);

  int degree() const { return static_cast<int>(slopes_.size()); }
  const Eigen::VectorXd& slopes() const { return slopes_; }

  double eval(double theta) const;

  struct Derivatives {
    double value;
    double first;
    double second;
  };
  // Product-rule recurrence carrying (T, T', T''); no divisions, so factor
  // zeros cost nothing.  At theta = 0: T = 1, T' = sum a_j,
  // T'' = (sum a_j)^2 - ||a||^2 - n.
  Derivatives eval_derivatives(double theta) const;

 private:
  Eigen::VectorXd slopes_;
};

// c_0 + sum_{k=1..n} (c_k cos k theta + s_k sin k theta).  Both arrays are
// stored with n+1 entries; sin_coeffs[0] is identically 0.
struct FourierForm {
  Eigen::VectorXd cos_coeffs;
  Eigen::VectorXd sin_coeffs;

  int degree() const { return static_cast<int>(cos_coeffs.size()) - 1; }
  double eval(double theta) const;
  double eval_derivative(double theta) const;
  double eval_second(double theta) const;
};

// Exact expansion of the product by convolution in the e^{i k theta} basis.
FourierForm to_fourier(const ProductTrigPoly& T);

// slopes = M v.  Along v_theta = cos(theta) 1 + sin(theta) v the coordinates
// of M v_theta are cos(theta) + (Mv)_j sin(theta), because M 1 = 1.
ProductTrigPoly slice_poly(const ConjugatedMatrix& M, const Eigen::VectorXd& v);

// Sampled sup-norm comparison against the derivative inequalities
// max|T'| <= n max|T| and max|T''| <= n^2 max|T|.
struct BernsteinReport {
  int grid = 0;
  double sup_value = 0.0;
  double sup_first = 0.0;
  double sup_second = 0.0;
  bool first_ok = false;
  bool second_ok = false;
};
// Requires grid >= 1024 * degree.
BernsteinReport bernstein_check(const FourierForm& F, int grid, double tol = 1e-9);

// Q = F - cos(n theta): same value at 0 and a shared root pattern with F.
FourierForm q_form(const FourierForm& F, int n);

struct QDecomposition {
  FourierForm psi;        // degree <= n-2
  double residual = 0.0;  // max |Q - sin^2(theta) psi| over 4096 points
};
// Writes Q = F - cos(n theta) as sin^2(theta) * psi by solving the linear
// coefficient system of multiplication by (1 - cos 2theta)/2.  Requires
// F(0) = 1 and F'(0) = 0 within 1e-8 (else std::invalid_argument): those are
// exactly the conditions making Q vanish to second order at 0.
QDecomposition q_decompose(const FourierForm& F, int n);

struct RootCount {
  int count = 0;                  // sign changes over one period
  bool identically_zero = false;  // |F| < 1e-12 everywhere on the grid
};
// Counts sign changes of F on a uniform grid over [0, 2pi), cyclically, with
// |F| < 1e-12 samples treated as gaps (a touch without crossing adds nothing).
// Each change is confirmed by bisection on its bracketing interval.
// Requires grid >= 4096 * degree.
RootCount count_roots(const FourierForm& F, int grid);

// The distinguished slice through coordinate k: v_k = (n e_k - 1)/sqrt(n m_kk - 1).
// It is orthogonal to 1 and lies on the ellipsoid v^T M v = n.  Requires
// n m_kk > 1 + 1e-9 (the slice direction degenerates into Ker(M) otherwise).
Eigen::VectorXd coordinate_slice(const ConjugatedMatrix& M, int k);

// Data of the compressed slice used to refute an oversized diagonal entry.
struct AlphaSlice {
  int k = 0;
  double alpha = 0.0;          // cot^2(pi/2n) / (n m_kk - 1), in (0,1)
  Eigen::VectorXd v_k;         // coordinate_slice(M, k)
  Eigen::VectorXd v_k_alpha;   // -sqrt(alpha) v_k
  ProductTrigPoly poly;        // slice_poly(M, v_k_alpha)
  double slope_k = 0.0;        // (M v_k_alpha)_k = -cot(pi/2n)
  double root_theta = 0.0;     // zero of the k-th factor in (0, pi): pi/2n
};
// Requires m_kk > csc^2(pi/2n)/n (throws std::invalid_argument reporting the
// threshold) and M positive definite.  alpha is calibrated so the k-th factor
// of the slice polynomial vanishes exactly at theta = pi/2n.
AlphaSlice alpha_slice(const ConjugatedMatrix& M, int k);

// Witness that a diagonal entry above csc^2(pi/2n)/n is incompatible with the
// product hypothesis min prod|c_j|=1 c^T M^{-1} c >= n: a point b on the
// ellipsoid b^T M b = n whose coordinate product under M exceeds 1.
struct ContradictionCertificate {
  bool found = false;
  double theta = 0.0;       // location of the violating slice point
  Eigen::VectorXd b;        // rescaled v_theta, b^T M b = n
  double quadform = 0.0;    // b^T M b, recomputed
  double product = 0.0;     // prod_j |(Mb)_j|
  double scale = 0.0;       // the factor s > 1 applied to reach the ellipsoid
  double t_value = 0.0;     // |T(theta)| before rescaling
};
// Grid search (1e5 points) over [pi/n, (n-1)pi/n] u [(n+1)pi/n, (2n-1)pi/n]
// followed by golden-section refinement of the rescaled product.  A genuine
// conjugated matrix never satisfies the alpha_slice precondition, so this
// runs only on synthetic inputs; found=false would refute the root-count
// argument and is reported, never silently dropped.
ContradictionCertificate contradiction_search(const ConjugatedMatrix& M, int k);

}  // namespace plank
