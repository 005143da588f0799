#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "testvector/rng.hpp"

namespace testvector {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Element of an orthogonal group O(d), stored as a real d x d matrix.
///
/// Construction checks ||x^T x - I||_inf <= 1e-10. Used for O(2n) and, via
/// block embedding, for O(n) x O(n).
class KPoint {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit KPoint(RealMatrix m);
  static KPoint identity(int dim);

  const RealMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  /// +1 or -1.
  int det_sign() const;

  KPoint operator*(const KPoint& other) const;
  KPoint transpose() const;

 private:
  struct Unchecked {};
  KPoint(RealMatrix m, Unchecked) : m_(std::move(m)) {}
  RealMatrix m_;
};

double orthogonality_residual(const RealMatrix& x);

/// Permutation matrix with columns (e_1, e_3, ..., e_{2n-1}, e_2, e_4, ..., e_{2n}).
KPoint weyl_element(int n);

/// block-diag of [[cos t, sin t], [-sin t, cos t]].
KPoint torus_element(std::span<const double> thetas);

/// block-diag of diag(-1, 1) where eps_j = -1 and I_2 where eps_j = +1.
KPoint component_element(std::span<const int> eps);

KPoint block_diag(const KPoint& k1, const KPoint& k2);

/// Haar-distributed element of O(dim): QR of a Gaussian matrix with the
/// signs of diag(R) absorbed into Q.
KPoint haar_sample_O(int dim, Rng& rng);

/// Haar sample of K = O(2n).
KPoint haar_sample_K(int n, Rng& rng);

/// Independent Haar samples k1, k2 of O(n) and their block embedding in O(2n).
struct KHPoint {
  KPoint k1;
  KPoint k2;
  KPoint embedded;
};
KHPoint haar_sample_KH(int n, Rng& rng);

/// Factors of ubar(x) = [[I, 0], [x, I]] = u t k with u upper unipotent,
/// t positive diagonal (stored as a vector), k orthogonal.
struct IwasawaFactors {
  RealMatrix u;
  RealVector t;
  RealMatrix k;

  RealMatrix reconstruct() const;
};

RealMatrix lower_unipotent(const RealMatrix& x);

/// RQ-type factorization by Gram-Schmidt on the rows of ubar(x), bottom up.
/// x is m2 x m1.
IwasawaFactors iwasawa_lower(const RealMatrix& x);

struct DetA2Bounds {
  double det_a2;
  double lower;  // (1 + sum ||x_j||^2)^{1/2}
  double upper;  // prod (1 + ||x_j||^2)^{1/2}
};

/// det(a_2(x)) = prod_{i > m1} t_i together with its two bounds. Throws
/// ConstructionBug when the sandwich lower <= det_a2 <= upper + 1e-9 fails.
DetA2Bounds det_a2_and_bounds(const RealMatrix& x);

}  // namespace testvector
