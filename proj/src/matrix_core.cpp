#include "testvector/matrix_core.hpp"

#include <cmath>
#include <string>

#include "testvector/error.hpp"

namespace testvector {

double orthogonality_residual(const RealMatrix& x) {
  const RealMatrix d = x.transpose() * x - RealMatrix::Identity(x.rows(), x.cols());
  return d.cwiseAbs().maxCoeff();
}

KPoint::KPoint(RealMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    fail(ErrorCode::InvalidArgument, "KPoint requires a non-empty square matrix");
  }
  const double res = orthogonality_residual(m_);
  if (!(res <= kTolerance)) {
    fail(ErrorCode::InvalidArgument,
         "matrix is not orthogonal (residual " + std::to_string(res) + ")");
  }
}

KPoint KPoint::identity(int dim) { return KPoint(RealMatrix::Identity(dim, dim), Unchecked{}); }

int KPoint::det_sign() const { return m_.determinant() > 0.0 ? 1 : -1; }

KPoint KPoint::operator*(const KPoint& other) const {
  if (dim() != other.dim()) fail(ErrorCode::InvalidArgument, "KPoint dimension mismatch");
  return KPoint(m_ * other.m_, Unchecked{});
}

KPoint KPoint::transpose() const { return KPoint(m_.transpose(), Unchecked{}); }

KPoint weyl_element(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  RealMatrix w = RealMatrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    w(2 * j, j) = 1.0;          // column j     is e_{2j+1} (1-based)
    w(2 * j + 1, n + j) = 1.0;  // column n + j is e_{2j+2}
  }
  return KPoint(std::move(w));
}

KPoint torus_element(std::span<const double> thetas) {
  const int n = static_cast<int>(thetas.size());
  if (n < 1) fail(ErrorCode::InvalidArgument, "torus element needs at least one angle");
  RealMatrix k = RealMatrix::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const double c = std::cos(thetas[j]);
    const double s = std::sin(thetas[j]);
    k(2 * j, 2 * j) = c;
    k(2 * j, 2 * j + 1) = s;
    k(2 * j + 1, 2 * j) = -s;
    k(2 * j + 1, 2 * j + 1) = c;
  }
  return KPoint(std::move(k));
}

KPoint component_element(std::span<const int> eps) {
  const int n = static_cast<int>(eps.size());
  if (n < 1) fail(ErrorCode::InvalidArgument, "component element needs at least one sign");
  RealMatrix c = RealMatrix::Identity(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    if (eps[j] == -1) {
      c(2 * j, 2 * j) = -1.0;
    } else if (eps[j] != 1) {
      fail(ErrorCode::InvalidArgument, "component signs must be +1 or -1");
    }
  }
  return KPoint(std::move(c));
}

KPoint block_diag(const KPoint& k1, const KPoint& k2) {
  const int a = k1.dim();
  const int b = k2.dim();
  RealMatrix m = RealMatrix::Zero(a + b, a + b);
  m.topLeftCorner(a, a) = k1.matrix();
  m.bottomRightCorner(b, b) = k2.matrix();
  return KPoint(std::move(m));
}

KPoint haar_sample_O(int dim, Rng& rng) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  RealMatrix g(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) g(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix& packed = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    if (packed(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return KPoint(std::move(q));
}

KPoint haar_sample_K(int n, Rng& rng) { return haar_sample_O(2 * n, rng); }

KHPoint haar_sample_KH(int n, Rng& rng) {
  KPoint k1 = haar_sample_O(n, rng);
  KPoint k2 = haar_sample_O(n, rng);
  KPoint embedded = block_diag(k1, k2);
  return {std::move(k1), std::move(k2), std::move(embedded)};
}

RealMatrix IwasawaFactors::reconstruct() const { return u * t.asDiagonal() * k; }

RealMatrix lower_unipotent(const RealMatrix& x) {
  const auto m2 = x.rows();
  const auto m1 = x.cols();
  RealMatrix ubar = RealMatrix::Identity(m1 + m2, m1 + m2);
  ubar.bottomLeftCorner(m2, m1) = x;
  return ubar;
}

IwasawaFactors iwasawa_lower(const RealMatrix& x) {
  const RealMatrix g = lower_unipotent(x);
  const auto m = g.rows();
  IwasawaFactors f{RealMatrix::Identity(m, m), RealVector::Zero(m), RealMatrix::Zero(m, m)};
  // Row i of g equals t_i k_i + sum_{j>i} u_ij t_j k_j; peel rows from the bottom.
  for (auto i = m - 1; i >= 0; --i) {
    Eigen::RowVectorXd r = g.row(i);
    RealVector coef = RealVector::Zero(m);
    for (int pass = 0; pass < 2; ++pass) {
      for (auto j = i + 1; j < m; ++j) {
        const double c = r.dot(f.k.row(j));
        coef(j) += c;
        r -= c * f.k.row(j);
      }
    }
    f.t(i) = r.norm();
    f.k.row(i) = r / f.t(i);
    for (auto j = i + 1; j < m; ++j) f.u(i, j) = coef(j) / f.t(j);
  }
  return f;
}

DetA2Bounds det_a2_and_bounds(const RealMatrix& x) {
  const auto m1 = x.cols();
  const auto m2 = x.rows();
  const IwasawaFactors f = iwasawa_lower(x);
  DetA2Bounds out{1.0, 0.0, 1.0};
  for (auto i = m1; i < m1 + m2; ++i) out.det_a2 *= f.t(i);
  double sum = 1.0;
  for (auto j = 0; j < m2; ++j) {
    const double sq = x.row(j).squaredNorm();
    sum += sq;
    out.upper *= std::sqrt(1.0 + sq);
  }
  out.lower = std::sqrt(sum);
  const double slack = 1e-9 * std::max(1.0, out.upper);
  if (!(out.lower <= out.det_a2 + slack && out.det_a2 <= out.upper + slack)) {
    fail(ErrorCode::ConstructionBug, "det(a_2) bound violated");
  }
  return out;
}

}  // namespace testvector
