#include "testvector/testvector.hpp"

#include <string>

#include "testvector/error.hpp"

namespace testvector {

namespace {

constexpr Complex kI{0.0, 1.0};

int dim_to_n(const RealMatrix& x) {
  if (x.rows() != x.cols() || x.rows() < 2 || x.rows() % 2 != 0) {
    fail(ErrorCode::InvalidArgument, "expected a 2n x 2n matrix");
  }
  return static_cast<int>(x.rows() / 2);
}

// Rows u_a^* x, a = 1..n, as an n x 2n complex matrix. Row a of U x is
// x.row(2a-1) - i x.row(2a) (1-based), so no full complex product is needed.
ComplexMatrix frame_times(const RealMatrix& x) {
  const int n = dim_to_n(x);
  ComplexMatrix a(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    a.row(r).real() = x.row(2 * r);
    a.row(r).imag() = -x.row(2 * r + 1);
  }
  return a;
}

Complex det(const ComplexMatrix& m) {
  if (m.rows() == 0) return {1.0, 0.0};
  if (m.rows() == 1) return m(0, 0);
  return m.partialPivLu().determinant();
}

Complex ipow(Complex base, int e) {
  Complex out{1.0, 0.0};
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

Complex i_pow(int n) {
  static constexpr Complex cycle[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return cycle[((n % 4) + 4) % 4];
}

// Leading principal minors of M = A_L A_L^T, i.e. f_W(1..n).
std::vector<Complex> fundamental_values(const ComplexMatrix& a, int upto) {
  const int n = static_cast<int>(a.rows());
  const ComplexMatrix left = a.leftCols(n);
  const ComplexMatrix m = left * left.transpose();
  std::vector<Complex> out(upto);
  for (int j = 1; j <= upto; ++j) out[j - 1] = det(m.topLeftCorner(j, j));
  return out;
}

std::vector<int> exponents_from(std::span<const long> n_prime) {
  const auto n = n_prime.size();
  std::vector<int> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (n_prime[j] < 0) fail(ErrorCode::InvalidArgument, "N' entries must be nonnegative");
    if (n_prime[j] % 2 != 0) fail(ErrorCode::ParityViolation, "N' entries must be even");
    if (j + 1 < n && n_prime[j] < n_prime[j + 1]) {
      fail(ErrorCode::InvalidArgument, "N' must be weakly decreasing");
    }
    const long next = j + 1 < n ? n_prime[j + 1] : 0;
    e[j] = static_cast<int>((n_prime[j] - next) / 2);
  }
  return e;
}

}  // namespace

IsotropicFrame isotropic_frame(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  IsotropicFrame f{ComplexMatrix::Zero(2 * n, n), ComplexMatrix::Zero(n, 2 * n)};
  for (int j = 0; j < n; ++j) {
    f.u_vectors(2 * j, j) = 1.0;
    f.u_vectors(2 * j + 1, j) = -kI;
    f.u_duals(j, 2 * j) = 1.0;
    f.u_duals(j, 2 * j + 1) = -kI;
  }
  return f;
}

Complex f_W(int j, const KPoint& x) {
  const int n = dim_to_n(x.matrix());
  if (j < 1 || j > n) fail(ErrorCode::InvalidArgument, "f_W index out of range");
  return fundamental_values(frame_times(x.matrix()), j).back();
}

Complex F_lt(const KPoint& x) {
  const ComplexMatrix a = frame_times(x.matrix());
  return det(a.leftCols(a.rows()));
}

Complex F_rt(const KPoint& x) {
  const ComplexMatrix a = frame_times(x.matrix());
  const int n = static_cast<int>(a.rows());
  return i_pow(n) * det(a.rightCols(n));
}

Complex F_wt(std::span<const long> n_prime, const KPoint& x) {
  const int n = dim_to_n(x.matrix());
  if (static_cast<int>(n_prime.size()) != n) {
    fail(ErrorCode::InvalidArgument, "N' length must equal n");
  }
  return ScalarKFunction::from_factors(n, exponents_from(n_prime), false, false)(x);
}

std::string_view to_string(PhiCase c) {
  switch (c) {
    case PhiCase::EvenTrivial: return "even/chi0-trivial";
    case PhiCase::EvenSign: return "even/chi0-sign";
    case PhiCase::OddTrivial: return "odd/chi0-trivial";
    case PhiCase::OddSign: return "odd/chi0-sign";
  }
  return "unknown";
}

ScalarKFunction ScalarKFunction::from_factors(int n, std::vector<int> exponents, bool use_lt,
                                              bool use_rt, Complex coefficient) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  if (static_cast<int>(exponents.size()) != n) {
    fail(ErrorCode::InvalidArgument, "exponent vector length must equal n");
  }
  for (int e : exponents) {
    if (e < 0) fail(ErrorCode::InvalidArgument, "exponents must be nonnegative");
  }
  ScalarKFunction f;
  f.n_ = n;
  f.exponents_ = std::move(exponents);
  f.use_lt_ = use_lt;
  f.use_rt_ = use_rt;
  f.coefficient_ = coefficient;
  return f;
}

std::vector<long> ScalarKFunction::weight() const {
  std::vector<long> w(n_, 0);
  long tail = 0;
  for (int j = n_ - 1; j >= 0; --j) {
    tail += exponents_[j];
    w[j] = 2 * tail + (use_lt_ ? 1 : 0) + (use_rt_ ? 1 : 0);
  }
  return w;
}

ScalarKFunction ScalarKFunction::scaled(Complex c) const {
  ScalarKFunction f = *this;
  f.coefficient_ *= c;
  return f;
}

Complex ScalarKFunction::evaluate(const RealMatrix& x) const {
  if (dim_to_n(x) != n_) fail(ErrorCode::InvalidArgument, "matrix size does not match n");
  const ComplexMatrix a = frame_times(x);
  int highest = 0;
  for (int j = 0; j < n_; ++j) {
    if (exponents_[j] > 0) highest = j + 1;
  }
  Complex value = coefficient_;
  if (highest > 0) {
    const auto fw = fundamental_values(a, highest);
    for (int j = 0; j < highest; ++j) value *= ipow(fw[j], exponents_[j]);
  }
  if (use_lt_) value *= det(a.leftCols(n_));
  if (use_rt_) value *= i_pow(n_) * det(a.rightCols(n_));
  return value;
}

std::string ScalarKFunction::describe() const {
  std::string out;
  auto append = [&out](const std::string& s) {
    if (!out.empty()) out += " * ";
    out += s;
  };
  if (coefficient_ != Complex{1.0, 0.0}) {
    append("(" + std::to_string(coefficient_.real()) + "+" + std::to_string(coefficient_.imag()) +
           "i)");
  }
  for (int j = 0; j < n_; ++j) {
    if (exponents_[j] == 0) continue;
    std::string s = "f_W" + std::to_string(j + 1);
    if (exponents_[j] > 1) s += "^" + std::to_string(exponents_[j]);
    append(s);
  }
  if (use_lt_) append("F_lt");
  if (use_rt_) append("F_rt");
  return out.empty() ? "1" : out;
}

PhiCase phi_case(const std::vector<long>& N, int chi0_sign) {
  if (N.empty()) fail(ErrorCode::InvalidArgument, "empty N-vector");
  const bool odd = (N.front() % 2 + 2) % 2 == 1;
  if (odd) return chi0_sign == 0 ? PhiCase::OddTrivial : PhiCase::OddSign;
  return chi0_sign == 0 ? PhiCase::EvenTrivial : PhiCase::EvenSign;
}

ScalarKFunction build_phi_for_weight(const std::vector<long>& N, int omega0_sign, int chi0_sign) {
  if (chi0_sign != 0 && chi0_sign != 1) fail(ErrorCode::InvalidArgument, "chi0 sign must be 0 or 1");
  for (std::size_t j = 0; j < N.size(); ++j) {
    if (N[j] < 1) fail(ErrorCode::InvalidArgument, "N entries must be positive");
    if (j + 1 < N.size() && N[j] < N[j + 1]) {
      fail(ErrorCode::InvalidArgument, "N must be decreasing");
    }
  }
  if (!parity_compatible(N, omega0_sign)) {
    fail(ErrorCode::ParityViolation, "N-vector is not parity-compatible with omega_0");
  }
  const int n = static_cast<int>(N.size());
  const PhiCase c = phi_case(N, chi0_sign);
  const long shift = c == PhiCase::EvenTrivial ? 0 : (c == PhiCase::EvenSign ? 2 : 1);
  std::vector<long> n_prime(N);
  for (long& v : n_prime) v -= shift;
  const bool use_lt = c == PhiCase::EvenSign || c == PhiCase::OddSign;
  const bool use_rt = c == PhiCase::EvenSign || c == PhiCase::OddTrivial;
  auto phi = ScalarKFunction::from_factors(n, exponents_from(n_prime), use_lt, use_rt);
  if (phi.weight() != N) fail(ErrorCode::ConstructionBug, "phi weight does not match N");
  return phi;
}

ScalarKFunction build_phi(const InducedParams& params, int chi0_sign) {
  return build_phi_for_weight(params.N, params.omega0_sign, chi0_sign);
}

std::vector<SignPattern> all_sign_patterns(int n) {
  std::vector<SignPattern> out;
  out.reserve(std::size_t{1} << n);
  for (unsigned bits = 0; bits < (1u << n); ++bits) {
    SignPattern eta(n);
    for (int j = 0; j < n; ++j) eta[j] = (bits >> j) & 1u ? -1 : 1;
    out.push_back(std::move(eta));
  }
  return out;
}

TestVectorSection::TestVectorSection(ScalarKFunction base, int chi0_sign)
    : base_(std::move(base)), chi0_sign_(chi0_sign) {
  if (chi0_sign != 0 && chi0_sign != 1) fail(ErrorCode::InvalidArgument, "chi0 sign must be 0 or 1");
}

Complex TestVectorSection::component(std::span<const int> eta, const KPoint& k) const {
  if (static_cast<int>(eta.size()) != n()) fail(ErrorCode::InvalidArgument, "sign pattern length");
  // c(eta) only flips the sign of rows 2j-1, so apply it in place.
  RealMatrix m = k.matrix();
  for (int j = 0; j < n(); ++j) {
    if (eta[j] == -1) {
      m.row(2 * j) *= -1.0;
    } else if (eta[j] != 1) {
      fail(ErrorCode::InvalidArgument, "sign pattern entries must be +1 or -1");
    }
  }
  return base_.evaluate(m);
}

TestVectorSection expand_section(const ScalarKFunction& phi, int chi0_sign) {
  return TestVectorSection(phi, chi0_sign);
}

std::map<SignPattern, Complex> section_at_w(const TestVectorSection& sec) {
  const KPoint w = weyl_element(sec.n());
  std::map<SignPattern, Complex> out;
  for (const auto& eta : all_sign_patterns(sec.n())) out[eta] = sec.component(eta, w);
  return out;
}

}  // namespace testvector
