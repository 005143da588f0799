#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "testvector/matrix_core.hpp"
#include "testvector/spectral_params.hpp"

namespace testvector {

using ComplexMatrix = Eigen::MatrixXcd;

/// u_j = e_{2j-1} - i e_{2j} as columns and u_j^* = e_{2j-1}^t - i e_{2j}^t as
/// rows. The pairing is bilinear (no conjugation): u_j^* u_k = 0 and
/// u_j^* conj(u_k) = 2 delta_jk.
struct IsotropicFrame {
  ComplexMatrix u_vectors;  // 2n x n
  ComplexMatrix u_duals;    // n x 2n
};
IsotropicFrame isotropic_frame(int n);

/// det of the j x j matrix (u_a^* x) diag(I_n, 0) (x^T u_b), 1 <= a, b <= j.
Complex f_W(int j, const KPoint& x);
Complex F_lt(const KPoint& x);
/// i^n det((rows u^*) x [0; I_n]).
Complex F_rt(const KPoint& x);
/// prod_{j<n} f_W(j)^{(N'_j - N'_{j+1})/2} * f_W(n)^{N'_n/2}.
Complex F_wt(std::span<const long> n_prime, const KPoint& x);

enum class PhiCase { EvenTrivial, EvenSign, OddTrivial, OddSign };
std::string_view to_string(PhiCase c);

/// Product  coefficient * prod_j f_W(j)^{e_j} * F_lt^{use_lt} * F_rt^{use_rt}
/// on O(2n). Its left torus weight is (2 * sum_{i>=j} e_i)_j + use_lt + use_rt.
class ScalarKFunction {
 public:
  static ScalarKFunction from_factors(int n, std::vector<int> exponents, bool use_lt,
                                      bool use_rt, Complex coefficient = {1.0, 0.0});

  int n() const noexcept { return n_; }
  const std::vector<int>& exponents() const noexcept { return exponents_; }
  bool use_lt() const noexcept { return use_lt_; }
  bool use_rt() const noexcept { return use_rt_; }
  Complex coefficient() const noexcept { return coefficient_; }

  std::vector<long> weight() const;
  ScalarKFunction scaled(Complex c) const;

  Complex operator()(const KPoint& x) const { return evaluate(x.matrix()); }
  /// Polynomial in the entries of x, so it extends to arbitrary 2n x 2n
  /// matrices; finite differences rely on this.
  Complex evaluate(const RealMatrix& x) const;

  /// Factor list such as "f_W1^2 * f_W2 * F_rt".
  std::string describe() const;

 private:
  int n_ = 0;
  std::vector<int> exponents_;
  bool use_lt_ = false;
  bool use_rt_ = false;
  Complex coefficient_{1.0, 0.0};
};

/// phi for highest weight N, omega_0 = sgn^{omega0_sign}, chi_0 = sgn^{chi0_sign}.
ScalarKFunction build_phi_for_weight(const std::vector<long>& N, int omega0_sign, int chi0_sign);
ScalarKFunction build_phi(const InducedParams& params, int chi0_sign);
PhiCase phi_case(const std::vector<long>& N, int chi0_sign);

using SignPattern = std::vector<int>;

/// Every element of {+1,-1}^n, all-plus first, in lexicographic order of the
/// bits (bit j set means eta_j = -1).
std::vector<SignPattern> all_sign_patterns(int n);

/// The vector-valued minimal-K-type section through its 2^n scalar
/// components f_eta(k) = phi(c(eta) k).
class TestVectorSection {
 public:
  TestVectorSection(ScalarKFunction base, int chi0_sign);

  const ScalarKFunction& base() const noexcept { return base_; }
  int chi0_sign() const noexcept { return chi0_sign_; }
  int n() const noexcept { return base_.n(); }

  Complex component(std::span<const int> eta, const KPoint& k) const;

 private:
  ScalarKFunction base_;
  int chi0_sign_;
};

TestVectorSection expand_section(const ScalarKFunction& phi, int chi0_sign);

/// f_eta(w) for every sign pattern eta.
std::map<SignPattern, Complex> section_at_w(const TestVectorSection& sec);

}  // namespace testvector
