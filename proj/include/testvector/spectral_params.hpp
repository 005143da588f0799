#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace testvector {

using Complex = std::complex<double>;

/// Highest weight of a finite-dimensional GL(2n, C) representation:
/// an even-length, weakly decreasing integer vector.
class HighestWeight {
 public:
  explicit HighestWeight(std::vector<long> nu);

  const std::vector<long>& values() const noexcept { return nu_; }
  int n() const noexcept { return static_cast<int>(nu_.size() / 2); }
  long operator[](std::size_t i) const { return nu_[i]; }

 private:
  std::vector<long> nu_;
};

/// Character a -> sgn(a)^sign_exponent * |a|^power of R^x.
struct RealCharacter {
  int sign_exponent = 0;
  Complex power{0.0, 0.0};

  RealCharacter() = default;
  RealCharacter(int sign, Complex p);

  /// Value on -1; depends only on the sign exponent.
  int at_minus_one() const noexcept { return sign_exponent == 0 ? 1 : -1; }

  RealCharacter operator*(const RealCharacter& other) const;
  RealCharacter inverse() const;
  bool operator==(const RealCharacter&) const = default;

  static RealCharacter trivial() { return {}; }
  static RealCharacter sign() { return {1, {0.0, 0.0}}; }
};

Complex eval_character(const RealCharacter& c, double a);

/// Combinatorial induction datum of the cohomological representation
/// Ind(D_{l_1}|.|^{m/2} x ... x D_{l_n}|.|^{m/2}).
struct InducedParams {
  int n = 0;
  long m = 0;
  std::vector<long> l;
  std::vector<long> N;  // N_j = l_j + 1, highest weight of the minimal K-type
  RealCharacter omega;
  int omega0_sign = 0;

  static InducedParams from_weight(const HighestWeight& nu);
};

long check_purity(const HighestWeight& nu);
std::vector<long> l_vector(const HighestWeight& nu, long m);

struct CentralCharacters {
  RealCharacter omega;
  RealCharacter omega_pi;
};
CentralCharacters central_characters(const InducedParams& params);

RealCharacter discrete_series_central_char(long k);

bool parity_compatible(const std::vector<long>& N, int omega0_sign);

long modular_symbol_dimension(long n);

/// Parameters accepted on the external JSON surface:
/// {"nu": [...], "chi": {"sign": 0|1, "power": [re, im]}}.
struct ParamSpec {
  std::vector<long> nu;
  RealCharacter chi;

  std::string to_json() const;
  static ParamSpec from_json(const std::string& text);
};

}  // namespace testvector
