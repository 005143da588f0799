#pragma once

#include <complex>
#include <string>
#include <vector>

#include "testvector/spectral_params.hpp"

namespace testvector {

/// log Gamma(z) via a g=7, 9-term Lanczos sum; reflection for Re z < 1/2.
/// Throws PoleAt at non-positive integers.
Complex log_gamma(Complex z);

/// Gamma_R(s) = pi^{-s/2} Gamma(s/2).
Complex gamma_R(Complex s);
/// Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s).
Complex gamma_C(Complex s);

struct LFactorValue {
  Complex value;
  Complex s;
  /// Arguments z of the Gamma_C(z) factors whose product is `value`.
  std::vector<Complex> gamma_c_args;

  std::string description() const;
};

/// L(s, D_k |.|^{m/2} x chi) = Gamma_C(s + u + m/2 + k/2) for chi = sgn^d |.|^u.
LFactorValue l_factor_sigma(long k, long m, const RealCharacter& chi, Complex s);

/// L(s, pi x chi) as the product of the discrete-series factors over l_j.
LFactorValue l_factor_pi(const InducedParams& params, const RealCharacter& chi, Complex s);

}  // namespace testvector
