#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "testvector/error.hpp"
#include "testvector/lfactors.hpp"

using namespace testvector;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

}  // namespace

TEST_CASE("log_gamma agrees with std::lgamma on the positive axis") {
  for (double x = 0.05; x < 60.0; x *= 1.37) {
    const Complex v = log_gamma({x, 0.0});
    CHECK(std::abs(v.real() - std::lgamma(x)) <= 1e-13 * std::max(1.0, std::abs(std::lgamma(x))));
    CHECK(std::abs(v.imag()) < 1e-14);
  }
}

TEST_CASE("Gamma at integers is the factorial") {
  double fact = 1.0;
  for (int k = 1; k <= 20; ++k) {
    CHECK(rel(gamma({static_cast<double>(k), 0.0}), fact) < 1e-13);
    fact *= k;
  }
}

TEST_CASE("Gamma(1/2) = sqrt(pi)") {
  CHECK(rel(gamma({0.5, 0.0}), std::sqrt(std::numbers::pi)) < 1e-14);
}

TEST_CASE("reflection branch matches std::tgamma on the negative axis") {
  for (double x : {-0.5, -1.5, -2.25, -3.7, -7.1}) {
    CHECK(rel(gamma({x, 0.0}), std::tgamma(x)) < 1e-12);
  }
}

TEST_CASE("recurrence Gamma(z+1) = z Gamma(z) off the real axis") {
  for (double re : {-3.3, -0.4, 0.2, 1.7, 6.0}) {
    for (double im : {-5.0, -0.3, 0.8, 12.0}) {
      const Complex z{re, im};
      CHECK(rel(gamma(z + 1.0), z * gamma(z)) < 1e-12);
    }
  }
}

TEST_CASE("conjugate symmetry") {
  const Complex z{1.3, 2.7};
  CHECK(rel(log_gamma(std::conj(z)), std::conj(log_gamma(z))) < 1e-14);
}

TEST_CASE("Stirling series for large |z|") {
  const Complex z{30.0, 40.0};
  const Complex stirling = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) +
                           1.0 / (12.0 * z) - 1.0 / (360.0 * std::pow(z, 3)) +
                           1.0 / (1260.0 * std::pow(z, 5)) - 1.0 / (1680.0 * std::pow(z, 7));
  CHECK(std::abs(log_gamma(z) - stirling) < 1e-12);
}

TEST_CASE("Gamma at 1 + i y has modulus sqrt(pi y / sinh(pi y))") {
  for (double y : {0.5, 1.0, 3.0}) {
    const double expected = std::sqrt(std::numbers::pi * y / std::sinh(std::numbers::pi * y));
    CHECK(std::abs(std::abs(gamma({1.0, y})) - expected) < 1e-13);
  }
}

TEST_CASE("poles raise PoleAt") {
  for (double x : {0.0, -1.0, -4.0}) {
    try {
      (void)log_gamma({x, 0.0});
      FAIL("expected PoleAt");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PoleAt);
    }
  }
  CHECK_NOTHROW(log_gamma({-1.0, 1e-3}));
}

TEST_CASE("Gamma_R and Gamma_C") {
  CHECK(rel(gamma_C({1.0, 0.0}), 1.0 / std::numbers::pi) < 1e-14);
  CHECK(rel(gamma_R({2.0, 0.0}), 1.0 / std::numbers::pi) < 1e-14);
  // Legendre duplication: Gamma_R(s) Gamma_R(s+1) = Gamma_C(s).
  for (double s : {0.3, 1.1, 2.5}) {
    const Complex z{s, 0.7};
    CHECK(rel(gamma_R(z) * gamma_R(z + 1.0), gamma_C(z)) < 1e-13);
  }
}

TEST_CASE("L-factor of a discrete series twist") {
  const RealCharacter chi(1, {0.25, 0.0});
  const Complex s{0.6, 1.2};
  const LFactorValue v = l_factor_sigma(3, 2, chi, s);
  const Complex z = s + 0.25 + 1.0 + 1.5;
  CHECK(rel(v.value, 2.0 * std::pow(2.0 * std::numbers::pi, -z) * gamma(z)) < 1e-13);
  REQUIRE(v.gamma_c_args.size() == 1);
  CHECK(std::abs(v.gamma_c_args[0] - z) < 1e-15);
  CHECK_FALSE(v.description().empty());
}

TEST_CASE("L(s, pi) for l = (5,1), m = 2 is Gamma_C(s+7/2) Gamma_C(s+3/2)") {
  const auto p = InducedParams::from_weight(HighestWeight({2, 1, 1, 0}));
  for (double re : {0.1, 0.5, 2.0}) {
    const Complex s{re, -0.4};
    const Complex expected = gamma_C(s + 3.5) * gamma_C(s + 1.5);
    CHECK(rel(l_factor_pi(p, RealCharacter::trivial(), s).value, expected) < 1e-13);
    // The sign of chi does not enter the archimedean factor.
    CHECK(rel(l_factor_pi(p, RealCharacter::sign(), s).value, expected) < 1e-13);
  }
}

TEST_CASE("L-factor at a pole propagates PoleAt") {
  const auto p = InducedParams::from_weight(HighestWeight({0, 0}));
  // Gamma_C(s + 1/2) has a pole at s = -1/2.
  try {
    (void)l_factor_pi(p, RealCharacter::trivial(), {-0.5, 0.0});
    FAIL("expected PoleAt");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleAt);
  }
}
