#include "testvector/lfactors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "testvector/error.hpp"

namespace testvector {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_pole(Complex z) {
  if (std::abs(z.imag()) > 1e-12 || z.real() > 0.5) return false;
  return std::abs(z.real() - std::round(z.real())) <= 1e-12;
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(12);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

Complex log_gamma(Complex z) {
  if (is_pole(z)) fail(ErrorCode::PoleAt, "Gamma has a pole at " + format_complex(z));
  const double pi = std::numbers::pi;
  if (z.real() < 0.5) {
    // Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
  }
  const Complex zm = z - 1.0;
  Complex sum = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    sum += kLanczosCoeffs[i] / (zm + static_cast<double>(i));
  }
  const Complex t = zm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * pi) + (zm + 0.5) * std::log(t) - t + std::log(sum);
}

Complex gamma_R(Complex s) {
  const double pi = std::numbers::pi;
  return std::exp(-0.5 * s * std::log(pi) + log_gamma(0.5 * s));
}

Complex gamma_C(Complex s) {
  const double pi = std::numbers::pi;
  return std::exp(std::log(2.0) - s * std::log(2.0 * pi) + log_gamma(s));
}

std::string LFactorValue::description() const {
  std::string out;
  for (std::size_t i = 0; i < gamma_c_args.size(); ++i) {
    if (i) out += " * ";
    out += "Gamma_C(" + format_complex(gamma_c_args[i]) + ")";
  }
  return out.empty() ? "1" : out;
}

LFactorValue l_factor_sigma(long k, long m, const RealCharacter& chi, Complex s) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "discrete series index must be >= 1");
  // D_k is fixed by the sign twist, so only |.|^u shifts the argument.
  const Complex z = s + chi.power + 0.5 * static_cast<double>(m) + 0.5 * static_cast<double>(k);
  return {gamma_C(z), s, {z}};
}

LFactorValue l_factor_pi(const InducedParams& params, const RealCharacter& chi, Complex s) {
  LFactorValue out{Complex{1.0, 0.0}, s, {}};
  for (long lj : params.l) {
    const auto f = l_factor_sigma(lj, params.m, chi, s);
    out.value *= f.value;
    out.gamma_c_args.push_back(f.gamma_c_args.front());
  }
  return out;
}

}  // namespace testvector
