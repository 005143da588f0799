#include "testvector/spectral_params.hpp"

#include <cmath>

#include "json.hpp"
#include "testvector/error.hpp"

namespace testvector {

namespace {

int mod2(long v) { return static_cast<int>(((v % 2) + 2) % 2); }

}  // namespace

HighestWeight::HighestWeight(std::vector<long> nu) : nu_(std::move(nu)) {
  if (nu_.size() < 2 || nu_.size() % 2 != 0) {
    fail(ErrorCode::InvalidArgument,
         "highest weight must have even length >= 2, got " + std::to_string(nu_.size()));
  }
  for (std::size_t i = 0; i + 1 < nu_.size(); ++i) {
    if (nu_[i] < nu_[i + 1]) {
      fail(ErrorCode::InvalidArgument,
           "highest weight must be weakly decreasing (position " + std::to_string(i + 1) + ")",
           static_cast<long>(i + 1));
    }
  }
}

RealCharacter::RealCharacter(int sign, Complex p) : sign_exponent(sign), power(p) {
  if (sign != 0 && sign != 1) {
    fail(ErrorCode::InvalidArgument, "sign exponent must be 0 or 1");
  }
}

RealCharacter RealCharacter::operator*(const RealCharacter& other) const {
  return {(sign_exponent + other.sign_exponent) % 2, power + other.power};
}

RealCharacter RealCharacter::inverse() const { return {sign_exponent, -power}; }

Complex eval_character(const RealCharacter& c, double a) {
  if (a == 0.0) fail(ErrorCode::InvalidArgument, "character evaluated at 0");
  const double sign = (a < 0.0 && c.sign_exponent == 1) ? -1.0 : 1.0;
  if (c.power == Complex{0.0, 0.0}) return {sign, 0.0};
  return sign * std::exp(c.power * std::log(std::abs(a)));
}

long check_purity(const HighestWeight& nu) {
  const auto& v = nu.values();
  const std::size_t len = v.size();
  const long m = v.front() + v.back();
  for (std::size_t i = 1; i < len / 2; ++i) {
    if (v[i] + v[len - 1 - i] != m) {
      fail(ErrorCode::PurityViolation,
           "purity violated at pair " + std::to_string(i + 1) + ": nu_" + std::to_string(i + 1) +
               " + nu_" + std::to_string(len - i) + " = " + std::to_string(v[i] + v[len - 1 - i]) +
               " != " + std::to_string(m),
           static_cast<long>(i + 1));
    }
  }
  return m;
}

std::vector<long> l_vector(const HighestWeight& nu, long m) {
  const auto& v = nu.values();
  const long two_n = static_cast<long>(v.size());
  const long n = two_n / 2;
  std::vector<long> l(n);
  for (long i = 1; i <= n; ++i) {
    l[i - 1] = v[i - 1] - v[two_n - i] + (two_n + 1 - 2 * i);
  }
  for (long j = 0; j < n; ++j) {
    if (l[j] < 1 || mod2(l[j]) == mod2(m)) {
      fail(ErrorCode::ConstructionBug, "l-vector entry has wrong sign or parity");
    }
    if (j + 1 < n && l[j] - l[j + 1] < 2) {
      fail(ErrorCode::ConstructionBug, "l-vector gap smaller than 2");
    }
  }
  return l;
}

InducedParams InducedParams::from_weight(const HighestWeight& nu) {
  InducedParams p;
  p.n = nu.n();
  p.m = check_purity(nu);
  p.l = l_vector(nu, p.m);
  p.N.reserve(p.l.size());
  for (long lj : p.l) p.N.push_back(lj + 1);
  p.omega = RealCharacter(mod2(p.m), Complex(static_cast<double>(p.m), 0.0));
  p.omega0_sign = mod2(p.m);
  return p;
}

CentralCharacters central_characters(const InducedParams& params) {
  const long mn = params.m * params.n;
  CentralCharacters out;
  out.omega = RealCharacter(mod2(params.m), Complex(static_cast<double>(params.m), 0.0));
  out.omega_pi = RealCharacter(mod2(params.m) == 1 ? mod2(mn) : 0,
                               Complex(static_cast<double>(mn), 0.0));
  return out;
}

RealCharacter discrete_series_central_char(long k) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "discrete series index must be >= 1");
  return k % 2 == 1 ? RealCharacter::trivial() : RealCharacter::sign();
}

bool parity_compatible(const std::vector<long>& N, int omega0_sign) {
  if (N.empty()) fail(ErrorCode::InvalidArgument, "empty N-vector");
  const int parity = mod2(N.front());
  for (long v : N) {
    if (mod2(v) != parity) fail(ErrorCode::ParityViolation, "N-vector has mixed parity");
  }
  return (parity == 0 && omega0_sign == 0) || (parity == 1 && omega0_sign == 1);
}

long modular_symbol_dimension(long n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  return n * n + n - 1;
}

std::string ParamSpec::to_json() const {
  nlohmann::json j;
  j["nu"] = nu;
  j["chi"] = {{"sign", chi.sign_exponent}, {"power", {chi.power.real(), chi.power.imag()}}};
  return j.dump();
}

ParamSpec ParamSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("malformed parameter JSON: ") + e.what());
  }
  ParamSpec spec;
  try {
    spec.nu = j.at("nu").get<std::vector<long>>();
    if (j.contains("chi")) {
      const auto& c = j.at("chi");
      const int sign = c.value("sign", 0);
      Complex power{0.0, 0.0};
      if (c.contains("power")) {
        const auto p = c.at("power").get<std::vector<double>>();
        if (p.size() != 2) fail(ErrorCode::InvalidArgument, "chi.power must be [re, im]");
        power = {p[0], p[1]};
      }
      spec.chi = RealCharacter(sign, power);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("invalid parameter JSON: ") + e.what());
  }
  return spec;
}

}  // namespace testvector
