#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace tvcli {

using Complex = std::complex<double>;

/// Run configuration, read from a key=value text file and overridden by
/// command-line flags.
///
///   nu = 2 1 1 0
///   chi_sign = 0
///   chi_power = 0,0
///   s = 0.5,0 1,0.25
///   seed = 1
///   samples = 100000
///   trials = 1000
///   quad_nodes = 4000
///   quad_t_lo = -30
///   quad_t_hi = 10
///   quad_tolerance = 1e-10
///   output =
///
/// Lines starting with '#' are comments. Complex numbers are written re,im
/// (or just re). to_text() emits every key in the order above with the
/// shortest round-trip formatting of each number.
struct RunConfig {
  std::vector<long> nu{2, 1, 1, 0};
  int chi_sign = 0;
  Complex chi_power{0.0, 0.0};
  std::vector<Complex> s{{0.5, 0.0}};
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  std::size_t trials = 1000;
  int quad_nodes = 4000;
  double quad_t_lo = -30.0;
  double quad_t_hi = 10.0;
  double quad_tolerance = 1e-10;
  std::string output;

  std::string to_text() const;
  /// Throws std::invalid_argument with the offending line on bad input.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);

  /// Applies one key=value assignment.
  void set(const std::string& key, const std::string& value);

  bool operator==(const RunConfig&) const = default;
};

std::string format_double(double v);
double parse_double(const std::string& text);
Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);
std::vector<long> parse_long_list(const std::string& text);

}  // namespace tvcli
