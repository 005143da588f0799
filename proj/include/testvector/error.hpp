#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace testvector {

enum class ErrorCode {
  InvalidArgument,
  PurityViolation,
  ParityViolation,
  PoleAt,
  Divergence,
  QuadratureNonConvergence,
  ConstructionBug,
  IllConditioned,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. `detail()` carries an index or
/// count when the error refers to one (e.g. the failing pair of a purity
/// check); otherwise it is -1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long detail = -1)
      : std::runtime_error(message), code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  long detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  long detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message,
                              long detail = -1) {
  throw Error(code, message, detail);
}

}  // namespace testvector
