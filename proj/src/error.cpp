#include "testvector/error.hpp"

namespace testvector {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PurityViolation: return "PurityViolation";
    case ErrorCode::ParityViolation: return "ParityViolation";
    case ErrorCode::PoleAt: return "PoleAt";
    case ErrorCode::Divergence: return "Divergence";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::ConstructionBug: return "ConstructionBug";
    case ErrorCode::IllConditioned: return "IllConditioned";
  }
  return "Unknown";
}

}  // namespace testvector
