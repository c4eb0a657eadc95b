#include "subnormal/errors.hpp"

namespace subnormal {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::ZeroAtomNegativeMoment: return "ZeroAtomNegativeMoment";
    case ErrorCode::InvalidTriple: return "InvalidTriple";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InfeasibleProfile: return "InfeasibleProfile";
    case ErrorCode::NoThetaBudget: return "NoThetaBudget";
    case ErrorCode::NotFlat: return "NotFlat";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace subnormal
