#include "qtqme/errors.hpp"

namespace qtqme {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeNotPowerOfTwo: return "SizeNotPowerOfTwo";
    case ErrorCode::DegenerateEquation: return "DegenerateEquation";
    case ErrorCode::NullDrift: return "NullDrift";
    case ErrorCode::MaxPointsExceeded: return "MaxPointsExceeded";
    case ErrorCode::NotContraction: return "NotContraction";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ErgodicityViolation: return "ErgodicityViolation";
    case ErrorCode::DriftViolation: return "DriftViolation";
    case ErrorCode::BackSubstitutionFailed: return "BackSubstitutionFailed";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace qtqme
