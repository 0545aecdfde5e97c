#pragma once

#include <stdexcept>
#include <string>

namespace qtqme {

enum class ErrorCode {
  SizeNotPowerOfTwo,
  DegenerateEquation,
  NullDrift,
  MaxPointsExceeded,
  NotContraction,
  InvalidParameter,
  ErgodicityViolation,
  DriftViolation,
  BackSubstitutionFailed,
  MaxIterExceeded,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qtqme
