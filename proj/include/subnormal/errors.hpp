#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subnormal {

enum class ErrorCode {
  InvalidMeasure,
  ZeroAtomNegativeMoment,
  InvalidTriple,
  OutOfDomain,
  InvalidData,
  ShapeMismatch,
  LengthMismatch,
  InfeasibleProfile,
  NoThetaBudget,
  NotFlat,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace subnormal
