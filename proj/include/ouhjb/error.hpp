#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ouhjb {

enum class ErrorCode {
  DimensionMismatch,
  NonPositiveAlpha,
  SingularSigma,
  GammaOutOfRange,
  AsymmetricVarrho,
  InvalidParameter,
  StepTooLarge,
  MissingStageValue,
  NotDecoupled,
  ResolutionTooCoarse,
  Overflow,
  NonPositiveWealth,
  PhiUnderflow,
  EigenFailure,
  SingularSystem,
  NonFinitePath,
  MissingPhi,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers which
/// contract was violated, `what()` names the offending field or node.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ouhjb
