#include "ouhjb/error.hpp"

namespace ouhjb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPositiveAlpha: return "NonPositiveAlpha";
    case ErrorCode::SingularSigma: return "SingularSigma";
    case ErrorCode::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::AsymmetricVarrho: return "AsymmetricVarrho";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::MissingStageValue: return "MissingStageValue";
    case ErrorCode::NotDecoupled: return "NotDecoupled";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NonPositiveWealth: return "NonPositiveWealth";
    case ErrorCode::PhiUnderflow: return "PhiUnderflow";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonFinitePath: return "NonFinitePath";
    case ErrorCode::MissingPhi: return "MissingPhi";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ouhjb
