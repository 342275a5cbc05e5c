#include "core/support/error.hpp"

namespace semiflow {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::MarginViolation: return "MarginViolation";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::CurveExitsDomain: return "CurveExitsDomain";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::TrajectoryEscape: return "TrajectoryEscape";
    case ErrorCode::StiffnessFailure: return "StiffnessFailure";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::ContractViolation: return "ContractViolation";
    case ErrorCode::HypothesisNotMet: return "HypothesisNotMet";
    case ErrorCode::NoDelta1: return "NoDelta1";
    case ErrorCode::Diverging: return "Diverging";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace semiflow
