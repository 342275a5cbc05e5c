#pragma once

#include <stdexcept>
#include <string>

namespace semiflow {

enum class ErrorCode {
  BadParameter,
  OutsideDomain,
  MarginViolation,
  EmptySample,
  CurveExitsDomain,
  Unreachable,
  Unsupported,
  TrajectoryEscape,
  StiffnessFailure,
  DegeneratePair,
  ContractViolation,
  HypothesisNotMet,
  NoDelta1,
  Diverging,
  ConfigError,
  IoError,
  Internal,
};

const char* error_code_name(ErrorCode code);

/// All failures in the core surface as this exception; the C layer maps
/// code() onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_code_name(code)) + ": " + message);
}

inline void require(bool cond, ErrorCode code, const std::string& message) {
  if (!cond) fail(code, message);
}

}  // namespace semiflow
