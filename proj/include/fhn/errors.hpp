#pragma once

#include <stdexcept>
#include <string>

namespace fhn {

enum class ErrorCode {
  NoRoot,
  DegenerateC,
  ConvergenceFailure,
  OutOfDomain,
  StepTooLarge,
  StepTooCoarse,
  NonFinite,
  HorizonExceeded,
  ChartInvalid,
  NotConverged,
  InsufficientTail,
  ConfigError,
};

class FhnError : public std::runtime_error {
 public:
  FhnError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::DegenerateC: return "DegenerateC";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::ChartInvalid: return "ChartInvalid";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::InsufficientTail: return "InsufficientTail";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace fhn
