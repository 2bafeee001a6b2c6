#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bjortho {

enum class ErrorCode {
  DimMismatch,
  InvalidSpec,
  ParseError,
  ZeroVector,
  NotSmoothPoint,
  MtUnresolved,
  ZeroOperator,
  SpecNotScSmooth,
  NotAntipodalMt,
  HypothesisFailed,
  BudgetExhausted,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimMismatch: return "DIM_MISMATCH";
    case ErrorCode::InvalidSpec: return "INVALID_SPEC";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ZeroVector: return "ZERO_VECTOR";
    case ErrorCode::NotSmoothPoint: return "NOT_SMOOTH_POINT";
    case ErrorCode::MtUnresolved: return "MT_UNRESOLVED";
    case ErrorCode::ZeroOperator: return "ZERO_OPERATOR";
    case ErrorCode::SpecNotScSmooth: return "SPEC_NOT_SC_SMOOTH";
    case ErrorCode::NotAntipodalMt: return "NOT_ANTIPODAL_MT";
    case ErrorCode::HypothesisFailed: return "HYPOTHESIS_FAILED";
    case ErrorCode::BudgetExhausted: return "BUDGET_EXHAUSTED";
  }
  return "UNKNOWN";
}

}  // namespace bjortho
