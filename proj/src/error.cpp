#include "distcheck/error.hpp"

namespace distcheck {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::Safety: return "SafetyError";
    case ErrorCode::MixedEquality: return "MixedEqualityError";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::SubsetViolation: return "SubsetViolation";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::NotDataFull: return "NotDataFull";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::Fragment: return "FragmentError";
    case ErrorCode::Consistency: return "ConsistencyError";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::StateSpaceCap: return "StateSpaceCap";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::WordAlphabetMismatch: return "WordAlphabetMismatch";
    case ErrorCode::Usage: return "UsageError";
    case ErrorCode::Internal: return "InternalError";
  }
  return "Error";
}

std::string Error::format(ErrorCode code, const std::string& msg,
                          const std::optional<SourceSpan>& span) {
  std::string out = error_code_name(code);
  if (span) {
    out += " at ";
    if (!span->file.empty()) out += span->file + ":";
    out += std::to_string(span->line) + ":" + std::to_string(span->col);
  }
  out += ": " + msg;
  return out;
}

}  // namespace distcheck
