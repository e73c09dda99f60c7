#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace distcheck {

/// 1-based position of a token in an input file.
struct SourceSpan {
  std::string file;
  int line = 1;
  int col = 1;
};

enum class ErrorCode {
  Syntax,
  Safety,
  MixedEquality,
  ArityMismatch,
  SubsetViolation,
  UnknownSymbol,
  NotDataFull,
  NotApplicable,
  DomainMismatch,
  Fragment,
  Consistency,
  BudgetExceeded,
  StateSpaceCap,
  UnsupportedDimension,
  WordAlphabetMismatch,
  Usage,
  Internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg,
        std::optional<SourceSpan> span = std::nullopt)
      : std::runtime_error(format(code, msg, span)),
        code_(code),
        span_(std::move(span)) {}

  ErrorCode code() const { return code_; }
  const std::optional<SourceSpan>& span() const { return span_; }

 private:
  static std::string format(ErrorCode code, const std::string& msg,
                            const std::optional<SourceSpan>& span);

  ErrorCode code_;
  std::optional<SourceSpan> span_;
};

}  // namespace distcheck
