#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swiftagg {

enum class ErrorCode {
  kNotPrime,
  kMixedField,
  kDivisionByZero,
  kLengthMismatch,
  kInsufficientPoints,
  kDuplicateAbscissa,
  kConsistencyError,
  kZeroEvaluationPoint,
  kArityMismatch,
  kInvalidParams,
  kIndivisibleN,
  kPhaseViolation,
  kWrongSequence,
  kTooManyDropouts,
  kViewLeak,
  kTooLarge,
  kConfigError,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace swiftagg
