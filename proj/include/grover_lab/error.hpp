#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grover_lab {

/// Machine-readable failure categories. The CLI prints these verbatim in
/// its `{code, message}` error objects.
enum class ErrorCode {
  invalid_variant,
  invalid_argument,
  type_mismatch,
  cap_exceeded,
  not_closed,
  no_match,
  side_condition_failed,
  invalid_f,
  invalid_counts,
  domain_error,
  dimension_mismatch,
  io_not_found,
  parse_error,
  type_error,
};

inline std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_variant: return "invalid-variant";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::type_mismatch: return "type-mismatch";
    case ErrorCode::cap_exceeded: return "cap-exceeded";
    case ErrorCode::not_closed: return "not-closed";
    case ErrorCode::no_match: return "no-match";
    case ErrorCode::side_condition_failed: return "side-condition-failed";
    case ErrorCode::invalid_f: return "invalid-f";
    case ErrorCode::invalid_counts: return "invalid-counts";
    case ErrorCode::domain_error: return "domain-error";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::io_not_found: return "io-not-found";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::type_error: return "type-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace grover_lab
