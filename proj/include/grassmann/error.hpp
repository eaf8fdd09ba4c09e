#pragma once

#include <stdexcept>
#include <string>

namespace grassmann {

enum class ErrorKind {
  split_failure,
  chart_domain_violation,
  dimension_mismatch,
  chart_mismatch,
  factor_mismatch,
  bad_profile,
  ladder_mismatch,
  predual_unavailable,
  label_mismatch,
  config_error,
  parse_error,
  invalid_argument,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the verifier) can tell expected refusals from bugs.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace grassmann
