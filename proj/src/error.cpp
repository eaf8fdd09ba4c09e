#include "grassmann/error.hpp"

namespace grassmann {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::split_failure: return "SplitFailure";
    case ErrorKind::chart_domain_violation: return "ChartDomainViolation";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::chart_mismatch: return "ChartMismatch";
    case ErrorKind::factor_mismatch: return "FactorMismatch";
    case ErrorKind::bad_profile: return "BadProfile";
    case ErrorKind::ladder_mismatch: return "LadderMismatch";
    case ErrorKind::predual_unavailable: return "PredualUnavailable";
    case ErrorKind::label_mismatch: return "LabelMismatch";
    case ErrorKind::config_error: return "ConfigError";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace grassmann
