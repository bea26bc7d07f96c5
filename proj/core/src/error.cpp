#include "gridstealth/error.hpp"

namespace gridstealth {

std::string_view label(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::malformed_case: return "malformed case";
    case ErrorKind::slack_bus_violation: return "slack bus violation";
    case ErrorKind::degenerate_branch: return "degenerate branch";
    case ErrorKind::unknown_bus: return "unknown bus";
    case ErrorKind::islanded_network: return "islanded network";
    case ErrorKind::degenerate_system: return "degenerate system";
    case ErrorKind::invalid_correlation: return "invalid correlation strength";
    case ErrorKind::shape_error: return "shape error";
    case ErrorKind::not_symmetric: return "matrix not symmetric";
    case ErrorKind::not_psd: return "matrix not positive semi-definite";
    case ErrorKind::degenerate_signal: return "degenerate signal";
    case ErrorKind::insufficient_samples: return "insufficient samples";
    case ErrorKind::not_positive_definite: return "second argument must be positive definite";
    case ErrorKind::undefined_normalization: return "undefined normalization";
    case ErrorKind::invalid_alpha: return "invalid alpha";
    case ErrorKind::insufficient_resolution: return "insufficient Monte Carlo resolution";
    case ErrorKind::config_error: return "config error";
    case ErrorKind::io_error: return "io error";
  }
  return "unknown error";
}

ErrorClass classify(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::islanded_network:
    case ErrorKind::degenerate_system:
    case ErrorKind::not_symmetric:
    case ErrorKind::not_psd:
    case ErrorKind::degenerate_signal:
    case ErrorKind::not_positive_definite:
    case ErrorKind::undefined_normalization:
    case ErrorKind::insufficient_resolution:
      return ErrorClass::numerical;
    default:
      return ErrorClass::input;
  }
}

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(detail.empty() ? std::string(label(kind))
                                        : std::string(label(kind)) + ": " + detail),
      kind_(kind) {}

}  // namespace gridstealth
