#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridstealth {

enum class ErrorKind {
  // case parsing
  malformed_case,
  slack_bus_violation,
  degenerate_branch,
  unknown_bus,
  // grid model
  islanded_network,
  degenerate_system,
  // statistics
  invalid_correlation,
  shape_error,
  not_symmetric,
  not_psd,
  degenerate_signal,
  insufficient_samples,
  not_positive_definite,
  undefined_normalization,
  // detection
  invalid_alpha,
  insufficient_resolution,
  // harness
  config_error,
  io_error,
};

/// Coarse failure class used by the CLI to pick an exit code.
enum class ErrorClass { input, numerical };

ErrorClass classify(ErrorKind kind) noexcept;

/// Short stable label for a kind, e.g. "slack bus violation".
std::string_view label(ErrorKind kind) noexcept;

/// Every failure raised by the library. what() is "<label>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gridstealth
