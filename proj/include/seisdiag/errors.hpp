#ifndef SEISDIAG_ERRORS_HPP
#define SEISDIAG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace seisdiag {

enum class ErrorKind {
  InvalidSignal,
  ChannelMismatch,
  DegenerateDenominator,
  DimensionError,
  InvalidInput,
  NonConvergence,
  ParseError,
  ClassError,
  EmptyReport,
  InsufficientData,
  DegenerateDataset,
  IntegrationFailure,
  ConfigError,
  IoError,
};

const char* error_kind_name(ErrorKind kind);

/// All recoverable failures in the core are thrown as Error. The C API maps
/// the kind onto its status codes; the CLI maps those onto exit codes.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const { return kind_; }

  /// Message without the kind prefix.
  const std::string& message() const { return message_; }

  /// True for failures of numerical procedures (as opposed to bad inputs).
  bool numeric() const {
    return kind_ == ErrorKind::NonConvergence || kind_ == ErrorKind::IntegrationFailure;
  }

private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

} // namespace seisdiag

#endif
