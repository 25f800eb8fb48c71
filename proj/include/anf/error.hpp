#pragma once

#include <stdexcept>
#include <string>

namespace anf {

enum class ErrorKind {
  InvalidArgument,
  InvalidGrid,
  NonEmbeddable,
  MixedInputs,
  OutOfBounds,
  EmptyMask,
  EmptySamples,
  IntervalOutOfRange,
  DomainError,
  IoFailure,
  ConfigError,
  SoundnessViolation,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::NonEmbeddable: return "NonEmbeddable";
    case ErrorKind::MixedInputs: return "MixedInputs";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::EmptyMask: return "EmptyMask";
    case ErrorKind::EmptySamples: return "EmptySamples";
    case ErrorKind::IntervalOutOfRange: return "IntervalOutOfRange";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::SoundnessViolation: return "SoundnessViolation";
  }
  return "Unknown";
}

/// Library-wide exception; `kind()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace anf
