#pragma once

// Process exit codes of the anfield front end.

#include <anf/error.hpp>

#include <cstddef>

namespace anf {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitViolation = 3;
inline constexpr int kExitNonEmbeddable = 4;

inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ConfigError: return kExitConfig;
    case ErrorKind::NonEmbeddable: return kExitNonEmbeddable;
    case ErrorKind::SoundnessViolation: return kExitViolation;
    default: return kExitFailure;
  }
}

inline int exit_code_for_violations(std::size_t violations) noexcept {
  return violations > 0 ? kExitViolation : kExitSuccess;
}

}  // namespace anf
