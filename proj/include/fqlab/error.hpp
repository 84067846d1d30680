#pragma once

#include <stdexcept>
#include <string>

namespace fqlab {

enum class ErrorKind {
  InvalidArgument,
  Parse,
  OutOfRange,
  Tangency,
  GridTooCoarse,
  ContourNearZero,
  QuadratureNotConverged,
  HiddenNonRealZeros,
  CertificationFailed,
  AtomBudgetExceeded,
  NonNegativeFrequency,
  NoConvergence,
  VanishingConstant,
  BelowReferenceHeight,
  HermitianMismatch,
  ZeroAtOrigin,
  MarginTooSmall,
  NotRelativelyUniformlyDiscrete,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` lets callers (the CLI in
/// particular) map failures onto stable exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fqlab
