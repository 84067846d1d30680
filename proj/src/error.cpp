#include "fqlab/error.hpp"

namespace fqlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::OutOfRange: return "evaluation out of range";
    case ErrorKind::Tangency: return "tangency suspected";
    case ErrorKind::GridTooCoarse: return "grid too coarse";
    case ErrorKind::ContourNearZero: return "contour near zero";
    case ErrorKind::QuadratureNotConverged: return "quadrature not converged";
    case ErrorKind::HiddenNonRealZeros: return "hidden non-real zeros";
    case ErrorKind::CertificationFailed: return "certification failed";
    case ErrorKind::AtomBudgetExceeded: return "atom budget exceeded";
    case ErrorKind::NonNegativeFrequency: return "non-negative frequency in exponent";
    case ErrorKind::NoConvergence: return "no convergence";
    case ErrorKind::VanishingConstant: return "vanishing constant term";
    case ErrorKind::BelowReferenceHeight: return "below reference height";
    case ErrorKind::HermitianMismatch: return "Hermitian mismatch";
    case ErrorKind::ZeroAtOrigin: return "zero at origin";
    case ErrorKind::MarginTooSmall: return "margin too small";
    case ErrorKind::NotRelativelyUniformlyDiscrete:
      return "not relatively uniformly discrete at tolerance";
  }
  return "unknown error";
}

}  // namespace fqlab
