#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and an AVX2
// variant; the dispatched entry points pick one at runtime from CPU support,
// overridable with FQLAB_SIMD=scalar|avx2 or force_isa().

#include <complex>
#include <span>

#include "fqlab/exppoly.hpp"

namespace fqlab::kernels {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa) noexcept;
bool avx2_available() noexcept;
Isa active_isa() noexcept;
/// Test hook; selecting Avx2 on a machine without it falls back to Scalar.
void force_isa(Isa isa) noexcept;

/// out[j] = p(x0 + j·dx) for j < out_re.size(). Both spans must be the same length.
void eval_grid(std::span<const Term> terms, double x0, double dx, std::span<double> out_re,
               std::span<double> out_im);

/// Σ_λ (1/(w−λ) + 1/λ), each pair evaluated as w / (λ(w−λ)).
std::complex<double> paired_reciprocal_sum(std::span<const double> zeros, std::complex<double> w);

namespace scalar {
void eval_grid(std::span<const Term> terms, double x0, double dx, std::span<double> out_re,
               std::span<double> out_im);
std::complex<double> paired_reciprocal_sum(std::span<const double> zeros, std::complex<double> w);
}  // namespace scalar

namespace avx2 {
void eval_grid(std::span<const Term> terms, double x0, double dx, std::span<double> out_re,
               std::span<double> out_im);
std::complex<double> paired_reciprocal_sum(std::span<const double> zeros, std::complex<double> w);
}  // namespace avx2

}  // namespace fqlab::kernels
