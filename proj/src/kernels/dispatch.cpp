#include <atomic>
#include <cstdlib>
#include <string_view>

#include "fqlab/kernels.hpp"

namespace fqlab::kernels {
namespace {

#if defined(FQLAB_HAVE_AVX2)
bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#else
bool cpu_has_avx2() noexcept { return false; }
#endif

Isa detect() noexcept {
  const bool have = cpu_has_avx2();
  if (const char* env = std::getenv("FQLAB_SIMD")) {
    if (std::string_view(env) == "scalar") return Isa::Scalar;
  }
  return have ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() noexcept { return cpu_has_avx2(); }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) noexcept {
  if (isa == Isa::Avx2 && !cpu_has_avx2()) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
}

void eval_grid(std::span<const Term> terms, double x0, double dx, std::span<double> out_re,
               std::span<double> out_im) {
#if defined(FQLAB_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::eval_grid(terms, x0, dx, out_re, out_im);
#endif
  scalar::eval_grid(terms, x0, dx, out_re, out_im);
}

std::complex<double> paired_reciprocal_sum(std::span<const double> zeros, std::complex<double> w) {
#if defined(FQLAB_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::paired_reciprocal_sum(zeros, w);
#endif
  return scalar::paired_reciprocal_sum(zeros, w);
}

}  // namespace fqlab::kernels

#if !defined(FQLAB_HAVE_AVX2)
// Non-x86 builds: keep the avx2 names linkable so equivalence tests still run.
namespace fqlab::kernels::avx2 {
void eval_grid(std::span<const Term> terms, double x0, double dx, std::span<double> out_re,
               std::span<double> out_im) {
  scalar::eval_grid(terms, x0, dx, out_re, out_im);
}
std::complex<double> paired_reciprocal_sum(std::span<const double> zeros, std::complex<double> w) {
  return scalar::paired_reciprocal_sum(zeros, w);
}
}  // namespace fqlab::kernels::avx2
#endif
