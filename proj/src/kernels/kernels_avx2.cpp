// Built with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "fqlab/kernels.hpp"

namespace fqlab::kernels::avx2 {
namespace {

// Phases are re-seeded exactly every block so the rotation recurrence drifts
// by at most kSteps complex multiplies.
constexpr std::size_t kLanes = 4;
constexpr std::size_t kSteps = 16;
constexpr std::size_t kBlock = kLanes * kSteps;

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void eval_grid(std::span<const Term> terms, double x0, double dx, std::span<double> out_re,
               std::span<double> out_im) {
  const std::size_t n = out_re.size();
  std::size_t j0 = 0;
  alignas(32) double seed_re[kLanes];
  alignas(32) double seed_im[kLanes];
  for (; j0 + kBlock <= n; j0 += kBlock) {
    __m256d acc_re[kSteps];
    __m256d acc_im[kSteps];
    for (std::size_t m = 0; m < kSteps; ++m) {
      acc_re[m] = _mm256_setzero_pd();
      acc_im[m] = _mm256_setzero_pd();
    }
    for (const auto& t : terms) {
      for (std::size_t l = 0; l < kLanes; ++l) {
        const double x = x0 + dx * static_cast<double>(j0 + l);
        seed_re[l] = std::cos(t.gamma * x);
        seed_im[l] = std::sin(t.gamma * x);
      }
      const double step = t.gamma * dx * static_cast<double>(kLanes);
      const __m256d rot_re = _mm256_set1_pd(std::cos(step));
      const __m256d rot_im = _mm256_set1_pd(std::sin(step));
      const __m256d b_re = _mm256_set1_pd(t.amplitude.real());
      const __m256d b_im = _mm256_set1_pd(t.amplitude.imag());
      __m256d z_re = _mm256_load_pd(seed_re);
      __m256d z_im = _mm256_load_pd(seed_im);
      for (std::size_t m = 0; m < kSteps; ++m) {
        // acc += b·z
        acc_re[m] = _mm256_fmadd_pd(b_re, z_re, acc_re[m]);
        acc_re[m] = _mm256_fnmadd_pd(b_im, z_im, acc_re[m]);
        acc_im[m] = _mm256_fmadd_pd(b_re, z_im, acc_im[m]);
        acc_im[m] = _mm256_fmadd_pd(b_im, z_re, acc_im[m]);
        // z *= rot
        const __m256d nre = _mm256_fmsub_pd(z_re, rot_re, _mm256_mul_pd(z_im, rot_im));
        const __m256d nim = _mm256_fmadd_pd(z_re, rot_im, _mm256_mul_pd(z_im, rot_re));
        z_re = nre;
        z_im = nim;
      }
    }
    for (std::size_t m = 0; m < kSteps; ++m) {
      _mm256_storeu_pd(out_re.data() + j0 + m * kLanes, acc_re[m]);
      _mm256_storeu_pd(out_im.data() + j0 + m * kLanes, acc_im[m]);
    }
  }
  if (j0 < n) {
    scalar::eval_grid(terms, x0 + dx * static_cast<double>(j0), dx, out_re.subspan(j0),
                      out_im.subspan(j0));
  }
}

std::complex<double> paired_reciprocal_sum(std::span<const double> zeros, std::complex<double> w) {
  const __m256d wr = _mm256_set1_pd(w.real());
  const __m256d wi = _mm256_set1_pd(w.imag());
  __m256d sum_re = _mm256_setzero_pd();
  __m256d sum_im = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + kLanes <= zeros.size(); j += kLanes) {
    const __m256d lam = _mm256_loadu_pd(zeros.data() + j);
    // λ(w−λ) = A + iB
    const __m256d a = _mm256_mul_pd(lam, _mm256_sub_pd(wr, lam));
    const __m256d b = _mm256_mul_pd(lam, wi);
    const __m256d den = _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b));
    const __m256d num_re = _mm256_fmadd_pd(wr, a, _mm256_mul_pd(wi, b));
    const __m256d num_im = _mm256_fmsub_pd(wi, a, _mm256_mul_pd(wr, b));
    sum_re = _mm256_add_pd(sum_re, _mm256_div_pd(num_re, den));
    sum_im = _mm256_add_pd(sum_im, _mm256_div_pd(num_im, den));
  }
  std::complex<double> out(hsum(sum_re), hsum(sum_im));
  if (j < zeros.size()) out += scalar::paired_reciprocal_sum(zeros.subspan(j), w);
  return out;
}

}  // namespace fqlab::kernels::avx2
