#include <cmath>

#include "fqlab/compensated.hpp"
#include "fqlab/kernels.hpp"

namespace fqlab::kernels::scalar {

void eval_grid(std::span<const Term> terms, double x0, double dx, std::span<double> out_re,
               std::span<double> out_im) {
  for (std::size_t j = 0; j < out_re.size(); ++j) {
    const double x = x0 + dx * static_cast<double>(j);
    double re = 0.0;
    double im = 0.0;
    for (const auto& t : terms) {
      const double c = std::cos(t.gamma * x);
      const double s = std::sin(t.gamma * x);
      re += t.amplitude.real() * c - t.amplitude.imag() * s;
      im += t.amplitude.real() * s + t.amplitude.imag() * c;
    }
    out_re[j] = re;
    out_im[j] = im;
  }
}

std::complex<double> paired_reciprocal_sum(std::span<const double> zeros, std::complex<double> w) {
  ComplexSum sum;
  for (double lambda : zeros) sum.add(w / (lambda * (w - lambda)));
  return sum.value();
}

}  // namespace fqlab::kernels::scalar
