#pragma once

// Closed-form zero sets and spectra, derived by hand independently of the
// library (product formulas and Poisson summation).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fqlab/exppoly.hpp"

namespace oracle {

using fqlab::cplx;
using fqlab::ExpPolynomial;

inline constexpr double pi = std::numbers::pi;
inline constexpr double golden = std::numbers::phi;

// sin(πx) = (e^{iπx} − e^{−iπx})/2i
inline ExpPolynomial sin_pi() { return ExpPolynomial({{cplx(0, -0.5), pi}, {cplx(0, 0.5), -pi}}, true); }
inline ExpPolynomial cos_pi() { return ExpPolynomial({{0.5, pi}, {0.5, -pi}}, true); }
// 2cos x + 1
inline ExpPolynomial three_term() { return ExpPolynomial({{1.0, -1.0}, {1.0, 0.0}, {1.0, 1.0}}, true); }
// sin(2πx) + sin(2πωx)
inline ExpPolynomial golden_two_sine() {
  return ExpPolynomial({{cplx(0, -0.5), 2 * pi},
                        {cplx(0, 0.5), -2 * pi},
                        {cplx(0, -0.5), 2 * pi * golden},
                        {cplx(0, 0.5), -2 * pi * golden}},
                       true);
}
// sin(πx) − 1, tangent to the axis at x = 1/2 + 2k
inline ExpPolynomial tangency() {
  return ExpPolynomial({{-1.0, 0.0}, {cplx(0, -0.5), pi}, {cplx(0, 0.5), -pi}}, true);
}
// 2cos 2x + 4 > 0 on ℝ; zeros at π/2 + πk ± i·acosh(2)/2
inline ExpPolynomial no_real_zeros() { return ExpPolynomial({{1.0, -2.0}, {4.0, 0.0}, {1.0, 2.0}}, true); }

inline std::vector<double> integers_in(double a, double b) {
  std::vector<double> z;
  for (double k = std::ceil(a); k < b; k += 1.0) {
    if (k > a) z.push_back(k);
  }
  return z;
}

// 2cos x + 1 = 0 ⇔ x = ±2π/3 + 2πk
inline std::vector<double> three_term_zeros(double a, double b) {
  std::vector<double> z;
  for (long k = static_cast<long>(std::floor(a / (2 * pi))) - 1; 2 * pi * k - 2 * pi / 3 < b; ++k) {
    for (double x : {2 * pi * k - 2 * pi / 3, 2 * pi * k + 2 * pi / 3}) {
      if (x > a && x < b) z.push_back(x);
    }
  }
  std::sort(z.begin(), z.end());
  return z;
}

// sin A + sin B = 2 sin((A+B)/2) cos((A−B)/2): zeros k/(1+ω) and (m+½)ω
// (1/(ω−1) = ω).
inline std::vector<double> golden_zeros(double a, double b) {
  std::vector<double> z;
  const double d1 = 1.0 / (1.0 + golden);
  for (long k = static_cast<long>(std::floor(a / d1)); k * d1 < b; ++k) {
    if (k * d1 > a) z.push_back(k * d1);
  }
  for (long m = static_cast<long>(std::floor(a / golden)) - 1; (m + 0.5) * golden < b; ++m) {
    const double x = (m + 0.5) * golden;
    if (x > a) z.push_back(x);
  }
  std::sort(z.begin(), z.end());
  return z;
}

struct Atom {
  double s;
  cplx a;
};

// Σ_k δ_{x0 + k d} has transform (1/d) Σ_j e^{−2πi j x0/d} δ_{j/d}.
inline std::vector<Atom> progression_spectrum(double x0, double d, double s_max) {
  std::vector<Atom> out;
  for (long j = -static_cast<long>(s_max * d) - 1; j <= static_cast<long>(s_max * d) + 1; ++j) {
    const double s = j / d;
    if (j == 0 || std::abs(s) > s_max) continue;
    const double ph = -2 * pi * j * x0 / d;
    out.push_back({s, cplx(std::cos(ph), std::sin(ph)) / d});
  }
  return out;
}

// Zeros of 2cos x + 1: progressions ±2π/3 + 2πk; atoms at m/2π of weight
// (1/2π)·2cos(2πm/3).
inline cplx three_term_atom(long m) { return 2.0 * std::cos(2 * pi * m / 3.0) / (2 * pi); }

// AP {k/(1+ω)} gives (1+ω) at j(1+ω); AP {(m+½)ω} gives (−1)^j/ω at j/ω.
inline std::vector<Atom> golden_spectrum(double s_max) {
  auto a = progression_spectrum(0.0, 1.0 / (1.0 + golden), s_max);
  auto b = progression_spectrum(0.5 * golden, golden, s_max);
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end(), [](const Atom& x, const Atom& y) { return x.s < y.s; });
  return a;
}

}  // namespace oracle
