#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fqlab {

using cplx = std::complex<double>;

/// One term b·e^{iγx}; `gamma` is in radians per unit x.
struct Term {
  cplx amplitude;
  double gamma = 0.0;
};

/// A point w = x + iy of the complex plane.
struct ComplexPoint {
  double re = 0.0;
  double im = 0.0;

  constexpr ComplexPoint() = default;
  constexpr ComplexPoint(double x, double y = 0.0) : re(x), im(y) {}
  ComplexPoint(cplx z) : re(z.real()), im(z.imag()) {}
  cplx value() const { return {re, im}; }
};

struct EvalResult {
  cplx value;
  /// Forward error estimate: n·eps times the sum of term magnitudes, widened by
  /// the phase-argument conditioning |γ·x|.
  double error_bound = 0.0;
};

/// Exponential polynomial p(x) = Σ b_k e^{iγ_k x}.
///
/// Terms are kept sorted by strictly increasing frequency. Construction merges
/// exactly-equal frequencies by summing amplitudes and drops terms whose
/// amplitude is exactly zero, so every value has a canonical term set. An empty
/// term list is the zero polynomial; it only arises from `derivative`.
class ExpPolynomial {
 public:
  ExpPolynomial() = default;
  explicit ExpPolynomial(std::vector<Term> terms, bool hermitian = false);

  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  bool hermitian() const noexcept { return hermitian_; }

  double gamma_min() const;
  double gamma_max() const;
  double max_abs_gamma() const noexcept;
  /// Σ|b_k|, the natural magnitude scale of p on the real line.
  double amplitude_sum() const noexcept;

  /// True when the term set is closed under (b, γ) ↦ (conj b, −γ) up to a
  /// relative tolerance; such p are real-valued on ℝ.
  bool has_hermitian_symmetry(double rel_tol = 1e-14) const;

  cplx operator()(ComplexPoint w) const { return eval(w); }
  cplx eval(ComplexPoint w) const;
  EvalResult eval_with_bound(ComplexPoint w) const;
  /// p(x) on the real line, computed in extended (long double) precision.
  std::complex<long double> eval_extended(long double x) const;

 private:
  std::vector<Term> terms_;
  bool hermitian_ = false;
};

/// Term-wise (b, γ) ↦ (iγb, γ); the γ = 0 term vanishes.
ExpPolynomial derivative(const ExpPolynomial& p);

/// p(x + shift) as an exponential polynomial: b_k ↦ b_k e^{iγ_k shift}.
ExpPolynomial translate(const ExpPolynomial& p, double shift);

/// p(−x): (b, γ) ↦ (b, −γ).
ExpPolynomial reflect(const ExpPolynomial& p);

/// c·p for a nonzero scalar c.
ExpPolynomial scale(const ExpPolynomial& p, cplx c);

struct RealLineCheck {
  bool real = false;
  bool inconclusive = false;
  double max_imag = 0.0;
  double max_abs = 0.0;
};

inline constexpr double kDefaultTolReal = 1e-10;

/// Samples p on equispaced points covering several periods of the slowest
/// nonzero frequency and tests max|Im p| ≤ tol_real·max|p|.
RealLineCheck is_real_on_line(const ExpPolynomial& p, std::size_t samples,
                              double tol_real = kDefaultTolReal);

}  // namespace fqlab
