#include "fqlab/exppoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fqlab/compensated.hpp"
#include "fqlab/error.hpp"

namespace fqlab {
namespace {

// Largest x with exp(x) finite in double.
constexpr double kMaxExponent = 709.78;

double term_exponent(const Term& t, double y) { return -t.gamma * y; }

}  // namespace

ExpPolynomial::ExpPolynomial(std::vector<Term> terms, bool hermitian) : hermitian_(hermitian) {
  for (const auto& t : terms) {
    if (!std::isfinite(t.gamma) || !std::isfinite(t.amplitude.real()) ||
        !std::isfinite(t.amplitude.imag())) {
      throw Error(ErrorKind::InvalidArgument, "non-finite term in exponential polynomial");
    }
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.gamma < b.gamma; });
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().gamma == t.gamma) {
      terms_.back().amplitude += t.amplitude;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.amplitude == cplx{}; });
  if (hermitian_ && !has_hermitian_symmetry(1e-12)) {
    throw Error(ErrorKind::InvalidArgument,
                "hermitian flag set but terms are not closed under (b, g) -> (conj b, -g)");
  }
}

double ExpPolynomial::gamma_min() const {
  if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no frequencies");
  return terms_.front().gamma;
}

double ExpPolynomial::gamma_max() const {
  if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no frequencies");
  return terms_.back().gamma;
}

double ExpPolynomial::max_abs_gamma() const noexcept {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.gamma));
  return m;
}

double ExpPolynomial::amplitude_sum() const noexcept {
  NeumaierSum<double> s;
  for (const auto& t : terms_) s.add(std::abs(t.amplitude));
  return s.value();
}

bool ExpPolynomial::has_hermitian_symmetry(double rel_tol) const {
  const double scale = amplitude_sum();
  for (const auto& t : terms_) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), -t.gamma,
                               [](const Term& a, double g) { return a.gamma < g; });
    if (it == terms_.end() || it->gamma != -t.gamma) return false;
    if (std::abs(it->amplitude - std::conj(t.amplitude)) > rel_tol * scale) return false;
  }
  return true;
}

cplx ExpPolynomial::eval(ComplexPoint w) const { return eval_with_bound(w).value; }

EvalResult ExpPolynomial::eval_with_bound(ComplexPoint w) const {
  ComplexSum sum;
  double magnitude = 0.0;
  double phase_cond = 1.0;
  for (const auto& t : terms_) {
    const double e = term_exponent(t, w.im);
    if (e > kMaxExponent) {
      throw Error(ErrorKind::OutOfRange, "|gamma * Im w| exceeds the exponent range");
    }
    const double r = std::exp(e);
    const double phase = t.gamma * w.re;
    const cplx z = t.amplitude * cplx(r * std::cos(phase), r * std::sin(phase));
    sum.add(z);
    magnitude += std::abs(t.amplitude) * r;
    phase_cond = std::max(phase_cond, std::abs(phase) + std::abs(e));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double n = static_cast<double>(std::max<std::size_t>(terms_.size(), 1));
  return {sum.value(), (n + 3.0) * eps * phase_cond * magnitude};
}

std::complex<long double> ExpPolynomial::eval_extended(long double x) const {
  long double re = 0.0L;
  long double im = 0.0L;
  for (const auto& t : terms_) {
    const long double phase = static_cast<long double>(t.gamma) * x;
    const long double c = std::cos(phase);
    const long double s = std::sin(phase);
    const long double br = t.amplitude.real();
    const long double bi = t.amplitude.imag();
    re += br * c - bi * s;
    im += br * s + bi * c;
  }
  return {re, im};
}

ExpPolynomial derivative(const ExpPolynomial& p) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    if (t.gamma == 0.0) continue;
    out.push_back({cplx(0.0, t.gamma) * t.amplitude, t.gamma});
  }
  return ExpPolynomial(std::move(out), p.hermitian());
}

ExpPolynomial translate(const ExpPolynomial& p, double shift) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    const double phase = t.gamma * shift;
    out.push_back({t.amplitude * cplx(std::cos(phase), std::sin(phase)), t.gamma});
  }
  return ExpPolynomial(std::move(out), p.hermitian());
}

ExpPolynomial reflect(const ExpPolynomial& p) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) out.push_back({t.amplitude, -t.gamma});
  return ExpPolynomial(std::move(out), p.hermitian());
}

ExpPolynomial scale(const ExpPolynomial& p, cplx c) {
  if (c == cplx{}) throw Error(ErrorKind::InvalidArgument, "scale factor must be nonzero");
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) out.push_back({c * t.amplitude, t.gamma});
  // A non-real factor breaks conjugate symmetry, so the flag survives only for real c.
  return ExpPolynomial(std::move(out), p.hermitian() && c.imag() == 0.0);
}

RealLineCheck is_real_on_line(const ExpPolynomial& p, std::size_t samples, double tol_real) {
  if (samples < 16) throw Error(ErrorKind::InvalidArgument, "is_real_on_line needs >= 16 samples");
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& t : p.terms()) {
    if (t.gamma != 0.0) slowest = std::min(slowest, std::abs(t.gamma));
  }
  const double span = std::isfinite(slowest) ? 4.0 * 2.0 * std::numbers::pi / slowest : 1.0;
  RealLineCheck out;
  for (std::size_t j = 0; j < samples; ++j) {
    const double x = -0.5 * span + span * static_cast<double>(j) / static_cast<double>(samples - 1);
    const cplx v = p.eval(x);
    out.max_imag = std::max(out.max_imag, std::abs(v.imag()));
    out.max_abs = std::max(out.max_abs, std::abs(v));
  }
  if (out.max_abs == 0.0) {
    out.inconclusive = true;
    return out;
  }
  out.real = out.max_imag <= tol_real * out.max_abs;
  return out;
}

}  // namespace fqlab
