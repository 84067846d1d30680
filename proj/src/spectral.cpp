#include "fqlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fqlab/compensated.hpp"
#include "fqlab/error.hpp"
#include "fqlab/kernels.hpp"

namespace fqlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

cplx pairwise_sum(std::span<const cplx> v) {
  if (v.size() <= 8) {
    cplx s{};
    for (const auto& z : v) s += z;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

bool real_on_line(const ExpPolynomial& p) { return p.hermitian() || is_real_on_line(p, 256).real; }

// Bound on Σ_{s>S} |a_s| e^{−2πys} from a growth envelope A(s) <= K s^m.
double growth_tail(const GrowthFit& g, double S, double y) {
  if (!(g.K_envelope > 0.0)) return 0.0;
  const double rate = kTwoPi * y;
  const double span = 60.0 / rate;
  const int n = 400;
  const double h = span / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = S + i * h;
    const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += wgt * rate * std::exp(-rate * s) * g.K_envelope * std::pow(s, g.m);
  }
  return acc * h / 3.0;
}

}  // namespace

double default_s_max(const ExpPolynomial& p) {
  return 10.0 * (p.gamma_max() - p.gamma_min()) / kTwoPi;
}

HalfPlaneExpansion half_plane_expand(const ExpPolynomial& p, Side side, double cutoff,
                                     SeriesParams params) {
  if (p.size() < 2) throw Error(ErrorKind::InvalidArgument, "need n >= 2 terms");
  const ExpPolynomial q = side == Side::Upper ? p : reflect(p);
  const Term dom = q.terms().front();
  std::vector<SeriesAtom> atoms{{0.0, cplx(1.0)}};
  for (std::size_t k = 1; k < q.size(); ++k) {
    const auto& t = q.terms()[k];
    atoms.push_back({-(t.gamma - dom.gamma) / kTwoPi, t.amplitude / dom.amplitude});
  }
  params.cutoff = cutoff;
  for (double y = params.y_ref;; y *= 2.0) {
    params.y_ref = y;
    try {
      SeriesLog lg = series_log(ExpSeries(atoms, params));
      HalfPlaneExpansion out;
      out.side = side;
      out.linear_coefficient =
          side == Side::Upper ? cplx(0.0, p.gamma_min()) : cplx(0.0, p.gamma_max());
      out.scalar = std::log(dom.amplitude) + lg.scalar;
      out.series = std::move(lg.series);
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence || y >= 8.0) throw;
    }
  }
}

cplx AtomicMeasure::mass_at(double s, double tol) const {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), s - tol,
                             [](const SpectrumAtom& a, double v) { return a.s < v; });
  if (it != atoms.end() && it->s <= s + tol) return it->a;
  return {};
}

GrowthFit fit_growth(std::span<const SpectrumAtom> atoms, double s_max) {
  GrowthFit g;
  std::vector<double> mags;
  std::vector<std::pair<double, double>> by_abs;
  for (const auto& a : atoms) by_abs.emplace_back(std::abs(a.s), std::abs(a.a));
  std::sort(by_abs.begin(), by_abs.end());
  if (by_abs.empty()) return g;
  std::vector<double> xs, ys;
  for (double R = s_max; R >= by_abs.front().first && xs.size() < 24; R *= 0.5) {
    double A = 0.0;
    for (const auto& [s, m] : by_abs) {
      if (s > R) break;
      A += m;
    }
    if (A > 0.0) {
      xs.push_back(std::log(R));
      ys.push_back(std::log(A));
    }
  }
  if (xs.size() < 2) {
    g.m = 0.0;
    g.K = xs.empty() ? 0.0 : std::exp(ys.front());
    g.K_envelope = g.K;
    return g;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  g.m = sxy / sxx;
  g.K = std::exp(my - g.m * mx);
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (std::log(g.K) + g.m * xs[i]);
    sse += r * r;
    g.K_envelope = std::max(g.K_envelope, std::exp(ys[i] - g.m * xs[i]));
  }
  g.m_width = xs.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  return g;
}

AtomicMeasure spectrum_from_polynomial(const ExpPolynomial& p, const SpectrumOptions& opts) {
  if (p.size() < 2) throw Error(ErrorKind::InvalidArgument, "need n >= 2 terms");
  AtomicMeasure mu;
  mu.s_max = opts.s_max > 0.0 ? opts.s_max : default_s_max(p);
  const double cutoff = opts.cutoff > 0.0 ? opts.cutoff : mu.s_max;
  const auto upper = half_plane_expand(p, Side::Upper, cutoff, opts.series);
  const auto lower = half_plane_expand(p, Side::Lower, cutoff, opts.series);
  mu.alpha = upper.linear_coefficient;
  mu.beta = lower.linear_coefficient;
  mu.a0 = (p.gamma_max() - p.gamma_min()) / kTwoPi;
  mu.merge_events = upper.series.merge_events() + lower.series.merge_events();

  // Coefficient of e^{−2πisw} in p'/p is −2πi·a_s above (s < 0) and +2πi·a_s
  // below (s > 0); with exponent coefficients c_u that gives a_s = u·c_u.
  std::vector<SpectrumAtom> raw;
  for (const auto& at : upper.series.atoms()) {
    if (-at.u <= mu.s_max) raw.push_back({at.u, at.u * at.c});
  }
  for (const auto& at : lower.series.atoms()) {
    if (-at.u <= mu.s_max) raw.push_back({-at.u, at.u * at.c});
  }
  double amax = 0.0;
  for (const auto& a : raw) amax = std::max(amax, std::abs(a.a));
  for (const auto& a : raw) {
    if (std::abs(a.a) < opts.atom_floor * amax) {
      ++mu.dropped_atoms;
    } else {
      mu.atoms.push_back(a);
    }
  }
  std::sort(mu.atoms.begin(), mu.atoms.end(),
            [](const SpectrumAtom& x, const SpectrumAtom& y) { return x.s < y.s; });

  if (real_on_line(p)) {
    const double tol = opts.series.merge_eps;
    for (const auto& a : mu.atoms) {
      const cplx mirror = mu.mass_at(-a.s, tol);
      if (std::abs(a.a - std::conj(mirror)) > opts.hermitian_tol * amax) {
        throw Error(ErrorKind::HermitianMismatch,
                    "a_{-s} and conj(a_s) disagree at s = " + std::to_string(a.s));
      }
    }
  }
  mu.growth = fit_growth(mu.atoms, mu.s_max);
  return mu;
}

ProductValue canonical_product(const ZeroSet& zs, ComplexPoint w) {
  ProductValue out;
  const double guard = std::isfinite(zs.min_gap) ? 1e-12 * zs.min_gap : 1e-12;
  std::vector<cplx> logs;
  logs.reserve(zs.size());
  const cplx z = w.value();
  for (double lambda : zs.zeros) {
    if (std::abs(lambda) <= guard) {
      throw Error(ErrorKind::ZeroAtOrigin, "0 is in the zero set; shift coordinates first");
    }
    const cplx r = z / lambda;
    logs.push_back(std::log(1.0 - r) + r);
    out.radius = std::max(out.radius, std::abs(lambda));
  }
  out.value = std::exp(pairwise_sum(logs));
  return out;
}

Lemma1Result lemma1_residual(const ExpPolynomial& p, const ZeroSet& zs,
                             const HalfPlaneExpansion& ex, ComplexPoint w,
                             const Lemma1Options& opts) {
  const bool upper = ex.side == Side::Upper;
  if ((upper && !(w.im > 0.0)) || (!upper && !(w.im < 0.0))) {
    throw Error(ErrorKind::BelowReferenceHeight, "w is on the wrong side of the real axis");
  }
  const double a = zs.window.a;
  const double b = zs.window.b;
  if (!(a < 0.0 && b > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "lemma1 window must straddle the origin");
  }
  const cplx p0 = p.eval(0.0);
  if (std::abs(p0) <= 1e-12 * p.amplitude_sum()) {
    throw Error(ErrorKind::ZeroAtOrigin, "p(0) = 0; shift coordinates first");
  }
  const cplx z = w.value();
  const double rho = opts.density > 0.0 ? opts.density : (p.gamma_max() - p.gamma_min()) / kTwoPi;

  Lemma1Result r;
  r.lhs = kernels::paired_reciprocal_sum(zs.zeros, z);
  r.tail_correction = rho * (std::log(1.0 - z / b) - std::log(1.0 - z / a));

  // Hadamard gauge: p = e^{A+Bw}ψ with B = p'(0)/p(0).
  const cplx gauge = derivative(p).eval(0.0) / p0;
  r.alpha_used = ex.linear_coefficient - gauge;
  const double s_cut = opts.s_max > 0.0 ? std::min(opts.s_max, ex.series.cutoff())
                                        : ex.series.cutoff();
  ComplexSum series;
  std::vector<SpectrumAtom> side_atoms;
  for (const auto& at : ex.series.atoms()) {
    if (-at.u > s_cut) continue;
    // d/dw of c·e^{−2πiuw} above, of c·e^{2πiuw} below (reflected variable).
    const cplx phase = upper ? cplx(0.0, -kTwoPi * at.u) * z : cplx(0.0, kTwoPi * at.u) * z;
    const cplx factor = upper ? cplx(0.0, -kTwoPi * at.u) : cplx(0.0, kTwoPi * at.u);
    series.add(at.c * factor * std::exp(phase));
    side_atoms.push_back({-at.u, at.u * at.c});
  }
  r.rhs = r.alpha_used + series.value();
  r.raw = std::abs(r.lhs - r.rhs);
  r.corrected = std::abs(r.lhs + r.tail_correction - r.rhs);

  // Counting-function discrepancy against ρ inside the window.
  double e_max = 0.0;
  for (std::size_t k = 0; k < zs.zeros.size(); ++k) {
    const double expect = rho * (zs.zeros[k] - a);
    e_max = std::max({e_max, std::abs(double(k) - expect), std::abs(double(k + 1) - expect)});
  }
  e_max = std::max(e_max, std::abs(double(zs.size()) - rho * (b - a))) + 1.0;
  auto f_abs = [&](double x) { return std::abs(z) / (std::abs(x) * std::abs(z - x)); };
  const double fluct = 4.0 * e_max * (f_abs(a) + f_abs(b));
  const double trunc = kTwoPi * growth_tail(fit_growth(side_atoms, s_cut), s_cut, std::abs(w.im));
  double mag = 0.0;
  for (double lambda : zs.zeros) mag += f_abs(lambda);
  const double rounding =
      4.0 * kEps * (mag * std::log2(zs.size() + 2.0) + std::abs(r.rhs) + std::abs(r.tail_correction));
  r.budget = fluct + trunc + rounding;
  r.residual = std::max(0.0, r.corrected - r.budget);
  return r;
}

ShiftedProblem shift_problem(const ExpPolynomial& p, const ZeroSet& zs, double a) {
  return {translate(p, a), shifted(zs, a), a};
}

ShiftedProblem shift_off_origin(const ExpPolynomial& p, const ZeroSet& zs) {
  return shift_problem(p, zs, origin_shift(zs));
}

}  // namespace fqlab
