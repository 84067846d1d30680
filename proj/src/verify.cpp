#include "fqlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>

#include "fqlab/compensated.hpp"
#include "fqlab/error.hpp"
#include "fqlab/kernels.hpp"
#include "fqlab/parallel.hpp"

namespace fqlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Σ_{|s|>S}|a_s|g(s) for g(s) = σe^{−πσ²(|s|−s₀)²}, S >= s₀, using
// A(s) <= K s^m and Σ_{s>S}|a_s|g(s) <= ∫_S^∞ (−g'(s))A(s)ds.
double gaussian_spectral_tail(const GrowthFit& fit, double S, double sigma, double s0) {
  if (!(fit.K_envelope > 0.0)) return 0.0;
  const double span = 12.0 / sigma;
  const int n = 600;
  const double h = span / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = S + i * h;
    const double d = s - s0;
    const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double dg = kTwoPi * sigma * sigma * sigma * d * std::exp(-kPi * sigma * sigma * d * d);
    acc += wgt * dg * fit.K_envelope * std::pow(s, fit.m);
  }
  // Simpson misses the far tail only below e^{−144π}.
  return acc * h / 3.0;
}

// Points at distance >= `distance`, with at most 2C per unit cell.
double gaussian_spatial_tail(double distance, double sigma, double c_bound) {
  double acc = 0.0;
  for (int j = 0; j < 10000; ++j) {
    const double d = distance + j;
    const double term = std::exp(-kPi * d * d / (sigma * sigma));
    acc += term;
    if (term < 1e-300 || (j > 4 && term < 1e-18 * acc)) break;
  }
  return 2.0 * c_bound * acc;
}

}  // namespace

void VerificationReport::add(std::string name, double residual, double budget, double runtime_ms) {
  checks_.push_back({std::move(name), residual, budget, residual <= budget, runtime_ms});
}

std::vector<CheckResult> VerificationReport::sorted_checks() const {
  auto out = checks_;
  std::stable_sort(out.begin(), out.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
  return out;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::complex<double> GaussianTest::value(double x) const {
  const double d = (x - center) / width;
  const double phase = kTwoPi * frequency * x;
  return std::exp(-kPi * d * d) * std::complex<double>(std::cos(phase), std::sin(phase));
}

std::complex<double> GaussianTest::transform(double s) const {
  const double ds = s - frequency;
  const double mag = width * std::exp(-kPi * width * width * ds * ds);
  const double phase = -kTwoPi * center * ds;
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

namespace {

ParsevalResult parseval_impl(const ZeroSet& zs, const AtomicMeasure& mu, const GaussianTest& test,
                             const AtomicMeasure* extension, double c_bound) {
  if (!(test.width > 0.0)) throw Error(ErrorKind::InvalidArgument, "Gaussian width must be > 0");
  const double left = test.center - zs.window.a;
  const double right = zs.window.b - test.center;
  if (left < 6.0 * test.width || right < 6.0 * test.width) {
    throw Error(ErrorKind::MarginTooSmall, "test center needs a 6-sigma margin inside the window");
  }
  // Zeros beyond `reach` weigh below e^{−144π}; they go into the spatial tail.
  const double reach = 12.0 * test.width;
  ParsevalResult r;
  ComplexSum lhs;
  double lhs_abs = 0.0;
  double position_err = 0.0;
  const auto first = std::lower_bound(zs.zeros.begin(), zs.zeros.end(), test.center - reach);
  const auto last = std::upper_bound(zs.zeros.begin(), zs.zeros.end(), test.center + reach);
  for (auto it = first; it != last; ++it) {
    const auto i = static_cast<std::size_t>(it - zs.zeros.begin());
    const double x = *it;
    const auto v = test.value(x);
    lhs.add(v);
    lhs_abs += std::abs(v);
    double dx = 2.0 * std::abs(std::nextafter(x, 2.0 * x + 1.0) - x);
    if (i < zs.derivative_magnitudes.size() && zs.derivative_magnitudes[i] > 0.0 &&
        i < zs.value_magnitudes.size()) {
      dx += zs.value_magnitudes[i] / zs.derivative_magnitudes[i];
    }
    const double slope =
        kTwoPi * (std::abs(x - test.center) / (test.width * test.width) + std::abs(test.frequency));
    position_err += slope * std::abs(v) * dx;
  }
  r.lhs = lhs.value();

  ComplexSum rhs;
  const auto f0 = test.transform(0.0);
  rhs.add(mu.a0 * f0);
  double rhs_abs = std::abs(mu.a0) * std::abs(f0);
  auto add_atom = [&](const SpectrumAtom& at) {
    const auto ft = test.transform(at.s);
    rhs.add(at.a * ft);
    rhs_abs += std::abs(at.a) * std::abs(ft);
  };
  for (const auto& at : mu.atoms) add_atom(at);
  double s_edge = mu.s_max;
  const GrowthFit* fit = &mu.growth;
  if (extension && extension->s_max > mu.s_max) {
    for (const auto& at : extension->atoms) {
      if (std::abs(at.s) > mu.s_max) add_atom(at);
    }
    s_edge = extension->s_max;
    fit = &extension->growth;
  }
  r.rhs = rhs.value();
  r.residual = std::abs(r.lhs - r.rhs);

  const double spatial = gaussian_spatial_tail(std::min(left, reach), test.width, c_bound) +
                         gaussian_spatial_tail(std::min(right, reach), test.width, c_bound);
  const double s0 = std::abs(test.frequency);
  const double spectral = s_edge > s0 ? gaussian_spectral_tail(*fit, s_edge, test.width, s0)
                                      : std::numeric_limits<double>::infinity();
  const double rounding = 16.0 * kEps * (lhs_abs + rhs_abs) + position_err;
  r.budget = spatial + spectral + rounding + kAtomAccuracy * rhs_abs;
  return r;
}

double spatial_density_bound(const ZeroSet& zs) {
  return std::max(1.0, empirical_density_constant(zs.zeros, zs.window, 1.0));
}

}  // namespace

ParsevalResult parseval_check(const ZeroSet& zs, const AtomicMeasure& mu, const GaussianTest& test,
                              const AtomicMeasure* extension) {
  return parseval_impl(zs, mu, test, extension, spatial_density_bound(zs));
}

DensityResult density_check(const ZeroSet& zs, double a0) {
  if (zs.size() < 50) {
    throw Error(ErrorKind::InvalidArgument, "density_check needs a window of >= 50 mean gaps");
  }
  const double mean_gap = zs.window.length() / static_cast<double>(zs.size());
  if (a0 <= 0.0) a0 = zs.density();
  DensityResult r;
  r.c_emp = empirical_density_constant(zs.zeros, zs.window, mean_gap);
  const double mid = 0.5 * (zs.window.a + zs.window.b);
  const auto split = std::lower_bound(zs.zeros.begin(), zs.zeros.end(), mid);
  const std::vector<double> lo(zs.zeros.begin(), split);
  const std::vector<double> hi(split, zs.zeros.end());
  r.c_left = empirical_density_constant(lo, {zs.window.a, mid}, mean_gap);
  r.c_right = empirical_density_constant(hi, {mid, zs.window.b}, mean_gap);

  double excess = 0.0;
  for (double start = zs.window.a; start < zs.window.b; start += 1.0) {
    const auto l = std::lower_bound(zs.zeros.begin(), zs.zeros.end(), start);
    const auto h = std::lower_bound(zs.zeros.begin(), zs.zeros.end(), start + 1.0);
    excess = std::max(excess, static_cast<double>(h - l) - a0);
  }
  r.bound = 2.0 * (a0 + excess);
  r.bounded = r.c_emp <= r.bound;
  r.stable = std::abs(r.c_left - r.c_right) <= 0.1 * std::max(r.c_left, r.c_right);
  return r;
}

Decomposition discreteness_decompose(const ZeroSet& zs) {
  if (zs.zeros.empty()) throw Error(ErrorKind::InvalidArgument, "empty zero set");
  auto d = greedy_decompose(zs.zeros);
  if (d.m_ud > kMaxDiscreteSubsets) {
    throw Error(ErrorKind::NotRelativelyUniformlyDiscrete,
                std::to_string(d.m_ud) + " subsets > " + std::to_string(kMaxDiscreteSubsets));
  }
  return d;
}

GrowthReport growth_check(const ExpPolynomial& p, const AtomicMeasure& mu) {
  GrowthReport g;
  const double gmin = p.gamma_min();
  const double gmax = p.gamma_max();
  g.expected_upper = std::max(-gmin, 0.0);
  g.expected_lower = std::max(gmax, 0.0);
  const double sigma = std::max({-gmin, gmax, 0.0});
  const double scale = p.amplitude_sum();
  const double fastest = std::max(p.max_abs_gamma(), 1e-12);
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& t : p.terms()) {
    if (t.gamma != 0.0) slowest = std::min(slowest, std::abs(t.gamma));
  }
  const double span = std::isfinite(slowest) ? 4.0 * kTwoPi / slowest : kTwoPi;
  const auto samples = static_cast<std::size_t>(
      std::clamp(span * fastest / (kPi / 8.0), 2048.0, 65536.0));

  auto sup_on_line = [&](double y, bool track) {
    double sup = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
      const double x = -0.5 * span + span * static_cast<double>(j) / static_cast<double>(samples);
      const double v = std::abs(p.eval({x, y}));
      sup = std::max(sup, v);
      if (track) {
        g.triangle_ratio = std::max(g.triangle_ratio, v / (scale * std::exp(sigma * std::abs(y))));
        if (y > 0.0) {
          g.upper_normalized_ratio = std::max(g.upper_normalized_ratio, v * std::exp(gmin * y) / scale);
        }
      }
    }
    return sup;
  };

  auto ls_slope = [](const std::vector<double>& xs, const std::vector<double>& ys) {
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
    return sxx > 0.0 ? sxy / sxx : 0.0;
  };

  std::vector<double> up, lo;
  for (double y : {1.0, 2.0, 4.0, 8.0}) {
    if (fastest * y > 700.0) break;
    g.heights.push_back(y);
    up.push_back(std::log(sup_on_line(y, true)));
    lo.push_back(std::log(sup_on_line(-y, true)));
  }
  if (g.heights.size() >= 2) {
    g.slope_upper = ls_slope(g.heights, up);
    g.slope_lower = ls_slope(g.heights, lo);
  }
  // Far lines isolate the dominant term: exponents stay below 600.
  const double y_far = 300.0 / std::max(fastest, 1.0);
  g.type_upper = (std::log(sup_on_line(y_far, false)) - std::log(sup_on_line(0.5 * y_far, false))) /
                 (0.5 * y_far);
  g.type_lower =
      (std::log(sup_on_line(-y_far, false)) - std::log(sup_on_line(-0.5 * y_far, false))) /
      (0.5 * y_far);
  g.spectrum_fit = mu.growth;
  return g;
}

void add_growth_entries(VerificationReport& report, const GrowthReport& g) {
  report.add("growth_upper_slope", g.slope_upper, g.expected_upper * (1.0 + 1e-9) + 1e-9);
  report.add("growth_lower_slope", g.slope_lower, g.expected_lower * (1.0 + 1e-9) + 1e-9);
  report.add("growth_upper_type", std::abs(g.type_upper - g.expected_upper), 1e-6);
  report.add("growth_lower_type", std::abs(g.type_lower - g.expected_lower), 1e-6);
  report.add("growth_triangle", g.triangle_ratio, 1.0 + 1e-12);
  report.add("growth_upper_normalized_bounded", g.upper_normalized_ratio, 1.0 + 1e-12);
  report.set_param("growth_K", fmt(g.spectrum_fit.K));
  report.set_param("growth_m", fmt(g.spectrum_fit.m));
  report.set_param("growth_m_width", fmt(g.spectrum_fit.m_width));
}

double hermitian_asymmetry(const AtomicMeasure& mu) {
  double amax = 0.0;
  for (const auto& a : mu.atoms) amax = std::max(amax, std::abs(a.a));
  if (amax == 0.0) return 0.0;
  double worst = 0.0;
  for (const auto& a : mu.atoms) {
    worst = std::max(worst, std::abs(a.a - std::conj(mu.mass_at(-a.s))));
  }
  return worst / amax;
}

HalfPlaneExpansion expansion_from_spectrum(const AtomicMeasure& mu, Side side, double shift) {
  std::vector<SeriesAtom> atoms;
  for (const auto& at : mu.atoms) {
    const bool keep = side == Side::Upper ? at.s < 0.0 : at.s > 0.0;
    if (!keep) continue;
    const double u = side == Side::Upper ? at.s : -at.s;
    const double phase = -kTwoPi * u * shift;
    atoms.push_back({u, at.a * cplx(std::cos(phase), std::sin(phase)) / u});
  }
  SeriesParams params;
  params.cutoff = mu.s_max;
  params.drop_eps = 0.0;
  HalfPlaneExpansion ex;
  ex.side = side;
  ex.linear_coefficient = side == Side::Upper ? mu.alpha : mu.beta;
  ex.series = ExpSeries(std::move(atoms), params);
  return ex;
}

namespace {

// Translation to the window center, nudged to a gap midpoint if a zero sits there.
double center_shift(const ZeroSet& zs) {
  const double c = 0.5 * (zs.window.a + zs.window.b);
  const auto& z = zs.zeros;
  if (z.size() < 2) return c;
  auto it = std::lower_bound(z.begin(), z.end(), c);
  std::size_t k = static_cast<std::size_t>(it - z.begin());
  if (k > 0 && (k == z.size() || c - z[k - 1] < z[k] - c)) --k;
  const double left_gap = k > 0 ? z[k] - z[k - 1] : std::numeric_limits<double>::infinity();
  const double right_gap = k + 1 < z.size() ? z[k + 1] - z[k] : std::numeric_limits<double>::infinity();
  const double gap = std::min(left_gap, right_gap);
  if (std::abs(z[k] - c) >= 0.25 * gap) return c;
  return right_gap >= left_gap && std::isfinite(right_gap) ? z[k] + 0.5 * right_gap
                                                           : z[k] - 0.5 * left_gap;
}

}  // namespace

VerificationReport run_battery(const ExpPolynomial& p, const ZeroSet& zs, const AtomicMeasure& mu,
                               const BatteryOptions& opts) {
  VerificationReport report;
  const double a = zs.window.a;
  const double b = zs.window.b;
  const double w = b - a;
  const double c = 0.5 * (a + b);
  report.set_param("window_a", fmt(a));
  report.set_param("window_b", fmt(b));
  report.set_param("zeros", std::to_string(zs.size()));
  report.set_param("S_max", fmt(mu.s_max));
  report.set_param("a0", fmt(mu.a0.real()));
  report.set_param("atoms", std::to_string(mu.atoms.size()));

  std::optional<AtomicMeasure> reference;
  if (p.size() >= 2 && mu.s_max > 0.0 && (opts.modulated || opts.tiled)) {
    SpectrumOptions so;
    so.s_max = 2.0 * mu.s_max;
    try {
      reference = spectrum_from_polynomial(p, so);
      report.set_param("reference_S_max", fmt(so.s_max));
    } catch (const Error& e) {
      report.set_param("reference_spectrum", e.what());
    }
  }
  const AtomicMeasure* ext = reference ? &*reference : nullptr;

  const double c_bound = spatial_density_bound(zs);
  auto ratio = [](const ParsevalResult& r) {
    return r.budget > 0.0 ? r.residual / r.budget : (r.residual > 0.0 ? 1e300 : 0.0);
  };

  std::vector<double> widths = opts.widths;
  if (opts.narrow && mu.s_max > 0.0) {
    const double narrow = std::sqrt(8.0 / kPi) / (0.5 * mu.s_max);
    widths.push_back(narrow);
    report.set_param("narrow_width", fmt(narrow));
  }
  for (double sigma : widths) {
    for (double t : {c - 0.25 * w, c, c + 0.25 * w}) {
      if (t - a < 6.0 * sigma || b - t < 6.0 * sigma) continue;
      const auto t0 = Clock::now();
      const auto r = parseval_impl(zs, mu, {t, sigma, 0.0}, ext, c_bound);
      report.add("parseval[t=" + fmt(t) + ",sigma=" + fmt(sigma) + "]", r.residual, r.budget,
                 ms_since(t0));
    }
  }
  if (opts.tiled) {
    const double sigma = 0.5;
    const auto t0 = Clock::now();
    double worst = 0.0;
    int tiles = 0;
    for (double t = a + 6.0 * sigma; t <= b - 6.0 * sigma; t += 2.0 * sigma, ++tiles) {
      worst = std::max(worst, ratio(parseval_impl(zs, mu, {t, sigma, 0.0}, ext, c_bound)));
    }
    if (tiles > 0) report.add("parseval_tiled", worst, 1.0, ms_since(t0));
    report.set_param("parseval_tiles", std::to_string(tiles));
  }
  if (opts.modulated && ext && !mu.atoms.empty()) {
    // Wide enough to resolve each atom, narrow enough to fit the window.
    const double sigma = std::min(3.0, w / 12.0);
    if (sigma >= 1.0 / std::max(mu.s_max, 1e-300)) {
      const auto t0 = Clock::now();
      std::vector<double> worst(mu.atoms.size());
      parallel_chunks(mu.atoms.size(), [&](std::size_t i) {
        worst[i] = ratio(parseval_impl(zs, mu, {c, sigma, mu.atoms[i].s}, ext, c_bound));
      });
      report.add("parseval_modulated", *std::max_element(worst.begin(), worst.end()), 1.0,
                 ms_since(t0));
      report.set_param("modulated_width", fmt(sigma));
    }
  }

  if (zs.size() >= 50) {
    const auto t0 = Clock::now();
    const auto d = density_check(zs, mu.a0.real());
    const double ms = ms_since(t0);
    report.add("density_bound", d.c_emp, d.bound, ms);
    report.add("density_stability", std::abs(d.c_left - d.c_right),
               0.1 * std::max(d.c_left, d.c_right), ms);
    report.set_param("C_emp", fmt(d.c_emp));
  }
  if (mu.a0.real() > 0.0) {
    report.add("density_vs_a0", std::abs(zs.density() - mu.a0.real()) / mu.a0.real(), 0.02);
  }
  if (!zs.zeros.empty()) {
    const auto d = greedy_decompose(zs.zeros);
    report.add("discreteness", d.m_ud, kMaxDiscreteSubsets);
    report.set_param("m_ud", std::to_string(d.m_ud));
  }

  add_growth_entries(report, growth_check(p, mu));

  if (p.hermitian() || is_real_on_line(p, 256).real) {
    report.add("hermitian_symmetry", hermitian_asymmetry(mu), 1e-8);
  }

  if (zs.size() >= 2 && p.size() >= 2) {
    const double shift = center_shift(zs);
    const auto sp = shift_problem(p, zs, shift);
    report.set_param("lemma1_shift", fmt(shift));
    const auto upper = expansion_from_spectrum(mu, Side::Upper, shift);
    const auto lower = expansion_from_spectrum(mu, Side::Lower, shift);
    for (const auto& pt : opts.lemma_points) {
      const auto t0 = Clock::now();
      const bool up = pt.imag() > 0.0;
      const auto r = lemma1_residual(sp.p, sp.zs, up ? upper : lower, pt,
                                     {mu.a0.real(), mu.s_max});
      report.add("lemma1[w=" + fmt(pt.real()) + (pt.imag() >= 0 ? "+" : "") + fmt(pt.imag()) + "i]",
                 r.corrected, r.budget, ms_since(t0));
    }
  }
  return report;
}

}  // namespace fqlab
