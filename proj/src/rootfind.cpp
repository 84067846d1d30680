#include "fqlab/rootfind.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <numbers>
#include <sstream>

#include "fqlab/error.hpp"
#include "fqlab/kernels.hpp"
#include "fqlab/parallel.hpp"

namespace fqlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

struct RealView {
  const ExpPolynomial& p;
  const ExpPolynomial& dp;
  double value(double x) const { return p.eval(x).real(); }
  double slope(double x) const { return dp.eval(x).real(); }
  long double value_ext(long double x) const { return p.eval_extended(x).real(); }
  long double slope_ext(long double x) const { return dp.eval_extended(x).real(); }
};

std::string at(double x) {
  std::ostringstream os;
  os.precision(17);
  os << " at x = " << x;
  return os.str();
}

struct ScanParams {
  double tol_zero_abs;   // tol_zero · Σ|b|
  double tol_simple;
  double curvature;      // Σ|b|γ², bound on |p''|
  double ext_noise;      // extended-precision evaluation noise scale
};

// Refines a zero inside [l, r]; the exact signs at the ends may disagree
// with the grid when a zero sits on a grid point.
std::optional<double> refine(const RealView& f, double l, double r, const ScanParams& sp) {
  double fl = f.value(l);
  double fr = f.value(r);
  double x;
  if (sign_of(fl) == sign_of(fr)) {
    // Grid noise: accept an endpoint only if it is itself a zero.
    x = std::abs(fl) <= std::abs(fr) ? l : r;
    if (std::abs(f.value(x)) > 1e3 * sp.tol_zero_abs) return std::nullopt;
  } else {
    const double width0 = r - l;
    while (r - l > 1e-6 * width0) {
      const double m = 0.5 * (l + r);
      const double fm = f.value(m);
      if (sign_of(fm) == sign_of(fl)) {
        l = m;
        fl = fm;
      } else {
        r = m;
      }
    }
    x = 0.5 * (l + r);
    for (int it = 0; it < 40; ++it) {
      const double d = f.slope(x);
      if (d == 0.0) break;
      double next = x - f.value(x) / d;
      if (!(next >= l && next <= r)) next = 0.5 * (l + r);
      const double step = std::abs(next - x);
      x = next;
      if (step <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
    }
  }
  auto floor_at = [&](double xx) {
    return static_cast<double>(std::abs(f.slope_ext(xx))) * std::abs(std::nextafter(xx, kInf) - xx);
  };
  if (std::abs(static_cast<double>(f.value_ext(x))) > sp.tol_zero_abs + floor_at(x)) {
    // Precision escalation: Newton in long double.
    long double xe = x;
    for (int it = 0; it < 20; ++it) {
      const long double d = f.slope_ext(xe);
      if (d == 0.0L) break;
      const long double step = f.value_ext(xe) / d;
      xe -= step;
      if (std::abs(step) <= 4.0L * std::numeric_limits<long double>::epsilon() *
                                std::max(1.0L, std::abs(xe)))
        break;
    }
    x = static_cast<double>(xe);
    if (std::abs(static_cast<double>(f.value_ext(x))) > sp.tol_zero_abs + floor_at(x)) {
      throw Error(ErrorKind::Tangency, "Newton refinement stalled above tol_zero" + at(x));
    }
  }
  return x;
}

// Finds the critical point of p inside a cell where p' changes sign.
double critical_point(const RealView& f, double l, double r) {
  double sl = sign_of(f.slope(l));
  for (int it = 0; it < 80 && r - l > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(l)); ++it) {
    const double m = 0.5 * (l + r);
    if (sign_of(f.slope(m)) == sl) {
      l = m;
    } else {
      r = m;
    }
  }
  return 0.5 * (l + r);
}

std::vector<double> scan_cells(const RealView& f, const ExpPolynomial& p, const ExpPolynomial& dp,
                               Window w, std::size_t cells, const ScanParams& sp) {
  const double dx = w.length() / static_cast<double>(cells);
  const std::size_t chunk_cells = 1 << 14;
  const std::size_t chunks = (cells + chunk_cells - 1) / chunk_cells;
  std::vector<std::vector<double>> found(chunks);

  parallel_chunks(chunks, [&](std::size_t c) {
    const std::size_t first = c * chunk_cells;
    const std::size_t n = std::min(chunk_cells, cells - first);
    std::vector<double> v_re(n + 1), v_im(n + 1), d_re(n + 1), d_im(n + 1);
    const double x0 = w.a + dx * static_cast<double>(first);
    kernels::eval_grid(p.terms(), x0, dx, v_re, v_im);
    kernels::eval_grid(dp.terms(), x0, dx, d_re, d_im);
    auto& out = found[c];
    auto xs = [&](std::size_t j) {
      return j + first == cells ? w.b : w.a + dx * static_cast<double>(first + j);
    };
    for (std::size_t j = 0; j < n; ++j) {
      const double l = xs(j);
      const double r = xs(j + 1);
      const int sl = sign_of(v_re[j]);
      const int sr = sign_of(v_re[j + 1]);
      if (sl != sr) {
        if (auto z = refine(f, l, r, sp)) out.push_back(*z);
        continue;
      }
      if (sign_of(d_re[j]) == sign_of(d_re[j + 1])) continue;
      // A critical point inside a same-sign cell: either a hidden pair of
      // zeros or a tangency, but only if p can reach zero within the cell.
      const double reach = 0.5 * sp.curvature * dx * dx;
      if (std::min(std::abs(v_re[j]), std::abs(v_re[j + 1])) > reach) continue;
      const double cp = critical_point(f, l, r);
      const long double vc = f.value_ext(cp);
      const double noise = sp.ext_noise * (1.0 + std::abs(cp));
      if (sign_of(static_cast<double>(vc)) != sl && std::abs(static_cast<double>(vc)) > noise) {
        if (auto z = refine(f, l, cp, sp)) out.push_back(*z);
        if (auto z = refine(f, cp, r, sp)) out.push_back(*z);
      } else if (std::abs(static_cast<double>(vc)) <= sp.tol_zero_abs) {
        throw Error(ErrorKind::Tangency,
                    "local extremum with |p| below tol_zero and no sign change" + at(cp));
      }
    }
  });

  std::vector<double> zeros;
  for (auto& v : found) zeros.insert(zeros.end(), v.begin(), v.end());
  std::sort(zeros.begin(), zeros.end());
  // A zero on a grid point can be reported by both adjacent cells.
  std::vector<double> uniq;
  for (double z : zeros) {
    if (!(z > w.a && z < w.b)) continue;
    if (!uniq.empty() && z - uniq.back() <= 1e-9 * dx) continue;
    uniq.push_back(z);
  }
  return uniq;
}

std::size_t cell_count(const ExpPolynomial& p, Window w, int factor) {
  const double delta = kPi / (factor * p.max_abs_gamma());
  return static_cast<std::size_t>(std::ceil(w.length() / delta));
}

// Gauss–Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dpn = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dpn = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dpn;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.x[i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * dpn * dpn);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

struct ContourIntegral {
  cplx value;
  bool near_zero = false;
};

ContourIntegral integrate_contour(const ExpPolynomial& p, const ExpPolynomial& dp, Rectangle r,
                                  int nodes) {
  const auto& rule = gauss_legendre(nodes);
  const double g = std::max(p.max_abs_gamma(), 1e-12);
  const double panel = 0.5 * std::min(r.h, kPi / g);
  const std::array<cplx, 5> corners = {cplx(r.a, -r.h), cplx(r.b, -r.h), cplx(r.b, r.h),
                                       cplx(r.a, r.h), cplx(r.a, -r.h)};
  ContourIntegral out;
  cplx total{};
  for (int e = 0; e < 4; ++e) {
    const cplx z0 = corners[e];
    const cplx z1 = corners[e + 1];
    const double len = std::abs(z1 - z0);
    const int panels = std::max(1, static_cast<int>(std::ceil(len / panel)));
    const cplx step = (z1 - z0) / static_cast<double>(panels);
    const double plen = std::abs(step);
    for (int k = 0; k < panels; ++k) {
      const cplx mid = z0 + step * (k + 0.5);
      cplx acc{};
      for (int i = 0; i < nodes; ++i) {
        const cplx z = mid + 0.5 * step * rule.x[i];
        const cplx pv = p.eval(z);
        const cplx dv = dp.eval(z);
        // |p/p'| approximates the distance to the nearest zero.
        if (std::abs(pv) < 0.125 * plen * std::abs(dv) || pv == cplx{}) out.near_zero = true;
        acc += rule.w[i] * (dv / pv);
      }
      total += 0.5 * step * acc;
    }
  }
  out.value = total / cplx(0.0, 2.0 * kPi);
  return out;
}

}  // namespace

ZeroSet find_real_zeros(const ExpPolynomial& p, Window window, const FindOptions& opts) {
  if (!(window.b > window.a) || !std::isfinite(window.a) || !std::isfinite(window.b)) {
    throw Error(ErrorKind::InvalidArgument, "window must satisfy a < b");
  }
  if (!(opts.tol_zero > 0.0) || opts.grid_factor < 1) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
  if (!p.hermitian() && !is_real_on_line(p, 256).real) {
    throw Error(ErrorKind::InvalidArgument,
                "p is not real on the line; use the argument-principle path");
  }
  ZeroSet zs;
  zs.window = window;
  zs.min_gap = kInf;
  if (p.max_abs_gamma() == 0.0) return zs;  // nonzero constant

  const ExpPolynomial dp = derivative(p);
  const RealView f{p, dp};
  const double scale = p.amplitude_sum();
  ScanParams sp;
  sp.tol_zero_abs = opts.tol_zero * scale;
  sp.tol_simple = opts.tol_simple > 0.0 ? opts.tol_simple : 1e-8 * p.max_abs_gamma() * scale;
  sp.curvature = 0.0;
  for (const auto& t : p.terms()) sp.curvature += std::abs(t.amplitude) * t.gamma * t.gamma;
  sp.ext_noise = 64.0 * std::numeric_limits<long double>::epsilon() * scale *
                 std::max(1.0, p.max_abs_gamma());

  const std::size_t cells = cell_count(p, window, opts.grid_factor);
  zs.zeros = scan_cells(f, p, dp, window, cells, sp);
  if (opts.self_test) {
    const auto fine = scan_cells(f, p, dp, window, 2 * cells, sp);
    if (fine.size() != zs.zeros.size()) {
      std::ostringstream os;
      os << zs.zeros.size() << " zeros at grid factor " << opts.grid_factor << " but "
         << fine.size() << " at factor " << 2 * opts.grid_factor;
      throw Error(ErrorKind::GridTooCoarse, os.str());
    }
  }
  for (double z : zs.zeros) {
    const double dv = std::abs(f.slope(z));
    if (dv < sp.tol_simple) {
      throw Error(ErrorKind::Tangency, "zero is not simple (|p'| below tol_simple)" + at(z));
    }
    zs.derivative_magnitudes.push_back(dv);
    zs.value_magnitudes.push_back(std::abs(static_cast<double>(f.value_ext(z))));
  }
  for (std::size_t i = 1; i < zs.zeros.size(); ++i) {
    zs.min_gap = std::min(zs.min_gap, zs.zeros[i] - zs.zeros[i - 1]);
  }
  return zs;
}

ContourCount count_zeros_rectangle(const ExpPolynomial& p, Rectangle rect, int quadrature_points) {
  if (!(rect.b > rect.a) || !(rect.h > 0.0) || quadrature_points < 2) {
    throw Error(ErrorKind::InvalidArgument, "rectangle must be nonempty with h > 0");
  }
  if (p.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial");
  const ExpPolynomial dp = derivative(p);
  const double width = rect.b - rect.a;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    Rectangle r = rect;
    if (attempt > 0) {
      // Up to 10% total inflation; the irrational factor keeps the moved
      // edges off lattice-like zero sets.
      const double grow = 0.1 * width * attempt / 3.0 * (1.0 / std::numbers::sqrt2);
      r.a -= 0.5 * grow;
      r.b += 0.5 * grow / std::numbers::sqrt2;
      r.h *= 1.0 + 0.1 * attempt / 3.0;
    }
    const auto coarse = integrate_contour(p, dp, r, quadrature_points);
    if (coarse.near_zero) continue;
    const auto fine = integrate_contour(p, dp, r, 2 * quadrature_points);
    if (fine.near_zero) continue;
    if (std::abs(fine.value - coarse.value) > 0.01) {
      throw Error(ErrorKind::QuadratureNotConverged,
                  "doubling quadrature points changed the winding integral by > 0.01");
    }
    ContourCount out;
    out.rect = r;
    out.inflations = attempt;
    out.raw_re = fine.value.real();
    out.raw_im = fine.value.imag();
    out.count = std::lround(out.raw_re);
    out.residual = std::hypot(out.raw_re - static_cast<double>(out.count), out.raw_im);
    if (!(out.residual < 0.1)) {
      throw Error(ErrorKind::QuadratureNotConverged, "winding integral is not near an integer");
    }
    return out;
  }
  throw Error(ErrorKind::ContourNearZero, "|p| vanishes near the contour after 3 inflations");
}

ZeroSet certify_real_simple(const ExpPolynomial& p, Window window, double h,
                            const FindOptions& opts) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "strip height must be positive");
  ZeroSet zs = find_real_zeros(p, window, opts);
  const auto cc = count_zeros_rectangle(p, {window.a, window.b, h});
  std::size_t real_count = zs.size();
  if (cc.inflations > 0) {
    real_count = find_real_zeros(p, {cc.rect.a, cc.rect.b}, opts).size();
  }
  const auto contour = static_cast<std::size_t>(std::max(0L, cc.count));
  if (contour > real_count) {
    std::ostringstream os;
    os << "contour count " << cc.count << " exceeds " << real_count << " real zeros";
    throw Error(ErrorKind::HiddenNonRealZeros, os.str());
  }
  if (contour < real_count || cc.count < 0) {
    std::ostringstream os;
    os << "contour count " << cc.count << " below " << real_count << " real zeros";
    throw Error(ErrorKind::CertificationFailed, os.str());
  }
  zs.certified_strip_height = h;
  return zs;
}

Decomposition greedy_decompose(std::span<const double> pts, double gap_threshold) {
  Decomposition out;
  if (pts.empty()) return out;
  if (gap_threshold <= 0.0) {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < pts.size(); ++i) gaps.push_back(pts[i] - pts[i - 1]);
    if (gaps.empty()) {
      gap_threshold = kInf;
    } else {
      const auto mid = gaps.begin() + static_cast<std::ptrdiff_t>((gaps.size() - 1) / 2);
      std::nth_element(gaps.begin(), mid, gaps.end());
      gap_threshold = 0.5 * *mid;
    }
  }
  out.gap_threshold = gap_threshold;
  std::vector<double> remaining(pts.begin(), pts.end());
  while (!remaining.empty()) {
    std::vector<double> rest;
    double last = remaining.front();
    double sep = kInf;
    for (std::size_t i = 1; i < remaining.size(); ++i) {
      const double gap = remaining[i] - last;
      if (gap >= gap_threshold) {
        sep = std::min(sep, gap);
        last = remaining[i];
      } else {
        rest.push_back(remaining[i]);
      }
    }
    ++out.m_ud;
    out.min_gaps.push_back(sep);
    remaining = std::move(rest);
  }
  return out;
}

double empirical_density_constant(std::span<const double> pts, Window w, double min_length) {
  const double total = w.length();
  if (!(min_length > 0.0)) throw Error(ErrorKind::InvalidArgument, "min_length must be positive");
  double best = 0.0;
  for (double len = std::min(min_length, total); len <= total * (1.0 + 1e-12); len *= 2.0) {
    const double stride = 0.5 * len;
    for (double start = w.a; start + len <= w.b + 1e-12 * total; start += stride) {
      const auto lo = std::lower_bound(pts.begin(), pts.end(), start);
      const auto hi = std::lower_bound(pts.begin(), pts.end(), start + len);
      best = std::max(best, static_cast<double>(hi - lo) / (1.0 + len));
    }
  }
  return best;
}

CountingStats counting_stats(const ZeroSet& zs, double unit) {
  if (zs.zeros.empty()) throw Error(ErrorKind::InvalidArgument, "counting_stats needs zeros");
  if (!(unit > 0.0)) throw Error(ErrorKind::InvalidArgument, "unit must be positive");
  CountingStats s;
  s.unit = unit;
  const auto cells = static_cast<std::size_t>(std::ceil(zs.window.length() / unit));
  s.counts.assign(cells, 0);
  for (double z : zs.zeros) {
    auto k = static_cast<std::size_t>(std::floor((z - zs.window.a) / unit));
    s.counts[std::min(k, cells - 1)] += 1;
  }
  s.density = zs.density();
  s.c_emp = empirical_density_constant(zs.zeros, zs.window, unit);
  s.m_ud = greedy_decompose(zs.zeros).m_ud;
  return s;
}

double origin_shift(const ZeroSet& zs) {
  const auto& z = zs.zeros;
  const auto it = std::lower_bound(z.begin(), z.end(), 0.0);
  std::size_t idx = static_cast<std::size_t>(it - z.begin());
  // Pick the zero closest to the origin.
  if (idx > 0 && (idx == z.size() || std::abs(z[idx - 1]) < std::abs(z[idx]))) --idx;
  if (idx >= z.size()) return 0.0;
  const double scale = std::isfinite(zs.min_gap) ? zs.min_gap : 1.0;
  if (std::abs(z[idx]) > 1e-10 * scale) return 0.0;
  double gap = kInf;
  if (idx > 0) gap = std::min(gap, z[idx] - z[idx - 1]);
  if (idx + 1 < z.size()) gap = std::min(gap, z[idx + 1] - z[idx]);
  if (!std::isfinite(gap)) gap = 1.0;
  return 0.5 * gap;
}

ZeroSet shifted(const ZeroSet& zs, double a) {
  ZeroSet out = zs;
  out.window = {zs.window.a - a, zs.window.b - a};
  for (auto& z : out.zeros) z -= a;
  return out;
}

}  // namespace fqlab
