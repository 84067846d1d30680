#include "fqlab/expseries.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>

#include "fqlab/compensated.hpp"
#include "fqlab/error.hpp"

namespace fqlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double weight(double u, double y) { return std::exp(kTwoPi * u * y); }

// Index of the element of `sorted` within tol of v, or npos.
constexpr std::size_t npos = static_cast<std::size_t>(-1);
std::size_t find_near(std::span<const double> sorted, double v, double tol) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v - tol);
  if (it != sorted.end() && *it <= v + tol) {
    auto best = it;
    for (auto jt = it; jt != sorted.end() && *jt <= v + tol; ++jt) {
      if (std::abs(*jt - v) < std::abs(*best - v)) best = jt;
    }
    return static_cast<std::size_t>(best - sorted.begin());
  }
  return npos;
}

// Smallest e^{−2πT(y−y')}·majorant(M(y')) over a grid of y' in (0, y).
template <typename Majorant>
double cutoff_tail(double cutoff, double y, const std::function<double(double)>& mass_at,
                   Majorant majorant) {
  if (!std::isfinite(cutoff)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 32; ++k) {
    const double yp = y * k / 32.0;
    const double m = majorant(mass_at(yp));
    if (!std::isfinite(m)) continue;
    best = std::min(best, std::exp(-kTwoPi * cutoff * (y - yp)) * m);
  }
  return best;
}

struct Split {
  cplx constant;
  std::vector<double> mags;  // ascending magnitudes of the nonconstant atoms
  std::vector<cplx> coeffs;
};

Split split_negative(const ExpSeries& f) {
  Split s;
  const double eps = f.params().merge_eps;
  for (auto it = f.atoms().rbegin(); it != f.atoms().rend(); ++it) {
    if (std::abs(it->u) <= eps) {
      s.constant += it->c;
    } else if (it->u > 0.0) {
      throw Error(ErrorKind::NonNegativeFrequency, "atom at u > 0");
    } else {
      s.mags.push_back(-it->u);
      s.coeffs.push_back(it->c);
    }
  }
  return s;
}

double split_mass(const Split& s, double y) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.mags.size(); ++i) m += std::abs(s.coeffs[i]) * weight(-s.mags[i], y);
  return m;
}

}  // namespace

ExpSeries::ExpSeries(std::vector<SeriesAtom> atoms, SeriesParams params, double tail_bound)
    : params_(params), tail_bound_(tail_bound) {
  if (!(params_.cutoff > 0.0) || !(params_.y_ref > 0.0) || !(params_.merge_eps >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "series parameters must be positive");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const SeriesAtom& a, const SeriesAtom& b) { return a.u < b.u; });
  std::vector<SeriesAtom> merged;
  merged.reserve(atoms.size());
  double prev_u = 0.0;
  for (const auto& a : atoms) {
    if (!merged.empty() && a.u - prev_u <= params_.merge_eps) {
      if (a.u != prev_u) ++merge_events_;
      auto& back = merged.back();
      if (std::abs(a.u) < std::abs(back.u)) back.u = a.u;
      back.c += a.c;
    } else {
      merged.push_back(a);
    }
    prev_u = a.u;
  }
  for (const auto& a : merged) {
    if (std::abs(a.u) > params_.cutoff || std::abs(a.c) < params_.drop_eps) {
      tail_bound_ += std::abs(a.c) * weight(a.u, params_.y_ref);
    } else {
      atoms_.push_back(a);
    }
  }
  if (atoms_.size() > params_.max_atoms) {
    throw Error(ErrorKind::AtomBudgetExceeded,
                std::to_string(atoms_.size()) + " atoms > max_atoms");
  }
}

ExpSeries ExpSeries::one(SeriesParams params) { return ExpSeries({{0.0, cplx(1.0)}}, params); }

cplx ExpSeries::coefficient(double u) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), u - params_.merge_eps,
                             [](const SeriesAtom& a, double v) { return a.u < v; });
  if (it != atoms_.end() && it->u <= u + params_.merge_eps) return it->c;
  return {};
}

double ExpSeries::mass(double y) const {
  NeumaierSum<double> s;
  for (const auto& a : atoms_) s.add(std::abs(a.c) * weight(a.u, y));
  return s.value();
}

ExpSeries series_mul(const ExpSeries& f, const ExpSeries& g) {
  if (f.params().y_ref != g.params().y_ref) {
    throw Error(ErrorKind::InvalidArgument, "series_mul needs matching reference heights");
  }
  SeriesParams params = f.params();
  params.cutoff = std::min(f.cutoff(), g.cutoff());
  params.max_atoms = std::min(f.params().max_atoms, g.params().max_atoms);
  params.merge_eps = std::max(f.params().merge_eps, g.params().merge_eps);
  std::vector<SeriesAtom> prod;
  prod.reserve(f.size() * g.size());
  for (const auto& a : f.atoms()) {
    for (const auto& b : g.atoms()) prod.push_back({a.u + b.u, a.c * b.c});
  }
  const double tail = f.tail_bound() * g.mass() + g.tail_bound() * f.mass() +
                      f.tail_bound() * g.tail_bound();
  ExpSeries out(std::move(prod), params, tail);
  out.merge_events_ += f.merge_events() + g.merge_events();
  return out;
}

Semigroup generate_semigroup(std::span<const double> generators, double cutoff, double merge_eps,
                             std::size_t max_atoms) {
  for (double g : generators) {
    if (!(g > merge_eps)) throw Error(ErrorKind::InvalidArgument, "generators must be positive");
  }
  Semigroup s;
  std::priority_queue<double, std::vector<double>, std::greater<>> heap;
  heap.push(0.0);
  while (!heap.empty()) {
    const double v = heap.top();
    heap.pop();
    if (!s.elements.empty() && v - s.elements.back() <= merge_eps) {
      if (v != s.elements.back()) ++s.merge_events;
      continue;
    }
    s.elements.push_back(v);
    if (s.elements.size() > max_atoms) {
      throw Error(ErrorKind::AtomBudgetExceeded, "frequency semigroup exceeds max_atoms");
    }
    for (double g : generators) {
      if (v + g <= cutoff) heap.push(v + g);
    }
  }
  return s;
}

ExpSeries series_exp(const ExpSeries& f) {
  const auto& prm = f.params();
  const Split g = split_negative(f);
  const Semigroup sg = generate_semigroup(g.mags, prm.cutoff, prm.merge_eps, prm.max_atoms);
  const auto& U = sg.elements;

  // u·E_u = Σ_t t·G_t·E_{u−t}: the graded derivative of E = exp(G).
  std::vector<cplx> e(U.size());
  e[0] = 1.0;
  for (std::size_t k = 1; k < U.size(); ++k) {
    ComplexSum acc;
    for (std::size_t i = 0; i < g.mags.size() && g.mags[i] <= U[k] + prm.merge_eps; ++i) {
      const std::size_t j = find_near(U, U[k] - g.mags[i], 2.0 * prm.merge_eps);
      if (j == npos) continue;
      acc.add(g.mags[i] * g.coeffs[i] * e[j]);
    }
    e[k] = acc.value() / U[k];
  }

  const cplx c0 = std::exp(g.constant);
  const double m = split_mass(g, prm.y_ref);
  double tail = std::abs(c0) * std::exp(m) * std::expm1(f.tail_bound());
  tail += std::abs(c0) * cutoff_tail(prm.cutoff, prm.y_ref,
                                     [&](double y) { return split_mass(g, y); },
                                     [](double mm) { return std::exp(mm); });
  std::vector<SeriesAtom> atoms;
  atoms.reserve(U.size());
  for (std::size_t k = 0; k < U.size(); ++k) atoms.push_back({-U[k], c0 * e[k]});
  ExpSeries out(std::move(atoms), prm, tail);
  return out;
}

SeriesLog series_log(const ExpSeries& f) {
  const auto& prm = f.params();
  Split q = split_negative(f);
  if (q.constant == cplx{}) throw Error(ErrorKind::VanishingConstant, "c_0 = 0");
  for (auto& c : q.coeffs) c /= q.constant;
  const double mq = split_mass(q, prm.y_ref);
  const double delta = f.tail_bound() / std::abs(q.constant);
  if (!(mq + delta < 1.0)) {
    throw Error(ErrorKind::NoConvergence,
                "coefficient mass of q at y_ref is >= 1; raise y_ref");
  }
  const Semigroup sg = generate_semigroup(q.mags, prm.cutoff, prm.merge_eps, prm.max_atoms);
  const auto& U = sg.elements;

  // F = 1 + q, L = log F:  u·L_u = u·q_u − Σ_{v} (u−v)·L_{u−v}·q_v.
  std::vector<cplx> l(U.size());
  for (std::size_t k = 1; k < U.size(); ++k) {
    ComplexSum acc;
    cplx qk{};
    for (std::size_t i = 0; i < q.mags.size() && q.mags[i] <= U[k] + prm.merge_eps; ++i) {
      if (std::abs(q.mags[i] - U[k]) <= 2.0 * prm.merge_eps) {
        qk += q.coeffs[i];
        continue;
      }
      const std::size_t j = find_near(U, U[k] - q.mags[i], 2.0 * prm.merge_eps);
      if (j == npos) continue;
      acc.add(U[j] * l[j] * q.coeffs[i]);
    }
    l[k] = qk - acc.value() / U[k];
  }

  double tail = delta / (1.0 - mq - delta);
  tail += cutoff_tail(prm.cutoff, prm.y_ref, [&](double y) { return split_mass(q, y); },
                      [](double mm) {
                        return mm < 1.0 ? -std::log1p(-mm)
                                        : std::numeric_limits<double>::infinity();
                      });
  std::vector<SeriesAtom> atoms;
  atoms.reserve(U.size());
  for (std::size_t k = 1; k < U.size(); ++k) atoms.push_back({-U[k], l[k]});
  return {std::log(q.constant), ExpSeries(std::move(atoms), prm, tail)};
}

ExpSeries series_exp(const SeriesLog& log) {
  std::vector<SeriesAtom> atoms(log.series.atoms().begin(), log.series.atoms().end());
  atoms.push_back({0.0, log.scalar});
  return series_exp(ExpSeries(std::move(atoms), log.series.params(), log.series.tail_bound()));
}

SeriesValue eval_series(const ExpSeries& f, ComplexPoint w) {
  const double y_ref = f.params().y_ref;
  if (w.im < y_ref * (1.0 - 1e-12)) {
    throw Error(ErrorKind::BelowReferenceHeight, "Im w is below y_ref");
  }
  ComplexSum sum;
  double mag = 0.0;
  for (const auto& a : f.atoms()) {
    const double r = weight(a.u, w.im);
    const double phase = -kTwoPi * a.u * w.re;
    sum.add(a.c * cplx(r * std::cos(phase), r * std::sin(phase)));
    mag += std::abs(a.c) * r * (1.0 + std::abs(phase));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return {sum.value(), f.tail_bound() + 8.0 * eps * mag};
}

}  // namespace fqlab
