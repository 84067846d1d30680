#pragma once

// Randomized series-algebra properties, shared by the unit tests and the
// acceptance binary. Frequencies live on a 0.1 lattice so semigroup
// membership can be decided exactly by integer knapsack.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fqlab/expseries.hpp"

namespace props {

using fqlab::cplx;
using fqlab::ExpSeries;
using fqlab::SeriesAtom;
using fqlab::SeriesParams;

inline constexpr double kLattice = 0.1;
inline constexpr double kCutoff = 8.0;

inline SeriesParams params() {
  SeriesParams p;
  p.cutoff = kCutoff;
  return p;
}

// Up to 20 atoms with u on the lattice in [−5, −0.1], nonconstant mass at
// y_ref = 1 scaled into (0, 0.5]·|c_0|.
inline ExpSeries random_series(std::mt19937_64& rng, bool with_constant = true) {
  std::uniform_int_distribution<int> count(1, 20);
  std::uniform_int_distribution<int> lattice(1, 50);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.01, 0.5);
  std::vector<SeriesAtom> atoms;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) atoms.push_back({-kLattice * lattice(rng), {gauss(rng), gauss(rng)}});
  double mass = 0.0;
  for (const auto& a : atoms) mass += std::abs(a.c) * std::exp(2 * std::numbers::pi * a.u);
  const double target = unit(rng);
  cplx c0 = with_constant ? cplx(gauss(rng), gauss(rng)) : cplx(1.0, 0.0);
  if (std::abs(c0) < 0.1) c0 = {1.0, 0.0};
  for (auto& a : atoms) a.c *= target * std::abs(c0) / mass;
  atoms.push_back({0.0, c0});
  return ExpSeries(std::move(atoms), params());
}

// Atom-wise difference in the y_ref-weighted scale |c_u|·e^{2πu·y_ref} that
// mass and tail_bound are measured in.
inline double max_atom_diff(const ExpSeries& f, const ExpSeries& g) {
  const double y = f.params().y_ref;
  auto wt = [y](double u) { return std::exp(2 * std::numbers::pi * u * y); };
  double worst = 0.0;
  for (const auto& a : f.atoms()) worst = std::max(worst, std::abs(a.c - g.coefficient(a.u)) * wt(a.u));
  for (const auto& a : g.atoms()) worst = std::max(worst, std::abs(a.c - f.coefficient(a.u)) * wt(a.u));
  return worst;
}

struct Stats {
  int runs = 0;
  int failures = 0;
  double worst = 0.0;  ///< max of residual / allowance
};

// exp(log f) == f atom-wise within 1e-10 + tail bounds.
inline Stats round_trip(int runs, unsigned seed) {
  std::mt19937_64 rng(seed);
  Stats s;
  for (int i = 0; i < runs; ++i, ++s.runs) {
    const auto f = random_series(rng);
    const auto lg = fqlab::series_log(f);
    const auto back = fqlab::series_exp(lg);
    const double allow = 1e-10 + back.tail_bound() + lg.series.tail_bound();
    const double r = max_atom_diff(f, back) / allow;
    s.worst = std::max(s.worst, r);
    if (r > 1.0) ++s.failures;
  }
  return s;
}

// (fg)h == f(gh) and eval(fg) == eval(f)eval(g) within combined bounds.
inline Stats mul_laws(int runs, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xs(-3.0, 3.0), ys(1.0, 3.0);
  Stats s;
  for (int i = 0; i < runs; ++i, ++s.runs) {
    const auto f = random_series(rng);
    const auto g = random_series(rng);
    const auto h = random_series(rng);
    const auto left = fqlab::series_mul(fqlab::series_mul(f, g), h);
    const auto right = fqlab::series_mul(f, fqlab::series_mul(g, h));
    const double scale = f.mass() * g.mass() * h.mass();
    const double allow_assoc = 1e-13 * scale + left.tail_bound() + right.tail_bound();
    double r = max_atom_diff(left, right) / allow_assoc;

    const fqlab::ComplexPoint w{xs(rng), ys(rng)};
    const auto fg = fqlab::series_mul(f, g);
    const auto vf = fqlab::eval_series(f, w);
    const auto vg = fqlab::eval_series(g, w);
    const auto vfg = fqlab::eval_series(fg, w);
    const double allow_hom = vfg.error_bound + std::abs(vf.value) * vg.error_bound +
                             std::abs(vg.value) * vf.error_bound + vf.error_bound * vg.error_bound +
                             1e-14 * f.mass() * g.mass();
    r = std::max(r, std::abs(vfg.value - vf.value * vg.value) / allow_hom);
    s.worst = std::max(s.worst, r);
    if (r > 1.0) ++s.failures;
  }
  return s;
}

// Every frequency of exp(q) is a sum of frequencies of q.
inline Stats semigroup_containment(int runs, unsigned seed) {
  std::mt19937_64 rng(seed);
  Stats s;
  const int top = static_cast<int>(std::lround(kCutoff / kLattice));
  for (int i = 0; i < runs; ++i, ++s.runs) {
    const auto f = random_series(rng, false);
    std::vector<SeriesAtom> q;
    std::vector<int> gens;
    for (const auto& a : f.atoms()) {
      if (a.u != 0.0) {
        q.push_back(a);
        gens.push_back(static_cast<int>(std::lround(-a.u / kLattice)));
      }
    }
    std::vector<char> reach(top + 1, 0);
    reach[0] = 1;
    for (int k = 1; k <= top; ++k) {
      for (int g : gens) {
        if (g <= k && reach[k - g]) {
          reach[k] = 1;
          break;
        }
      }
    }
    const auto e = fqlab::series_exp(ExpSeries(q, params()));
    bool ok = true;
    for (const auto& a : e.atoms()) {
      const double k = -a.u / kLattice;
      const long ki = std::lround(k);
      if (std::abs(k - ki) > 1e-6 || ki > top || !reach[ki]) ok = false;
    }
    std::vector<double> gen_u;
    for (int g : gens) gen_u.push_back(g * kLattice);
    const auto sg = fqlab::generate_semigroup(gen_u, kCutoff, 1e-9, 200000);
    std::vector<char> seen(top + 1, 0);
    for (double u : sg.elements) {
      const long ki = std::lround(u / kLattice);
      if (std::abs(u / kLattice - ki) > 1e-6 || ki > top || !reach[ki]) ok = false;
      else seen[ki] = 1;
    }
    // Sums landing a rounding error past the cutoff may be left out.
    for (int k = 0; k < top; ++k) {
      if (reach[k] && !seen[k]) ok = false;
    }
    if (!ok) ++s.failures;
  }
  return s;
}

}  // namespace props
