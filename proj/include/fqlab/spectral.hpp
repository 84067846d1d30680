#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fqlab/expseries.hpp"
#include "fqlab/exppoly.hpp"
#include "fqlab/rootfind.hpp"

namespace fqlab {

enum class Side { Upper, Lower };

/// p(w) = exp(scalar)·e^{linear·w}·exp(series(w)) on one half-plane.
///
/// Upper: linear = iγ_min and series frequencies u < 0. Lower: linear = iγ_max;
/// the series is the upper expansion of p(−w), so its frequencies are also
/// stored negative and stand for s = −u > 0.
struct HalfPlaneExpansion {
  Side side = Side::Upper;
  cplx linear_coefficient;
  cplx scalar;  ///< log of the dominant amplitude
  ExpSeries series;
};

/// Factors out the dominant term (γ_min above, γ_max below) and takes the
/// series log of the remainder. The reference height is raised 1 → 2 → 4 → 8
/// if the remainder is not yet dominated at y_ref.
HalfPlaneExpansion half_plane_expand(const ExpPolynomial& p, Side side, double cutoff,
                                     SeriesParams params = {});

struct SpectrumAtom {
  double s = 0.0;
  cplx a;
};

struct GrowthFit {
  double K = 0.0;        ///< least-squares prefactor
  double m = 0.0;        ///< exponent in Σ_{|s|<R}|a_s| ≈ K·R^m
  double m_width = 0.0;  ///< standard error of m
  double K_envelope = 0.0;  ///< smallest K' with partial sums <= K'·R^m on the fitted grid
};

/// Atoms (s, a_s) of μ̂ with |s| <= s_max plus the mass a_0 at the origin.
struct AtomicMeasure {
  std::vector<SpectrumAtom> atoms;  ///< sorted by s, s ≠ 0
  cplx a0;
  double s_max = 0.0;
  cplx alpha;
  cplx beta;
  GrowthFit growth;
  std::size_t merge_events = 0;
  std::size_t dropped_atoms = 0;

  /// Mass at s (0 if absent), matched within tol.
  cplx mass_at(double s, double tol = 1e-9) const;
};

struct SpectrumOptions {
  double s_max = 0.0;   ///< <= 0 selects 10·(γ_max − γ_min)/(2π)
  double cutoff = 0.0;  ///< series cutoff in u-units; <= 0 selects s_max
  SeriesParams series;
  /// Relative tolerance for a_{−s} = conj(a_s) on real-on-line p.
  double hermitian_tol = 1e-6;
  /// Atoms below this fraction of the largest |a_s| are numerically zero.
  double atom_floor = 1e-12;
};

double default_s_max(const ExpPolynomial& p);

AtomicMeasure spectrum_from_polynomial(const ExpPolynomial& p, const SpectrumOptions& opts = {});

/// Least-squares fit of partial sums Σ_{|s|<R}|a_s| ≈ K·R^m over dyadic R <= s_max.
GrowthFit fit_growth(std::span<const SpectrumAtom> atoms, double s_max);

struct ProductValue {
  cplx value;
  double radius = 0.0;  ///< max |λ| over the factors used
};

/// Π (1 − w/λ)e^{w/λ} over the zeros, as exp of a pairwise sum of logs.
ProductValue canonical_product(const ZeroSet& zs, ComplexPoint w);

struct Lemma1Options {
  double density = 0.0;  ///< <= 0 selects (γ_max − γ_min)/(2π)
  double s_max = 0.0;    ///< <= 0 uses every atom of the expansion
};

struct Lemma1Result {
  cplx lhs;           ///< windowed Σ (1/(w−λ) + 1/λ)
  cplx tail_correction;
  cplx rhs;           ///< α − 2πi Σ_{s<0} a_s e^{−2πiws} (upper) or its lower analogue
  cplx alpha_used;    ///< linear coefficient minus p'(0)/p(0)
  double raw = 0.0;        ///< |lhs − rhs|
  double corrected = 0.0;  ///< |lhs + tail_correction − rhs|
  double budget = 0.0;
  double residual = 0.0;   ///< max(0, corrected − budget)
};

/// Numerical check of the half-plane identity between the zero set and the
/// spectrum. The window must straddle the origin and 0 ∉ Λ.
Lemma1Result lemma1_residual(const ExpPolynomial& p, const ZeroSet& zs,
                             const HalfPlaneExpansion& expansion, ComplexPoint w,
                             const Lemma1Options& opts = {});

struct ShiftedProblem {
  ExpPolynomial p;
  ZeroSet zs;
  double shift = 0.0;
};

/// (p(x + a), Λ − a).
ShiftedProblem shift_problem(const ExpPolynomial& p, const ZeroSet& zs, double a);

/// Moves 0 off Λ using `origin_shift`; identity when 0 ∉ Λ already.
ShiftedProblem shift_off_origin(const ExpPolynomial& p, const ZeroSet& zs);

}  // namespace fqlab
