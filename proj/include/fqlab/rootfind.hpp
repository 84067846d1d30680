#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fqlab/exppoly.hpp"

namespace fqlab {

struct Window {
  double a = 0.0;
  double b = 0.0;
  double length() const noexcept { return b - a; }
};

/// Real zeros Λ of p inside an open window.
struct ZeroSet {
  Window window;
  std::vector<double> zeros;                   ///< strictly increasing, inside (a, b)
  std::vector<double> value_magnitudes;        ///< |p(λ)|
  std::vector<double> derivative_magnitudes;   ///< |p'(λ)|
  double min_gap = 0.0;                        ///< +inf when fewer than two zeros
  double certified_strip_height = 0.0;         ///< 0 when uncertified

  std::size_t size() const noexcept { return zeros.size(); }
  double density() const noexcept { return static_cast<double>(zeros.size()) / window.length(); }
};

struct FindOptions {
  double tol_zero = 1e-12;
  /// Derivative floor for simplicity; <= 0 selects 1e-8·max|γ|·Σ|b|.
  double tol_simple = 0.0;
  int grid_factor = 8;
  /// Rescan at twice the grid density and require the same zero count.
  bool self_test = true;
};

/// Bracket-and-refine search for the real zeros of a real-on-line p.
ZeroSet find_real_zeros(const ExpPolynomial& p, Window window, const FindOptions& opts = {});

struct Rectangle {
  double a = 0.0;
  double b = 0.0;
  double h = 1.0;  ///< the rectangle is [a, b] × [−h, h]
};

struct ContourCount {
  long count = 0;
  double raw_re = 0.0;
  double raw_im = 0.0;
  double residual = 0.0;
  Rectangle rect;       ///< rectangle actually integrated (after any inflation)
  int inflations = 0;
};

/// Argument-principle zero count (1/2πi)∮ p'/p dw over the rectangle boundary,
/// using composite Gauss–Legendre with `quadrature_points` nodes per panel.
ContourCount count_zeros_rectangle(const ExpPolynomial& p, Rectangle rect,
                                   int quadrature_points = 16);

/// Real zeros on the window plus a contour certificate that the strip
/// [a, b] × [−h, h] holds no other zeros.
ZeroSet certify_real_simple(const ExpPolynomial& p, Window window, double h = 1.0,
                            const FindOptions& opts = {});

struct Decomposition {
  int m_ud = 0;                   ///< number of uniformly discrete subsets
  std::vector<double> min_gaps;   ///< separation of each subset (+inf for singletons)
  double gap_threshold = 0.0;
};

/// Greedy leftmost-first split of a sorted point list into subsets whose
/// consecutive gaps are all >= gap_threshold. A threshold <= 0 selects half
/// the median gap.
Decomposition greedy_decompose(std::span<const double> sorted_points, double gap_threshold = 0.0);

/// max over sliding windows (length unit·2^j, stride half a length, down to
/// `min_length`) of count/(1 + length).
double empirical_density_constant(std::span<const double> sorted_points, Window window,
                                  double min_length);

struct CountingStats {
  double unit = 1.0;
  std::vector<int> counts;   ///< per subinterval [a + k·unit, a + (k+1)·unit)
  double density = 0.0;
  double c_emp = 0.0;
  int m_ud = 0;
};

CountingStats counting_stats(const ZeroSet& zs, double unit = 1.0);

/// Translation a that moves 0 off Λ: half the smallest gap adjacent to the
/// zero at the origin, or 0 when no zero sits at the origin.
double origin_shift(const ZeroSet& zs);

/// Λ − a, with the window shifted alike.
ZeroSet shifted(const ZeroSet& zs, double a);

}  // namespace fqlab
