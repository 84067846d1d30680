#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "fqlab/exppoly.hpp"

namespace fqlab {

struct SeriesParams {
  /// Only atoms with |u| <= cutoff are retained.
  double cutoff = std::numeric_limits<double>::infinity();
  std::size_t max_atoms = 200'000;
  double drop_eps = 1e-16;
  /// Height at which all convergence and tail accounting is done.
  double y_ref = 1.0;
  /// Frequencies closer than this are one atom (smaller-|u| representative kept).
  double merge_eps = 1e-9;
};

struct SeriesAtom {
  double u = 0.0;
  cplx c;
};

/// Truncated exponential sum Σ c_u e^{−2πiuw} over a finite frequency set.
///
/// `tail_bound` bounds Σ|c_u|e^{2πu·y_ref} over everything discarded so far
/// (cutoff, drop_eps, truncated expansions). For u <= 0 this weight only
/// shrinks higher in the upper half-plane, so the bound holds for all
/// Im w >= y_ref.
class ExpSeries {
 public:
  ExpSeries() = default;
  ExpSeries(std::vector<SeriesAtom> atoms, SeriesParams params, double tail_bound = 0.0);

  /// The series 1 (single atom at u = 0).
  static ExpSeries one(SeriesParams params);

  std::span<const SeriesAtom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const SeriesParams& params() const noexcept { return params_; }
  double cutoff() const noexcept { return params_.cutoff; }
  double tail_bound() const noexcept { return tail_bound_; }
  /// Frequency pairs that were distinct but fell within merge_eps.
  std::size_t merge_events() const noexcept { return merge_events_; }

  /// Coefficient at u (zero if absent), matched within merge_eps.
  cplx coefficient(double u) const;
  /// Σ|c_u| e^{2πu·y}.
  double mass(double y) const;
  double mass() const { return mass(params_.y_ref); }

 private:
  friend ExpSeries series_mul(const ExpSeries&, const ExpSeries&);
  std::vector<SeriesAtom> atoms_;  // sorted by u ascending
  SeriesParams params_;
  double tail_bound_ = 0.0;
  std::size_t merge_events_ = 0;
};

ExpSeries series_mul(const ExpSeries& f, const ExpSeries& g);

/// exp(f) for a series whose nonconstant frequencies are all negative.
ExpSeries series_exp(const ExpSeries& f);

struct SeriesLog {
  cplx scalar;       ///< principal log of the constant atom
  ExpSeries series;  ///< log(1 + q) where f = c_0(1 + q)
};

/// log(f); requires a nonzero constant atom, negative other frequencies and
/// Σ|q_u|e^{2πu·y_ref} < 1.
SeriesLog series_log(const ExpSeries& f);

/// exp(scalar + series), i.e. the inverse of series_log.
ExpSeries series_exp(const SeriesLog& log);

struct SeriesValue {
  cplx value;
  double error_bound = 0.0;
};

/// Σ c_u e^{−2πiuw}; requires Im w >= y_ref.
SeriesValue eval_series(const ExpSeries& f, ComplexPoint w);

/// Elements of {0} ∪ G ∪ (G+G) ∪ … with magnitude <= cutoff, as nonnegative
/// magnitudes in ascending order (generators are given as magnitudes > 0).
struct Semigroup {
  std::vector<double> elements;
  std::size_t merge_events = 0;
};
Semigroup generate_semigroup(std::span<const double> generators, double cutoff, double merge_eps,
                             std::size_t max_atoms);

}  // namespace fqlab
