#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "fqlab/exppoly.hpp"
#include "fqlab/rootfind.hpp"
#include "fqlab/spectral.hpp"

namespace fqlab {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double budget = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
};

/// Append-only list of named checks; pass ⇔ residual <= budget.
class VerificationReport {
 public:
  void add(std::string name, double residual, double budget, double runtime_ms = 0.0);
  void set_param(const std::string& key, const std::string& value) { params_[key] = value; }

  /// Checks ordered by name.
  std::vector<CheckResult> sorted_checks() const;
  const std::vector<CheckResult>& checks() const noexcept { return checks_; }
  const std::map<std::string, std::string>& params() const noexcept { return params_; }
  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;

 private:
  std::vector<CheckResult> checks_;
  std::map<std::string, std::string> params_;
};

/// f(x) = exp(−π(x−t)²/σ²)·e^{2πi s₀x}; under f̂(s) = ∫e^{−2πisx}f(x)dx its
/// transform is σ·exp(−πσ²(s−s₀)²)·e^{−2πit(s−s₀)}.
struct GaussianTest {
  double center = 0.0;
  double width = 1.0;
  double frequency = 0.0;

  std::complex<double> value(double x) const;
  std::complex<double> transform(double s) const;
};

struct ParsevalResult {
  std::complex<double> lhs;  ///< Σ_λ f(λ)
  std::complex<double> rhs;  ///< a_0 f̂(0) + Σ_s a_s f̂(s)
  double residual = 0.0;
  double budget = 0.0;
  bool pass() const { return residual <= budget; }
};

/// Relative accuracy assumed for computed spectrum atoms in the Parseval budget.
inline constexpr double kAtomAccuracy = 1e-9;

/// Σ_λ f(λ) against a_0 f̂(0) + Σ_s a_s f̂(s). Atoms of `extension` beyond
/// mu.s_max (if given) join the right side and move the spectral tail out to
/// extension->s_max; without it atoms near mu.s_max hide in the tail.
ParsevalResult parseval_check(const ZeroSet& zs, const AtomicMeasure& mu, const GaussianTest& test,
                              const AtomicMeasure* extension = nullptr);

struct DensityResult {
  double c_emp = 0.0;
  double c_left = 0.0;
  double c_right = 0.0;
  double bound = 0.0;
  bool bounded = false;
  bool stable = false;
  bool pass() const { return bounded && stable; }
};

/// Empirical constant of μ(a,b) <= C(1+b−a) over dyadic subwindows, checked
/// against 2·(a_0 + max unit-cell excess) and for stability across halves.
/// a0 <= 0 uses the empirical density.
DensityResult density_check(const ZeroSet& zs, double a0 = 0.0);

inline constexpr int kMaxDiscreteSubsets = 64;

/// Greedy split into uniformly discrete subsets; throws past kMaxDiscreteSubsets.
Decomposition discreteness_decompose(const ZeroSet& zs);

struct GrowthReport {
  std::vector<double> heights;        ///< y grid for the fitted slopes
  double slope_upper = 0.0;           ///< least-squares slope of log sup|p| on Im w = +y
  double slope_lower = 0.0;
  double type_upper = 0.0;            ///< asymptotic slope from two far lines
  double type_lower = 0.0;
  double expected_upper = 0.0;        ///< max(−γ_min, 0)
  double expected_lower = 0.0;        ///< max(γ_max, 0)
  double triangle_ratio = 0.0;        ///< max |p| / (Σ|b|·e^{σ|y|}); must be <= 1
  double upper_normalized_ratio = 0.0;  ///< max |p·e^{−iγ_min w}| / Σ|b| on Im w = +y
  GrowthFit spectrum_fit;
};

GrowthReport growth_check(const ExpPolynomial& p, const AtomicMeasure& mu);

/// Report entries for a growth report, named growth_*.
void add_growth_entries(VerificationReport& report, const GrowthReport& g);

/// Max |a_{−s} − conj(a_s)| relative to the largest atom.
double hermitian_asymmetry(const AtomicMeasure& mu);

/// Half-plane expansion rebuilt from the atoms of μ̂ for the translated set Λ − shift.
HalfPlaneExpansion expansion_from_spectrum(const AtomicMeasure& mu, Side side, double shift);

struct BatteryOptions {
  std::vector<double> widths{1.0, 3.0};
  /// σ = 1/2 tests tiled every unit across the window interior.
  bool tiled = true;
  /// Narrow tests sized so every atom with |s| <= s_max/2 carries weight >= e^{−8}σ.
  bool narrow = true;
  /// One test modulated onto each atom, against a reference spectrum to 2·s_max.
  bool modulated = true;
  std::vector<std::complex<double>> lemma_points{{0.0, 1.0}, {0.0, 2.0}};
};

VerificationReport run_battery(const ExpPolynomial& p, const ZeroSet& zs, const AtomicMeasure& mu,
                               const BatteryOptions& opts = {});

}  // namespace fqlab
