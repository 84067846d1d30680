#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fqlab/error.hpp"
#include "fqlab/expseries.hpp"
#include "property_suite.hpp"

using namespace fqlab;
constexpr double pi = std::numbers::pi;

namespace {

SeriesParams capped(double cutoff) {
  SeriesParams p;
  p.cutoff = cutoff;
  return p;
}

}  // namespace

TEST_CASE("series_mul") {
  const auto one = ExpSeries::one({});
  const auto sq = series_mul(one, one);
  REQUIRE(sq.size() == 1);
  CHECK(sq.coefficient(0.0) == cplx(1.0, 0.0));

  const ExpSeries f({{0.0, 1.0}, {-1.0, 1.0}}, {});
  const auto f2 = series_mul(f, f);
  CHECK(f2.size() == 3);
  CHECK(f2.coefficient(-1.0) == cplx(2.0, 0.0));
  CHECK(f2.coefficient(-2.0) == cplx(1.0, 0.0));

  const ExpSeries plus({{0.0, 1.0}, {-1.0, 1.0}}, {});
  const ExpSeries minus({{0.0, 1.0}, {-1.0, -1.0}}, {});
  const auto d = series_mul(plus, minus);
  CHECK(d.coefficient(-1.0) == cplx(0.0, 0.0));
  CHECK(d.coefficient(-2.0) == cplx(-1.0, 0.0));

  SeriesParams other;
  other.y_ref = 2.0;
  CHECK_THROWS_AS(series_mul(f, ExpSeries::one(other)), Error);
}

TEST_CASE("construction merges, drops and budgets") {
  const ExpSeries f({{-1.0, 1.0}, {-1.0 - 1e-12, 2.0}, {-2.0, 1e-20}}, {});
  CHECK(f.size() == 1);
  CHECK(f.coefficient(-1.0) == cplx(3.0, 0.0));
  CHECK(f.merge_events() == 1);
  CHECK(f.tail_bound() > 0.0);

  const ExpSeries g({{-1.0, 1.0}, {-5.0, 1.0}}, capped(3.0));
  CHECK(g.size() == 1);
  CHECK(g.tail_bound() == doctest::Approx(std::exp(-10 * pi)));

  SeriesParams tiny;
  tiny.max_atoms = 2;
  CHECK_THROWS_AS(ExpSeries({{-1.0, 1.0}, {-2.0, 1.0}, {-3.0, 1.0}}, tiny), Error);
}

TEST_CASE("series_exp") {
  const auto e0 = series_exp(ExpSeries({}, {}));
  REQUIRE(e0.size() == 1);
  CHECK(e0.coefficient(0.0) == cplx(1.0, 0.0));

  const cplx a(0.3, -0.2);
  const auto ea = series_exp(ExpSeries({{-1.0, a}}, capped(12.0)));
  cplx term = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= a / static_cast<double>(k);
    CHECK(std::abs(ea.coefficient(-k) - term) < 1e-15);
  }

  const auto e12 = series_exp(ExpSeries({{-1.0, 1.0}, {-2.0, 1.0}}, capped(6.0)));
  CHECK(std::abs(e12.coefficient(-2.0) - 1.5) < 1e-15);

  const auto ec = series_exp(ExpSeries({{0.0, cplx(0.0, pi)}, {-1.0, 1.0}}, capped(4.0)));
  CHECK(std::abs(ec.coefficient(0.0) + 1.0) < 1e-15);

  try {
    series_exp(ExpSeries({{0.5, 1.0}}, {}));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonNegativeFrequency);
  }
}

TEST_CASE("series_log") {
  const auto l1 = series_log(ExpSeries::one({}));
  CHECK(l1.scalar == cplx(0.0, 0.0));
  CHECK(l1.series.size() == 0);

  const cplx t(0.4, 0.1);
  const auto lm = series_log(ExpSeries({{0.0, 1.0}, {-1.0, t}}, capped(10.0)));
  cplx pw = 1.0;
  for (int k = 1; k <= 10; ++k) {
    pw *= t;
    const cplx want = (k % 2 ? 1.0 : -1.0) * pw / static_cast<double>(k);
    CHECK(std::abs(lm.series.coefficient(-k) - want) < 1e-15);
  }

  // log(1 − x³) − log(1 − x) at x³: −1 − (−1/3)
  const auto l3 = series_log(ExpSeries({{0.0, 1.0}, {-3.0, -1.0}}, capped(9.0)));
  const auto l1m = series_log(ExpSeries({{0.0, 1.0}, {-1.0, -1.0}}, capped(9.0)));
  CHECK((l3.series.coefficient(-3.0) - l1m.series.coefficient(-3.0)).real() ==
        doctest::Approx(-2.0 / 3.0).epsilon(1e-15));

  const auto ls = series_log(ExpSeries({{0.0, cplx(0.0, 2.0)}, {-1.0, 0.1}}, capped(4.0)));
  CHECK(std::abs(ls.scalar - std::log(cplx(0.0, 2.0))) < 1e-15);

  try {
    series_log(ExpSeries({{-1.0, 1.0}}, {}));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::VanishingConstant);
  }
  try {
    // |q| at y_ref = 1 is 1e3·e^{−2π} > 1
    series_log(ExpSeries({{0.0, 1.0}, {-1.0, 1e3}}, capped(4.0)));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("eval_series") {
  const auto one = ExpSeries::one({});
  CHECK(eval_series(one, {0.3, 5.0}).value == cplx(1.0, 0.0));

  const int K = 6;
  std::vector<SeriesAtom> geo;
  for (int k = 0; k <= K; ++k) geo.push_back({-static_cast<double>(k), 1.0});
  const auto g = eval_series(ExpSeries(geo, {}), {0.0, 1.0});
  CHECK(std::abs(g.value - 1.0 / (1.0 - std::exp(-2 * pi))) <= 2.0 * std::exp(-2 * pi * (K + 1)));

  // Mercator series of log(1 − e^{2πiw}) at w = i, truncated at |u| <= 6
  const auto lg = series_log(ExpSeries({{0.0, 1.0}, {-1.0, -1.0}}, capped(6.0)));
  const auto v = eval_series(lg.series, {0.0, 1.0});
  CHECK(v.error_bound > 0.0);
  CHECK(std::abs(v.value - std::log(1.0 - std::exp(-2 * pi))) <= v.error_bound);

  try {
    eval_series(one, {0.0, 0.5});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BelowReferenceHeight);
  }
}

TEST_CASE("semigroup generation") {
  const double gens[] = {1.0, 2.5};
  const auto sg = generate_semigroup(gens, 6.0, 1e-9, 1000);
  const std::vector<double> want{0.0, 1.0, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  REQUIRE(sg.elements.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(sg.elements[i] == doctest::Approx(want[i]));
  CHECK_THROWS_AS(generate_semigroup(gens, 100.0, 1e-9, 10), Error);
}

TEST_CASE("property: exp(log f) == f") {
  const auto s = props::round_trip(200, 11);
  CHECK(s.failures == 0);
}

TEST_CASE("property: associativity and evaluation homomorphism") {
  const auto s = props::mul_laws(100, 12);
  CHECK(s.failures == 0);
}

TEST_CASE("property: exp support lies in the generated semigroup") {
  const auto s = props::semigroup_containment(100, 13);
  CHECK(s.failures == 0);
}
