#include <doctest.h>

#include <cmath>

#include "fqlab/error.hpp"
#include "fqlab/rootfind.hpp"
#include "oracles.hpp"

using namespace fqlab;
using oracle::pi;

namespace {

double max_mismatch(const std::vector<double>& got, const std::vector<double>& want) {
  if (got.size() != want.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  return worst;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("sin(pi x) zeros are the integers") {
  const auto zs = find_real_zeros(oracle::sin_pi(), {-5.5, 5.5});
  CHECK(zs.size() == 11);
  CHECK(max_mismatch(zs.zeros, oracle::integers_in(-5.5, 5.5)) < 1e-12);
  CHECK(zs.min_gap == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zs.certified_strip_height == 0.0);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    CHECK(zs.value_magnitudes[i] <= 1e-12);
    CHECK(zs.derivative_magnitudes[i] == doctest::Approx(pi).epsilon(1e-10));
  }
}

TEST_CASE("three-term zeros") {
  const auto zs = find_real_zeros(oracle::three_term(), {0.0, 4 * pi});
  CHECK(max_mismatch(zs.zeros, {2 * pi / 3, 4 * pi / 3, 2 * pi / 3 + 2 * pi, 4 * pi / 3 + 2 * pi}) < 1e-10);
}

TEST_CASE("golden two-sine zeros match both progressions") {
  const auto zs = find_real_zeros(oracle::golden_two_sine(), {0.0, 10.0});
  const auto want = oracle::golden_zeros(0.0, 10.0);
  CHECK(zs.size() == want.size());
  CHECK(max_mismatch(zs.zeros, want) < 1e-9);
}

TEST_CASE("refined zeros are stable") {
  const auto p = oracle::golden_two_sine();
  const auto a = find_real_zeros(p, {0.05, 20.0});
  const auto b = find_real_zeros(p, {0.04, 20.01});
  REQUIRE(a.size() == b.size());
  CHECK(max_mismatch(a.zeros, b.zeros) < 1e-13);
  for (double v : a.value_magnitudes) CHECK(v <= 1e-12 * p.amplitude_sum());
}

TEST_CASE("tangency is reported") {
  try {
    find_real_zeros(oracle::tangency(), {-3.0, 3.0});
    FAIL("expected tangency");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Tangency);
    CHECK(std::string(e.what()).find("tangency suspected") != std::string::npos);
  }
}

TEST_CASE("close pairs are found, not skipped") {
  // cos x − cos δ vanishes at ±δ, well inside one grid cell
  const double delta = 1e-3;
  const ExpPolynomial p({{0.5, -1.0}, {-std::cos(delta), 0.0}, {0.5, 1.0}}, true);
  const auto zs = find_real_zeros(p, {-1.0, 1.0});
  REQUIRE(zs.size() == 2);
  CHECK(zs.zeros[0] == doctest::Approx(-delta).epsilon(1e-8));
  CHECK(zs.zeros[1] == doctest::Approx(delta).epsilon(1e-8));
}

TEST_CASE("non-real polynomials are rejected by the bracketing path") {
  CHECK(kind_of([] { find_real_zeros(ExpPolynomial({{1.0, 1.0}, {2.0, 0.0}}), {0.0, 1.0}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([] { find_real_zeros(oracle::sin_pi(), {1.0, 1.0}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("argument principle counts") {
  CHECK(count_zeros_rectangle(oracle::sin_pi(), {-5.5, 5.5, 1.0}).count == 11);
  CHECK(count_zeros_rectangle(ExpPolynomial({{1.0, 1.0}}), {0.0, 1.0, 1.0}).count == 0);
  const auto c = count_zeros_rectangle(oracle::three_term(), {0.0, 2 * pi, 2.0});
  CHECK(c.count == 2);
  CHECK(c.residual < 0.1);
  // 2cos 2x + 4 has 2 zeros per period at Im = ±0.658
  CHECK(count_zeros_rectangle(oracle::no_real_zeros(), {0.0, 2 * pi, 1.0}).count == 4);
  CHECK(count_zeros_rectangle(oracle::no_real_zeros(), {0.0, 2 * pi, 0.5}).count == 0);
}

TEST_CASE("contour through a zero is inflated") {
  // Edges at x = ±5 sit on zeros of sin(pi x).
  const auto c = count_zeros_rectangle(oracle::sin_pi(), {-5.0, 5.0, 1.0});
  CHECK(c.inflations > 0);
  CHECK(c.count == static_cast<long>(std::floor(c.rect.b) - std::ceil(c.rect.a) + 1));
}

TEST_CASE("certification") {
  const auto zs = certify_real_simple(oracle::sin_pi(), {-5.5, 5.5}, 1.0);
  CHECK(zs.size() == 11);
  CHECK(zs.certified_strip_height == 1.0);

  const auto z3 = certify_real_simple(oracle::three_term(), {0.0, 2 * pi}, 2.0);
  CHECK(z3.size() == 2);

  try {
    certify_real_simple(oracle::no_real_zeros(), {0.0, 2 * pi}, 1.0);
    FAIL("expected hidden zeros");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HiddenNonRealZeros);
    CHECK(std::string(e.what()).find("hidden non-real zeros") != std::string::npos);
  }
}

TEST_CASE("counting statistics") {
  const auto zs = find_real_zeros(oracle::sin_pi(), {-100.0, 100.0});
  const auto st = counting_stats(zs, 1.0);
  CHECK(st.density == doctest::Approx(199.0 / 200.0));
  CHECK(st.c_emp <= 1.0);
  CHECK(st.m_ud == 1);

  const auto z3 = find_real_zeros(oracle::three_term(), {0.0, 200 * pi});
  CHECK(std::abs(counting_stats(z3).density - 1 / pi) <= 0.01 / pi);

  const auto zg = find_real_zeros(oracle::golden_two_sine(), {0.0, 100.0});
  CHECK(std::abs(counting_stats(zg).density - 2 * oracle::golden) <= 0.01 * 2 * oracle::golden);
  CHECK(counting_stats(zg).m_ud <= 2);
}

TEST_CASE("greedy decomposition") {
  std::vector<double> pts;
  for (int k = 1; k <= 30; ++k) {
    pts.push_back(k);
    pts.push_back(k + std::exp(-k));
  }
  std::sort(pts.begin(), pts.end());
  const auto d = greedy_decompose(pts, 0.5);
  CHECK(d.m_ud == 2);
  REQUIRE(d.min_gaps.size() == 2);
  CHECK(d.min_gaps[0] >= 0.5);
}

TEST_CASE("origin shift") {
  const auto zs = find_real_zeros(oracle::sin_pi(), {-3.5, 3.5});
  CHECK(origin_shift(zs) == doctest::Approx(0.5));
  const auto moved = shifted(zs, 0.5);
  CHECK(moved.zeros.front() == doctest::Approx(-3.5));
  CHECK(moved.window.a == doctest::Approx(-4.0));
  const auto z3 = find_real_zeros(oracle::three_term(), {-10.0, 10.0});
  CHECK(origin_shift(z3) == 0.0);
}
