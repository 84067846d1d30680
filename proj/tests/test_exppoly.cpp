#include <doctest.h>

#include <cmath>

#include "fqlab/error.hpp"
#include "fqlab/exppoly.hpp"
#include "oracles.hpp"

using namespace fqlab;
using oracle::pi;

TEST_CASE("eval matches closed forms") {
  CHECK(std::abs(oracle::sin_pi().eval(0.5) - cplx(1.0, 0.0)) < 1e-15);
  const ExpPolynomial one({{1.0, 0.0}});
  CHECK(one.eval({3.7, -2.0}) == cplx(1.0, 0.0));
  CHECK(std::abs(oracle::three_term().eval(2 * pi / 3)) < 1e-15);

  const auto p = oracle::three_term();
  for (double x : {-3.0, 0.1, 7.5}) {
    for (double y : {-2.0, 0.0, 1.5}) {
      const cplx w(x, y);
      CHECK(std::abs(p.eval({x, y}) - (2.0 * std::cos(w) + 1.0)) < 1e-13 * std::abs(2.0 * std::cos(w) + 1.0) + 1e-14);
    }
  }
}

TEST_CASE("eval_with_bound covers the true error and rejects overflow") {
  const auto p = oracle::golden_two_sine();
  const auto r = p.eval_with_bound({0.3, 0.2});
  const auto ext = p.eval_extended(0.3L);
  CHECK(r.error_bound > 0.0);
  const auto rx = p.eval_with_bound(0.3);
  CHECK(std::abs(rx.value - cplx(double(ext.real()), double(ext.imag()))) <= rx.error_bound + 1e-300);

  const ExpPolynomial fast({{1.0, 100.0}, {1.0, -100.0}});
  CHECK_NOTHROW(fast.eval({0.0, 7.0}));
  try {
    fast.eval({0.0, 8.0});
    FAIL("expected out of range");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRange);
  }
}

TEST_CASE("construction merges, sorts and validates") {
  const ExpPolynomial p({{1.0, 2.0}, {0.5, -1.0}, {0.5, 2.0}, {0.0, 3.0}});
  REQUIRE(p.size() == 2);
  CHECK(p.terms()[0].gamma == -1.0);
  CHECK(p.terms()[1].amplitude == cplx(1.5, 0.0));
  CHECK(p.gamma_min() == -1.0);
  CHECK(p.gamma_max() == 2.0);

  CHECK_THROWS_AS(ExpPolynomial({{1.0, std::nan("")}}), Error);
  CHECK_THROWS_AS(ExpPolynomial({{cplx(1.0, 1.0), 1.0}, {1.0, -1.0}}, true), Error);
  CHECK_THROWS_AS(ExpPolynomial().gamma_min(), Error);
  CHECK(oracle::sin_pi().has_hermitian_symmetry());
}

TEST_CASE("derivative is term-wise") {
  const ExpPolynomial one({{1.0, 0.0}});
  CHECK(derivative(one).empty());

  const auto d = derivative(oracle::sin_pi());
  REQUIRE(d.size() == 2);
  CHECK(std::abs(d.terms()[0].amplitude - cplx(pi / 2, 0.0)) < 1e-15);
  CHECK(std::abs(d.terms()[1].amplitude - cplx(pi / 2, 0.0)) < 1e-15);

  const auto d3 = derivative(oracle::three_term());
  REQUIRE(d3.size() == 2);
  CHECK(d3.terms()[0].amplitude == cplx(0.0, -1.0));
  CHECK(d3.terms()[0].gamma == -1.0);
  CHECK(d3.terms()[1].amplitude == cplx(0.0, 1.0));
}

TEST_CASE("derivative agrees with central differences") {
  const auto p = oracle::golden_two_sine();
  const auto d = derivative(p);
  const double h = 1e-5;
  for (double x = -3.0; x < 3.0; x += 0.37) {
    const cplx fd = (p.eval(x + h) - p.eval(x - h)) / (2 * h);
    CHECK(std::abs(fd - d.eval(x)) < 1e-6 * (1.0 + std::abs(d.eval(x))));
  }
}

TEST_CASE("translate, reflect and scale") {
  const auto p = oracle::three_term();
  const auto t = translate(p, 0.7);
  const auto r = reflect(p);
  const auto s = scale(p, cplx(0.0, 2.0));
  for (double x : {-1.0, 0.25, 2.0}) {
    CHECK(std::abs(t.eval(x) - p.eval(x + 0.7)) < 1e-14);
    CHECK(std::abs(r.eval(x) - p.eval(-x)) < 1e-14);
    CHECK(std::abs(s.eval(x) - cplx(0.0, 2.0) * p.eval(x)) < 1e-14);
  }
  CHECK_THROWS_AS(scale(p, 0.0), Error);
}

TEST_CASE("is_real_on_line") {
  CHECK(is_real_on_line(oracle::sin_pi(), 64).real);
  CHECK(is_real_on_line(oracle::three_term(), 64).real);
  const auto single = is_real_on_line(ExpPolynomial({{1.0, 1.0}}), 64);
  CHECK_FALSE(single.real);
  CHECK(single.max_imag > 0.5);
  CHECK(is_real_on_line(ExpPolynomial(), 64).inconclusive);
  CHECK_THROWS_AS(is_real_on_line(oracle::sin_pi(), 8), Error);
}
