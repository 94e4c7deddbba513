#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "heights/quadrature.hpp"

using namespace heights;

TEST_CASE("polynomials and smooth integrands") {
  auto r = quad::integrate([](double x) { return x * x * x - 2 * x + 1; }, -1.0, 2.0, 1e-12);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(3.75).epsilon(1e-14));
  auto s = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12);
  CHECK(std::abs(s.value - 2.0) < 1e-12);
  auto rev = quad::integrate([](double x) { return std::exp(x); }, 1.0, 0.0, 1e-12);
  CHECK(std::abs(rev.value + (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("endpoint singularities") {
  for (double a : {-0.5, -0.25, 0.5}) {
    auto r = quad::integrate([a](double x) { return std::pow(x, a); }, 0.0, 1.0, 1e-10);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 1.0 / (a + 1.0)) < 1e-9);
  }
}

TEST_CASE("infinite intervals") {
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto g = quad::integrate([](double x) { return std::exp(-x * x); }, -inf, inf, 1e-12);
  CHECK(std::abs(g.value - std::sqrt(std::numbers::pi)) < 1e-11);
  auto c = quad::integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, inf, 1e-12);
  CHECK(std::abs(c.value - std::numbers::pi / 2) < 1e-11);
  auto l = quad::integrate([](double x) { return std::exp(x); }, -inf, 0.0, 1e-12);
  CHECK(std::abs(l.value - 1.0) < 1e-11);
}

TEST_CASE("complex integrands") {
  const std::complex<double> s(0.5, 3.0);
  // int_0^1 x^{s-1} dx = 1/s
  auto r = quad::integrate_complex([&](double x) { return std::exp((s - 1.0) * std::log(x)); }, 0.0, 1.0, 1e-10);
  CHECK(std::abs(r.value - 1.0 / s) < 1e-9);
}

TEST_CASE("nonconvergence is reported") {
  auto r = quad::integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10);
  CHECK_FALSE(r.converged);
}

TEST_CASE("iterated integrals") {
  auto r = quad::integrate_2d([](double x, double y) { return std::exp(-x - 2 * y); }, 0.0, 1.0, 0.0, 1.0, 1e-11);
  CHECK(r.converged);
  CHECK(std::abs(r.value - (1 - std::exp(-1.0)) * (1 - std::exp(-2.0)) / 2) < 1e-11);
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto g = quad::integrate_2d([](double x, double y) { return std::exp(-x * x - y * y); }, -inf, inf, -inf, inf, 1e-10);
  CHECK(std::abs(g.value - std::numbers::pi) < 1e-9);
  const std::complex<double> s(1.5, 1.0);
  // int int_{[0,1]^2} (xy)^{s-1} = 1/s^2
  auto c = quad::integrate_2d_complex(
      [&](double x, double y) { return std::exp((s - 1.0) * std::log(x * y)); }, 0.0, 1.0, 0.0, 1.0, 1e-10);
  CHECK(std::abs(c.value - 1.0 / (s * s)) < 1e-9);
}
