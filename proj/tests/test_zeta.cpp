#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heights/enumerate.hpp"
#include "heights/error.hpp"
#include "heights/zeta.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace heights;
using namespace heights::testing;

namespace {

VarietySpec p1() { return VarietySpec::projective_space(1); }

}  // namespace

TEST_CASE("partial sums on P^1") {
  auto z1 = zeta_partial_sum(p1(), 4.0, 1);
  CHECK(z1.value.real() == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(z1.value.imag() == 0.0);
  CHECK(z1.terms_used == 4);
  auto z2 = zeta_partial_sum(p1(), 4.0, 2);
  CHECK(z2.value.real() == doctest::Approx(4.25).epsilon(1e-15));
  CHECK(z2.terms_used == 8);
}

TEST_CASE("empty variety gives the empty sum") {
  // x0^2 + x1^2 + x2^2 has no rational points.
  auto spec = variety(2, {poly(3, {{1, {2, 0, 0}}, {1, {0, 2, 0}}, {1, {0, 0, 2}}})});
  auto z = zeta_partial_sum(spec, std::complex<double>(0.3, 7.0), 20);
  CHECK(z.value == std::complex<double>(0.0, 0.0));
  CHECK(z.terms_used == 0);
  CHECK_THROWS_AS(zeta_partial_sum(spec, 1.0, 0), InvalidArgument);
}

TEST_CASE("s = 0 reproduces the count exactly") {
  for (const auto& spec : {p1(), VarietySpec::projective_space(2), conic()}) {
    for (std::int64_t B : {1, 7, 40}) {
      auto z = zeta_partial_sum(spec, 0.0, B);
      const std::int64_t bs[] = {B};
      const BigInt n = count_series(spec, bs).entries()[0].second;
      CHECK(z.terms_used == n);
      CHECK(z.value.real() == n.get_d());
      CHECK(z.value.imag() == 0.0);
    }
  }
}

TEST_CASE("complex s agrees with a direct sum over points") {
  const std::complex<double> s(1.3, -2.2);
  const std::int64_t B = 25;
  std::complex<double> direct = 0;
  for_each_point(conic(), B, [&](std::span<const std::int64_t>, std::int64_t h) {
    direct += std::pow(static_cast<double>(h), -s);
  });
  auto z = zeta_partial_sum(conic(), s, B);
  CHECK(std::abs(z.value - direct) < 1e-12 * std::abs(direct));
}

TEST_CASE("monotone in B for real s") {
  const std::int64_t bounds[] = {1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
  const std::complex<double> grid[] = {-1.0, 0.5, 2.0, 3.5};
  for (const auto& spec : {p1(), conic(), quadric()}) {
    auto sums = zeta_partial_sums(spec, grid, bounds);
    REQUIRE(sums.size() == std::size(grid) * std::size(bounds));
    for (std::size_t i = 1; i < sums.size(); ++i) {
      if (sums[i].s != sums[i - 1].s) continue;
      CHECK(sums[i].value.real() >= sums[i - 1].value.real());
    }
  }
}

TEST_CASE("convergence split at the abscissa") {
  const std::int64_t bounds[] = {10, 100, 1000, 10000, 100000, 1000000};
  const std::complex<double> grid[] = {2.5, 1.5};
  auto sums = zeta_partial_sums(p1(), grid, bounds);
  std::vector<double> above, below;
  for (const auto& z : sums) (z.s.real() == 2.5 ? above : below).push_back(z.value.real());
  // Above the abscissa the decade increments decay like B^{-1/2}.
  for (std::size_t i = 2; i < above.size(); ++i) CHECK(above[i] - above[i - 1] < above[i - 1] - above[i - 2]);
  CHECK(above[4] - above[3] < 1e-2 * above[4]);
  CHECK(above[5] - above[4] < 1e-2 * above[5]);
  for (std::size_t i = 2; i < below.size(); ++i) CHECK(below[i] - below[i - 1] > below[i - 1] - below[i - 2]);
}

TEST_CASE("abscissa estimates") {
  SUBCASE("P^1") {
    auto series = count_series(p1(), geometric_bounds(10, 1e4, 6));
    auto est = abscissa_estimate(series);
    CHECK(est.slope >= 1.95);
    CHECK(est.slope <= 2.05);
    CHECK(est.ratio > 1.9);
  }
  SUBCASE("conic") {
    auto series = count_series(conic(), geometric_bounds(10, 5000, 6));
    auto est = abscissa_estimate(series);
    CHECK(est.slope >= 0.9);
    CHECK(est.slope <= 1.2);
  }
  SUBCASE("constant") {
    CountSeries flat({{1, 5}, {10, 5}, {100, 5}, {1000, 5}});
    CHECK(abscissa_estimate(flat).slope == 0.0);
  }
  SUBCASE("too little data") {
    CHECK_THROWS_AS(abscissa_estimate(CountSeries({{1, 0}, {2, 0}, {3, 4}, {4, 4}})), InsufficientData);
    CHECK_THROWS_AS(abscissa_estimate(CountSeries()), InsufficientData);
  }
}

TEST_CASE("fit on exact power law") {
  std::vector<std::pair<std::int64_t, BigInt>> e;
  for (auto b : geometric_bounds(10, 1e5, 4)) e.emplace_back(b, BigInt(static_cast<long>(b * b)));
  auto fit = fit_asymptotic(CountSeries(e), kDefaultLogPowers);
  CHECK(fit.t == 1);
  CHECK(fit.a == doctest::Approx(2.0).epsilon(0.005));
  CHECK(fit.c == doctest::Approx(1.0).epsilon(0.01));
  CHECK(fit.residual < 1e-9);
}

TEST_CASE("fit recovers planted parameters") {
  struct Planted {
    double c, a;
    int t;
  };
  for (auto p : {Planted{3.7, 1.5, 3}, Planted{0.25, 2.0, 1}, Planted{12.0, 0.75, 2}, Planted{1.0, 1.0, 4}}) {
    std::vector<std::pair<double, double>> samples;
    for (auto b : geometric_bounds(10, 1e8, 3)) {
      const double x = static_cast<double>(b);
      samples.emplace_back(x, p.c * std::pow(x, p.a) * std::pow(std::log(x), p.t - 1));
    }
    auto fit = fit_asymptotic(samples, kDefaultLogPowers);
    CHECK(fit.t == p.t);
    CHECK(std::abs(fit.a - p.a) < 1e-6);
    CHECK(fit.c == doctest::Approx(p.c).epsilon(1e-6));
  }
}

TEST_CASE("fit on divisor sums picks a double pole") {
  auto series = divisor_series(geometric_bounds(10, 1e6, 4));
  auto fit = fit_asymptotic(series, kDefaultLogPowers);
  CHECK(fit.t == 2);
  CHECK(fit.a == doctest::Approx(1.0).epsilon(0.02));
  CHECK(fit.c == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("fit on P^1 counts") {
  auto series = count_series(p1(), geometric_bounds(10, 1e4, 6));
  auto fit = fit_asymptotic(series, kDefaultLogPowers);
  CHECK(fit.t == 1);
  CHECK(fit.a == doctest::Approx(2.0).epsilon(0.02));
  CHECK(fit.c == doctest::Approx(12.0 / (std::numbers::pi * std::numbers::pi)).epsilon(0.05));
}

TEST_CASE("fit preconditions and output") {
  std::vector<std::pair<double, double>> short_run;
  for (int i = 1; i <= 7; ++i) short_run.emplace_back(std::pow(10.0, i), std::pow(10.0, i));
  CHECK_THROWS_AS(fit_asymptotic(short_run, kDefaultLogPowers), InsufficientData);
  std::vector<std::pair<double, double>> narrow;
  for (int i = 10; i < 30; ++i) narrow.emplace_back(i, i);
  CHECK_THROWS_AS(fit_asymptotic(narrow, kDefaultLogPowers), InsufficientData);

  AsymptoticFit f{1.5, 2.0, 1, 0.001};
  auto j = nlohmann::json::parse(f.to_json());
  CHECK(j["c"].get<double>() == 1.5);
  CHECK(j["a"].get<double>() == 2.0);
  CHECK(j["t"].get<int>() == 1);
  CHECK(j["residual"].get<double>() == 0.001);
}
