#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "heights/arith.hpp"
#include "heights/error.hpp"

using namespace heights;

namespace {

Rational random_rational(std::mt19937_64& rng, std::uint64_t max) {
  std::uniform_int_distribution<std::uint64_t> d(1, max);
  BigInt num(std::to_string(d(rng)));
  if (rng() & 1) num = -num;
  return Rational(num, BigInt(std::to_string(d(rng))));
}

// Trial-division oracle, independent of the sieve and of Pollard rho.
int mobius_oracle(long n) {
  int mu = 1;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return n > 1 ? -mu : mu;
}

}  // namespace

TEST_CASE("rationals are normalized at construction") {
  CHECK(Rational(BigInt(6), BigInt(-4)) == Rational(BigInt(-3), BigInt(2)));
  CHECK(Rational(BigInt(0), BigInt(-7)).den() == 1);
  CHECK(Rational::parse("10/4").to_string() == "5/2");
  CHECK_THROWS_AS(Rational::parse("x/2"), InvalidArgument);
  CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), InvalidArgument);
}

TEST_CASE("padic_abs examples") {
  CHECK(padic_abs(Rational(24), 2) == Rational(BigInt(1), BigInt(8)));
  CHECK(padic_abs(Rational(BigInt(5), BigInt(6)), 3) == Rational(3));
  CHECK(padic_abs(Rational(0), 7) == Rational(0));
  CHECK_THROWS_AS(padic_abs(Rational(5), 6), InvalidArgument);
  CHECK_THROWS_AS(Place::padic(1), InvalidArgument);
}

TEST_CASE("padic_abs is multiplicative and ultrametric") {
  std::mt19937_64 rng(7);
  const std::int64_t primes[] = {2, 3, 5, 7, 11};
  for (int i = 0; i < 1000; ++i) {
    const Rational a = random_rational(rng, 5000);
    const Rational b = random_rational(rng, 5000);
    const std::int64_t p = primes[i % 5];
    CHECK(padic_abs(a * b, p) == padic_abs(a, p) * padic_abs(b, p));
    const Rational lhs = padic_abs(a + b, p);
    const Rational rhs = std::max(padic_abs(a, p), padic_abs(b, p));
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("product formula examples") {
  CHECK(product_formula_check(Rational(BigInt(-7), BigInt(10))) == Rational(1));
  CHECK(product_formula_check(Rational(1)) == Rational(1));
  CHECK(product_formula_check(Rational(360)) == Rational(1));
  CHECK_THROWS_AS(product_formula_check(Rational(0)), InvalidArgument);
}

TEST_CASE("product formula on random rationals up to 1e18") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    CHECK(product_formula_check(random_rational(rng, 1000000000000000000ULL)) == Rational(1));
  }
}

TEST_CASE("primality and factorization") {
  CHECK(is_prime(2));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));
  CHECK(is_prime(2305843009213693951ULL));  // 2^61 - 1
  CHECK_FALSE(is_prime(3825123056546413051ULL));  // strong pseudoprime to bases 2..23
  CHECK(primes_up_to(30) == std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  const auto f = factorize(BigInt("999999999999999989") * 6);
  REQUIRE(f.size() == 3);
  CHECK(f[2].first == BigInt("999999999999999989"));
  CHECK(padic_valuation(BigInt(48), 2) == 4);
}

TEST_CASE("mobius examples and errors") {
  CHECK(mobius(1) == 1);
  CHECK(mobius(12) == 0);
  CHECK(mobius(30) == -1);
  CHECK_THROWS_AS(mobius(0), InvalidArgument);
}

TEST_CASE("mobius agrees with trial division up to 1e5") {
  const auto sieve = mobius_sieve(100000);
  for (long n = 1; n <= 100000; ++n) {
    const int expected = mobius_oracle(n);
    REQUIRE(sieve[n] == expected);
    if (n % 97 == 0) REQUIRE(mobius(n) == expected);
  }
}

TEST_CASE("riemann_zeta closed forms") {
  const double pi = std::numbers::pi;
  CHECK(riemann_zeta(2.0) == doctest::Approx(pi * pi / 6).epsilon(1e-13));
  CHECK(riemann_zeta(4.0) == doctest::Approx(std::pow(pi, 4) / 90).epsilon(1e-13));
  CHECK_THROWS_AS(riemann_zeta(1.0), DomainError);
  CHECK_THROWS_AS(riemann_zeta(0.5), DomainError);
}

TEST_CASE("riemann_zeta(3) against direct summation with integral tail") {
  long double partial = 0;
  const long n = 1000000;
  for (long k = n; k >= 1; --k) partial += 1.0L / (static_cast<long double>(k) * k * k);
  // sum_{k>n} k^-3 lies between the integrals from n+1 and from n.
  const long double lo = partial + 0.5L / ((n + 1.0L) * (n + 1.0L));
  const long double hi = partial + 0.5L / (static_cast<long double>(n) * n);
  const double z3 = riemann_zeta(3.0);
  CHECK(z3 == doctest::Approx(static_cast<double>((lo + hi) / 2)).epsilon(1e-13));
  CHECK(z3 == doctest::Approx(1.202056903159594).epsilon(1e-13));
}

TEST_CASE("complex zeta matches Dirichlet series away from the pole") {
  const std::complex<double> s(2.0, 3.0);
  std::complex<double> sum = 0;
  for (int k = 200000; k >= 1; --k) sum += std::exp(-s * std::log(static_cast<double>(k)));
  // tail ~ N^{1-s}/(s-1)
  sum += std::exp((1.0 - s) * std::log(200000.5)) / (s - 1.0);
  const auto z = riemann_zeta(s);
  CHECK(std::abs(z - sum) < 1e-10);
  CHECK_THROWS_AS(riemann_zeta(std::complex<double>(1.0, 0.0)), DomainError);
}
