#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace heights {

using BigInt = mpz_class;

// Exact rational number, always kept in lowest terms with a positive
// denominator, so equality is structural.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den);

  // Accepts "a", "-a", "a/b".
  static Rational parse(std::string_view text);

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  bool is_integer() const { return q_.get_den() == 1; }
  // Correctly rounded when numerator and denominator fit in 53 bits.
  double to_double() const;
  std::string to_string() const { return q_.get_str(); }
  const mpq_class& raw() const { return q_; }

  Rational abs() const;
  // Integer powers; negative exponents invert (zero base throws).
  Rational pow(long e) const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }

 private:
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }
  mpq_class q_{0};
};

// A place of Q: the archimedean one or a p-adic one.
class Place {
 public:
  static Place infinity() { return Place(0); }
  // Throws InvalidArgument unless p is prime.
  static Place padic(std::int64_t p);

  bool is_archimedean() const { return prime_ == 0; }
  std::int64_t prime() const { return prime_; }
  std::string to_string() const;

  friend bool operator==(const Place&, const Place&) = default;

 private:
  explicit Place(std::int64_t p) : prime_(p) {}
  std::int64_t prime_;
};

// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(std::uint64_t n);

// Primes p <= limit, ascending.
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

// Prime factorization as (prime, exponent) pairs in ascending order.
// Pollard-Brent rho on the 64-bit part; inputs with a cofactor above 2^64
// after trial division to 10^6 raise ResourceError.
std::vector<std::pair<BigInt, unsigned>> factorize(BigInt n);

// v_p(n) for n != 0.
unsigned padic_valuation(const BigInt& n, std::int64_t p);

// |a|_p = p^{-v_p(a)}, |0|_p = 0.
Rational padic_abs(const Rational& a, std::int64_t p);
Rational abs_value(const Rational& a, const Place& place);

// |a|_inf * prod_{p | num*den} |a|_p, computed exactly. Equal to 1 for every
// nonzero a.
Rational product_formula_check(const Rational& a);

int mobius(std::int64_t n);
// mu(0..limit); mu(0) is stored as 0.
std::vector<int> mobius_sieve(std::int64_t limit);

// Riemann zeta via Euler-Maclaurin summation. The real overload requires
// s > 1; the complex one accepts any s != 1.
double riemann_zeta(double s);
std::complex<double> riemann_zeta(std::complex<double> s);

BigInt gcd(const BigInt& a, const BigInt& b);

}  // namespace heights
