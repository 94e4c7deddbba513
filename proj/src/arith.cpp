#include "heights/arith.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "heights/error.hpp"

namespace heights {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 e, u64 m) {
  u64 r = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

bool fits_u64(const BigInt& n) { return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

u64 to_u64(const BigInt& n) {
  u64 v = 0;
  mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
  return v;
}

BigInt from_u64(u64 v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return r;
}

u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_u64(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) {
      ++out[p];
      factor_u64(n / p, out);
      return;
    }
  }
  const u64 d = pollard_brent(n);
  factor_u64(d, out);
  factor_u64(n / d, out);
}

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidArgument("rational with zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("not a rational number: '" + s + "'");
  }
}

double Rational::to_double() const {
  const auto& n = q_.get_num();
  const auto& d = q_.get_den();
  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 53) return n.get_d() / d.get_d();
  return q_.get_d();
}

Rational Rational::abs() const { return Rational(mpq_class(::abs(q_))); }

Rational Rational::pow(long e) const {
  if (e < 0) {
    if (is_zero()) throw InvalidArgument("negative power of zero");
    return Rational(den(), num()).pow(-e);
  }
  BigInt n, d;
  mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw InvalidArgument("division by zero");
  return Rational(mpq_class(a.q_ / b.q_));
}
Rational Rational::operator-() const { return Rational(mpq_class(-q_)); }

Place Place::padic(std::int64_t p) {
  if (p < 2 || !is_prime(static_cast<u64>(p)))
    throw InvalidArgument("not a prime: " + std::to_string(p));
  return Place(p);
}

std::string Place::to_string() const { return is_archimedean() ? "inf" : std::to_string(prime_); }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : kBases) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<std::pair<BigInt, unsigned>> factorize(BigInt n) {
  if (n == 0) throw InvalidArgument("cannot factor zero");
  n = ::abs(n);
  std::map<u64, unsigned> small;
  std::vector<std::pair<BigInt, unsigned>> out;
  if (!fits_u64(n)) {
    for (u64 p = 2; p <= 1000000 && !fits_u64(n); p += (p == 2 ? 1 : 2)) {
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        n /= static_cast<unsigned long>(p);
        ++small[p];
      }
    }
    if (!fits_u64(n)) throw ResourceError("integer too large to factor: " + n.get_str());
  }
  factor_u64(to_u64(n), small);
  for (auto [p, e] : small) out.emplace_back(from_u64(p), e);
  return out;
}

unsigned padic_valuation(const BigInt& n, std::int64_t p) {
  if (n == 0) throw InvalidArgument("valuation of zero");
  BigInt m = n;
  const BigInt bp(static_cast<long>(p));
  return static_cast<unsigned>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), bp.get_mpz_t()));
}

Rational padic_abs(const Rational& a, std::int64_t p) {
  (void)Place::padic(p);
  if (a.is_zero()) return Rational(0);
  const long v = static_cast<long>(padic_valuation(a.num(), p)) -
                 static_cast<long>(padic_valuation(a.den(), p));
  return Rational(static_cast<long>(p)).pow(-v);
}

Rational abs_value(const Rational& a, const Place& place) {
  return place.is_archimedean() ? a.abs() : padic_abs(a, place.prime());
}

Rational product_formula_check(const Rational& a) {
  if (a.is_zero()) throw InvalidArgument("product formula needs a nonzero rational");
  Rational prod = a.abs();
  for (const BigInt& part : {a.num(), a.den()}) {
    for (const auto& [p, e] : factorize(part)) prod *= padic_abs(a, p.get_si());
  }
  return prod;
}

int mobius(std::int64_t n) {
  if (n <= 0) throw InvalidArgument("mobius needs n >= 1");
  int mu = 1;
  for (const auto& [p, e] : factorize(BigInt(static_cast<long>(n)))) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

std::vector<int> mobius_sieve(std::int64_t limit) {
  std::vector<int> mu(static_cast<std::size_t>(std::max<std::int64_t>(limit, 0)) + 1, 1);
  mu[0] = 0;
  std::vector<bool> composite(mu.size(), false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    for (std::int64_t j = i; j <= limit; j += i) {
      if (j > i) composite[j] = true;
      mu[j] = -mu[j];
    }
    if (i <= limit / i) {
      for (std::int64_t j = i * i; j <= limit; j += i * i) mu[j] = 0;
    }
  }
  return mu;
}

std::complex<double> riemann_zeta(std::complex<double> s) {
  using C = std::complex<double>;
  if (s == C(1.0, 0.0)) throw DomainError("zeta has a pole at s = 1");
  // B_{2k} / (2k)! for k = 1..15.
  static constexpr std::array<double, 15> kBernoulliOverFactorial = {
      1.0 / 6 / 2,
      -1.0 / 30 / 24,
      1.0 / 42 / 720,
      -1.0 / 30 / 40320,
      5.0 / 66 / 3628800,
      -691.0 / 2730 / 479001600,
      7.0 / 6 / 87178291200.0,
      -3617.0 / 510 / 20922789888000.0,
      43867.0 / 798 / 6402373705728000.0,
      -174611.0 / 330 / 2432902008176640000.0,
      854513.0 / 138 / 1.1240007277776077e21,
      -236364091.0 / 2730 / 6.204484017332394e23,
      8553103.0 / 6 / 4.0329146112660565e26,
      -23749461029.0 / 870 / 3.0488834461171384e29,
      8615841276005.0 / 14322 / 2.652528598121911e32,
  };
  // Keeps every tail term below 1e-16 relative for |Im s| up to a few hundred.
  const int n_cut = 16 + static_cast<int>(std::ceil(std::abs(s)));
  const double big_n = n_cut;
  C sum = 0.0;
  for (int n = n_cut - 1; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const C n_pow = std::exp(-s * std::log(big_n));
  sum += n_pow * big_n / (s - 1.0) + 0.5 * n_pow;
  C rising = s;  // s (s+1) ... (s + 2k - 2)
  C n_term = n_pow / big_n;
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    const C term = kBernoulliOverFactorial[k] * rising * n_term;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    rising *= (s + static_cast<double>(2 * k + 1)) * (s + static_cast<double>(2 * k + 2));
    n_term /= big_n * big_n;
  }
  return sum;
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw DomainError("riemann_zeta needs s > 1");
  return riemann_zeta(std::complex<double>(s, 0.0)).real();
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

}  // namespace heights
