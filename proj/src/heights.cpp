#include "heights/heights.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "heights/error.hpp"
#include "json.hpp"

namespace heights {

namespace {

bool is_primitive_signed(const std::vector<BigInt>& c) {
  BigInt g = 0;
  int first_sign = 0;
  for (const auto& v : c) {
    if (first_sign == 0) first_sign = sgn(v);
    g = gcd(g, v);
  }
  return first_sign > 0 && g == 1;
}

}  // namespace

PrimitivePoint::PrimitivePoint(std::vector<BigInt> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw InvalidArgument("a projective point needs at least two coordinates");
  if (!is_primitive_signed(coords_))
    throw InvalidArgument("coordinates are not primitive with positive leading entry");
}

PrimitivePoint PrimitivePoint::from_int64(std::span<const std::int64_t> coords) {
  std::vector<BigInt> c;
  c.reserve(coords.size());
  for (auto v : coords) c.emplace_back(static_cast<long>(v));
  return PrimitivePoint(std::move(c));
}

std::string PrimitivePoint::to_json() const {
  std::string out = "[";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += coords_[i].get_str();
  }
  return out + "]";
}

std::string HeightValue::to_json() const {
  nlohmann::json j;
  if (exact) {
    j["H"] = exact->get_str();
  } else {
    std::ostringstream os;
    os.precision(17);
    os << exponential;
    j["H"] = os.str();
  }
  j["h"] = logarithmic;
  return j.dump();
}

PrimitivePoint normalize(std::span<const BigInt> raw) {
  if (raw.size() < 2) throw InvalidArgument("a projective point needs at least two coordinates");
  BigInt g = 0;
  for (const auto& v : raw) g = gcd(g, v);
  if (g == 0) throw InvalidArgument("all coordinates are zero");
  std::vector<BigInt> c(raw.begin(), raw.end());
  int lead = 0;
  for (const auto& v : c) {
    if (sgn(v) != 0) {
      lead = sgn(v);
      break;
    }
  }
  if (lead < 0) g = -g;
  for (auto& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  return PrimitivePoint(std::move(c));
}

PrimitivePoint normalize(std::span<const Rational> raw) {
  BigInt l = 1;
  for (const auto& r : raw) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.den().get_mpz_t());
  std::vector<BigInt> scaled;
  scaled.reserve(raw.size());
  for (const auto& r : raw) scaled.push_back(r.num() * (l / r.den()));
  return normalize(std::span<const BigInt>(scaled));
}

double log_big(const BigInt& n) {
  if (sgn(n) <= 0) throw InvalidArgument("log of a nonpositive integer");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

BigInt max_height(const PrimitivePoint& x) {
  BigInt h = 0;
  for (const auto& v : x.coords()) {
    BigInt a = ::abs(v);
    if (a > h) h = a;
  }
  return h;
}

HeightValue height(const PrimitivePoint& x, MetricKind metric) {
  HeightValue out;
  if (metric == MetricKind::kMax) {
    out.exact = max_height(x);
    out.logarithmic = log_big(*out.exact);
    out.exponential = out.exact->get_d();
    return out;
  }
  // Fubini-Study: the Euclidean norm replaces the max at infinity. log is
  // taken as log(max) + 0.5 log(sum (x_i/max)^2) to stay finite for huge
  // coordinates.
  const BigInt m = max_height(x);
  double ratio_sq = 0.0;
  for (const auto& v : x.coords()) {
    const double r = mpq_class(v, m).get_d();
    ratio_sq += r * r;
  }
  out.logarithmic = log_big(m) + 0.5 * std::log(ratio_sq);
  out.exponential = std::exp(out.logarithmic);
  return out;
}

LocalFactor local_height_factor(const PrimitivePoint& x, std::size_t i, const Place& place,
                                MetricKind metric) {
  if (i >= x.size()) throw InvalidArgument("coordinate index out of range");
  if (sgn(x[i]) == 0)
    throw SectionVanishes("section x_" + std::to_string(i) + " vanishes at " + x.to_json());
  LocalFactor out;
  if (place.is_archimedean()) {
    if (metric == MetricKind::kMax) {
      out.exact = Rational(::abs(x[i]), max_height(x));
      out.value = out.exact->to_double();
    } else {
      BigInt sum_sq = 0;
      for (const auto& v : x.coords()) sum_sq += v * v;
      // |x_i| / sqrt(sum); exact when the sum is a perfect square.
      if (mpz_perfect_square_p(sum_sq.get_mpz_t())) {
        BigInt root;
        mpz_sqrt(root.get_mpz_t(), sum_sq.get_mpz_t());
        out.exact = Rational(::abs(x[i]), root);
        out.value = out.exact->to_double();
      } else {
        out.value = std::exp(log_big(::abs(x[i])) - 0.5 * log_big(sum_sq));
      }
    }
    return out;
  }
  // Both metrics use the max formula at finite places; primitive
  // coordinates have max_j |x_j|_p = 1.
  out.exact = padic_abs(Rational(x[i]), place.prime());
  out.value = out.exact->to_double();
  return out;
}

std::vector<Place> relevant_places(const PrimitivePoint& x) {
  std::set<std::int64_t> primes;
  for (const auto& v : x.coords()) {
    if (sgn(v) == 0) continue;
    for (const auto& [p, e] : factorize(v)) primes.insert(p.get_si());
  }
  std::vector<Place> out{Place::infinity()};
  for (auto p : primes) out.push_back(Place::padic(p));
  return out;
}

PrimitivePoint veronese_embed(const PrimitivePoint& x, unsigned d) {
  if (x.dimension() != 1) throw InvalidArgument("veronese_embed expects a point of P^1");
  if (d == 0) throw InvalidArgument("veronese degree must be positive");
  std::vector<BigInt> mono;
  mono.reserve(d + 1);
  for (unsigned k = 0; k <= d; ++k) {
    BigInt a, b;
    mpz_pow_ui(a.get_mpz_t(), x[0].get_mpz_t(), d - k);
    mpz_pow_ui(b.get_mpz_t(), x[1].get_mpz_t(), k);
    mono.push_back(a * b);
  }
  return normalize(std::span<const BigInt>(mono));
}

MetricKind parse_metric(std::string_view name) {
  if (name == "max") return MetricKind::kMax;
  if (name == "fs" || name == "fubini-study" || name == "fubini_study") return MetricKind::kFubiniStudy;
  throw InvalidArgument("unknown metric '" + std::string(name) + "' (expected max or fs)");
}

}  // namespace heights
