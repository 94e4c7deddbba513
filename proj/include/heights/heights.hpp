#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heights/arith.hpp"

namespace heights {

// A point of P^n(Q) in primitive integer coordinates: coprime, not all zero,
// first nonzero coordinate positive. This picks one of the two primitive
// representatives +-x.
class PrimitivePoint {
 public:
  // Throws InvalidArgument if `coords` is not already primitive and signed.
  explicit PrimitivePoint(std::vector<BigInt> coords);
  static PrimitivePoint from_int64(std::span<const std::int64_t> coords);

  std::size_t dimension() const { return coords_.size() - 1; }
  std::size_t size() const { return coords_.size(); }
  const BigInt& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<BigInt>& coords() const { return coords_; }

  // JSON integer array, e.g. "[1,-2,3]".
  std::string to_json() const;

  friend bool operator==(const PrimitivePoint&, const PrimitivePoint&) = default;
  friend bool operator<(const PrimitivePoint& a, const PrimitivePoint& b) { return a.coords_ < b.coords_; }

 private:
  std::vector<BigInt> coords_;
};

enum class MetricKind { kMax, kFubiniStudy };

struct HeightValue {
  // Set for the max metric, where H is a positive integer.
  std::optional<BigInt> exact;
  double exponential = 1.0;
  double logarithmic = 0.0;

  // {"H": "...", "h": ...}
  std::string to_json() const;
};

// ||s_i(x)||_v. `exact` is set unless the value is an irrational
// archimedean Fubini-Study factor.
struct LocalFactor {
  std::optional<Rational> exact;
  double value = 1.0;
};

PrimitivePoint normalize(std::span<const Rational> raw);
PrimitivePoint normalize(std::span<const BigInt> raw);

HeightValue height(const PrimitivePoint& x, MetricKind metric = MetricKind::kMax);

// The max-metric height as an exact integer.
BigInt max_height(const PrimitivePoint& x);

// Natural log of a positive big integer, accurate to double precision.
double log_big(const BigInt& n);

// Throws SectionVanishes when x_i = 0.
LocalFactor local_height_factor(const PrimitivePoint& x, std::size_t i, const Place& place,
                                MetricKind metric = MetricKind::kMax);

// Places where some local factor of x can differ from 1: infinity and the
// primes dividing a nonzero coordinate.
std::vector<Place> relevant_places(const PrimitivePoint& x);

// nu_d: P^1 -> P^d, [x:y] -> [x^d : x^{d-1}y : ... : y^d].
PrimitivePoint veronese_embed(const PrimitivePoint& x, unsigned d);

MetricKind parse_metric(std::string_view name);

}  // namespace heights
