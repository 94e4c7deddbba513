#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heights/arith.hpp"
#include "heights/heights.hpp"
#include "heights/variety.hpp"

namespace heights {

// N_X(B) at increasing bounds B.
class CountSeries {
 public:
  CountSeries() = default;
  // Throws InvalidArgument unless B is strictly increasing and positive and N
  // is nondecreasing.
  explicit CountSeries(std::vector<std::pair<std::int64_t, BigInt>> entries);

  const std::vector<std::pair<std::int64_t, BigInt>>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // "B,N" header, one row per entry.
  std::string to_csv() const;
  static CountSeries from_csv(std::string_view text);

 private:
  std::vector<std::pair<std::int64_t, BigInt>> entries_;
};

// Primitive points, flattened row-major with `width` = n+1 coordinates each,
// in lexicographic order.
struct PointList {
  std::size_t width = 0;
  std::vector<std::int64_t> coords;

  std::size_t size() const { return width ? coords.size() / width : 0; }
  std::span<const std::int64_t> operator[](std::size_t i) const {
    return {coords.data() + i * width, width};
  }
};

// 0 selects std::thread::hardware_concurrency().
unsigned resolve_threads(unsigned threads);

// N_{P^n}(B) = 1/2 sum_k mu(k) ((2 floor(B/k) + 1)^{n+1} - 1).
BigInt count_projective(unsigned n, std::int64_t B);

// Number of points of P^n(Q) of height exactly H, for H = 0..B (entry 0 is 0).
std::vector<BigInt> projective_height_histogram(unsigned n, std::int64_t B);

// Every primitive point of `spec` with H(x) <= B, sorted lexicographically.
// The result is independent of `threads`.
PointList enumerate_raw(const VarietySpec& spec, std::int64_t B, unsigned threads = 0);
std::vector<PrimitivePoint> enumerate_points(const VarietySpec& spec, std::int64_t B,
                                             unsigned threads = 0);

// Streams every primitive point with H(x) <= B to `visit` on the calling
// thread, in slab order (not sorted). Nothing is buffered.
void for_each_point(const VarietySpec& spec, std::int64_t B,
                    const std::function<void(std::span<const std::int64_t>, std::int64_t)>& visit);

// Number of points of `spec` of height exactly H, for H = 0..B.
std::vector<BigInt> height_histogram(const VarietySpec& spec, std::int64_t B, unsigned threads = 0);

CountSeries count_series(const VarietySpec& spec, std::span<const std::int64_t> bounds,
                         unsigned threads = 0);

enum class Norm { kEuclidean, kSup };
Norm parse_norm(std::string_view name);

// #{x in Z^n : ||x|| <= B}, origin included. The comparison is exact: B is
// rational, and a double argument is converted exactly.
BigInt circle_count(unsigned n, const Rational& B, Norm norm);
BigInt circle_count(unsigned n, double B, Norm norm);

}  // namespace heights
