#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "heights/enumerate.hpp"
#include "heights/igusa.hpp"
#include "heights/variety.hpp"

namespace heights::testing {

inline Polynomial poly(std::size_t vars, std::initializer_list<std::pair<long, std::vector<unsigned>>> terms) {
  std::vector<Term> out;
  for (const auto& [c, e] : terms) out.push_back(Term{BigInt(c), e});
  return Polynomial(vars, std::move(out));
}

inline VarietySpec variety(unsigned n, std::vector<Polynomial> polys,
                           std::vector<std::vector<Polynomial>> excluded = {}) {
  return VarietySpec{n, std::move(polys), std::move(excluded)};
}

// x0 x2 = x1^2 in P^2.
inline VarietySpec conic() { return variety(2, {poly(3, {{1, {1, 0, 1}}, {-1, {0, 2, 0}}})}); }

// x0 x2 = x1 x3 in P^3.
inline VarietySpec quadric() { return variety(3, {poly(4, {{1, {1, 0, 1, 0}}, {-1, {0, 1, 0, 1}}})}); }

inline VarietySpec coordinate_line() { return variety(2, {poly(3, {{1, {1, 0, 0}}})}); }

inline VarietySpec diagonal_line() {
  return variety(2, {poly(3, {{1, {1, 0, 0}}, {1, {0, 1, 0}}, {1, {0, 0, 1}}})});
}

// Roughly `per_decade` integer bounds per factor of 10 from lo to hi, deduplicated.
inline std::vector<std::int64_t> geometric_bounds(double lo, double hi, int per_decade) {
  std::vector<std::int64_t> out;
  const int steps = static_cast<int>(std::round(std::log10(hi / lo) * per_decade));
  for (int k = 0; k <= steps; ++k) {
    const auto b = static_cast<std::int64_t>(std::llround(lo * std::pow(10.0, static_cast<double>(k) / per_decade)));
    if (out.empty() || b > out.back()) out.push_back(b);
  }
  return out;
}

// Partial sums of d(n) by a divisor sieve.
inline CountSeries divisor_series(std::span<const std::int64_t> bounds) {
  const std::int64_t top = bounds.back();
  std::vector<std::uint32_t> d(top + 1, 0);
  for (std::int64_t i = 1; i <= top; ++i)
    for (std::int64_t j = i; j <= top; j += i) ++d[j];
  std::vector<std::pair<std::int64_t, BigInt>> entries;
  long acc = 0;
  std::size_t k = 0;
  for (std::int64_t n = 1; n <= top; ++n) {
    acc += d[n];
    if (n == bounds[k]) {
      entries.emplace_back(n, BigInt(acc));
      ++k;
    }
  }
  return CountSeries(std::move(entries));
}

inline NCDatum parse_datum(const char* text) { return NCDatum::from_json(nlohmann::json::parse(text)); }

// P^1, boundary the point at infinity with multiplicity d.
inline NCDatum p1_datum(unsigned d = 2) {
  NCDatum datum = parse_datum(R"({"dim":1, "components":[{"label":"alpha","d":2}], "rank_M0":0, "rank_M1":1,
                            "strata_poly":{"":[0,1], "alpha":[1]}, "archimedean":"p1_max"})");
  datum.components[0].d = d;
  return datum;
}

inline NCDatum gm_datum() {
  return parse_datum(R"({"dim":1, "components":[{"label":"zero","d":1},{"label":"inf","d":1}], "rank_M0":0, "rank_M1":1,
                   "strata_poly":{"":[-1,1], "zero":[1], "inf":[1]}, "archimedean":"gm_max"})");
}

// Variety-backed data; strata come from count_strata_ff.
inline NCDatum p2_two_lines() {
  return parse_datum(R"({"dim":2, "components":[{"label":"a","d":1},{"label":"b","d":2}], "rank_M0":0, "rank_M1":1,
    "variety":{"n":2, "polys":[], "boundary":[{"terms":[{"c":1,"e":[1,0,0]}]}, {"terms":[{"c":1,"e":[0,1,0]}]}]}})");
}

inline NCDatum conic_with_chord() {
  return parse_datum(R"({"dim":1, "components":[{"label":"h","d":1}], "rank_M0":0, "rank_M1":1,
    "variety":{"n":2, "polys":[{"terms":[{"c":1,"e":[1,0,1]},{"c":-1,"e":[0,2,0]}]}],
               "boundary":[{"terms":[{"c":1,"e":[1,0,0]},{"c":-1,"e":[0,0,1]}]}]}})");
}

inline NCDatum quadric_with_section() {
  return parse_datum(R"({"dim":2, "components":[{"label":"h","d":3}], "rank_M0":0, "rank_M1":2,
    "variety":{"n":3, "polys":[{"terms":[{"c":1,"e":[1,0,1,0]},{"c":-1,"e":[0,1,0,1]}]}],
               "boundary":[{"terms":[{"c":1,"e":[1,0,0,0]}]}]}})");
}

inline double p1_closed_form(double q, double s) { return (1 - std::pow(q, -2 * s)) / (1 - std::pow(q, -(2 * s - 1))); }

}  // namespace heights::testing
