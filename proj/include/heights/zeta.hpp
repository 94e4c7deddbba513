#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heights/enumerate.hpp"

namespace heights {

// sum over points of height <= B of H(x)^{-s}.
struct ZetaPartialSum {
  std::complex<double> s;
  std::int64_t B = 0;
  std::complex<double> value;
  BigInt terms_used;  // N_X(B)
};

// Groups points by exact height: sum_{H <= B} (N(H) - N(H-1)) H^{-s}.
ZetaPartialSum zeta_partial_sum(const VarietySpec& spec, std::complex<double> s, std::int64_t B,
                                unsigned threads = 0);

// One enumeration shared by every (s, B) pair; results are ordered s-major.
std::vector<ZetaPartialSum> zeta_partial_sums(const VarietySpec& spec, std::span<const std::complex<double>> s_grid,
                                              std::span<const std::int64_t> bounds, unsigned threads = 0);

// Same, from a histogram of exact-height counts (entry H = #points of height H).
ZetaPartialSum zeta_partial_sum_from_histogram(std::span<const BigInt> histogram, std::complex<double> s,
                                               std::int64_t B);

// Finite-B estimates of the growth exponent beta_X. Both are estimates, not
// limits; `slope` is the one reported as the abscissa.
struct AbscissaEstimate {
  double slope = 0;  // least-squares slope of log N against log B, last half
  double ratio = 0;  // log N(B_max) / log B_max
};

// Needs at least three entries with N > 0.
AbscissaEstimate abscissa_estimate(const CountSeries& series);

// N(B) ~ c B^a (log B)^{t-1}
struct AsymptoticFit {
  double c = 0;
  double a = 0;
  int t = 1;
  double residual = 0;  // RMS of the log-space fit

  // {"c":..., "a":..., "t":..., "residual":...}
  std::string to_json() const;
};

// For each t, a linear least-squares fit of log N - (t-1) log log B against
// log B over the last half of the series; returns the t with the smallest
// residual. Needs at least 8 entries spanning two decades.
AsymptoticFit fit_asymptotic(const CountSeries& series, std::span<const int> t_candidates);
AsymptoticFit fit_asymptotic(std::span<const std::pair<double, double>> samples, std::span<const int> t_candidates);

inline constexpr int kDefaultLogPowers[] = {1, 2, 3, 4};

}  // namespace heights
