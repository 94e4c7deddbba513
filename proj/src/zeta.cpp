#include "heights/zeta.hpp"

#include <cmath>
#include <limits>

#include "heights/error.hpp"
#include "json.hpp"

namespace heights {

namespace {

struct Line {
  double intercept = 0;
  double slope = 0;
  double rms = 0;
};

Line least_squares(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  Line out;
  out.slope = sxx > 0 ? sxy / sxx : 0.0;
  out.intercept = my - out.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - out.intercept - out.slope * x[i];
    ss += r * r;
  }
  out.rms = std::sqrt(ss / n);
  return out;
}

}  // namespace

ZetaPartialSum zeta_partial_sum_from_histogram(std::span<const BigInt> histogram, std::complex<double> s,
                                               std::int64_t B) {
  if (B < 1) throw InvalidArgument("zeta partial sums need B >= 1");
  if (static_cast<std::size_t>(B) >= histogram.size()) throw InvalidArgument("histogram shorter than B");
  ZetaPartialSum out{s, B, {0.0, 0.0}, 0};
  for (std::int64_t h = 1; h <= B; ++h) {
    if (histogram[h] == 0) continue;
    out.terms_used += histogram[h];
    out.value += histogram[h].get_d() * std::exp(-s * std::log(static_cast<double>(h)));
  }
  return out;
}

ZetaPartialSum zeta_partial_sum(const VarietySpec& spec, std::complex<double> s, std::int64_t B, unsigned threads) {
  if (B < 1) throw InvalidArgument("zeta partial sums need B >= 1");
  const auto hist = height_histogram(spec, B, threads);
  return zeta_partial_sum_from_histogram(hist, s, B);
}

std::vector<ZetaPartialSum> zeta_partial_sums(const VarietySpec& spec, std::span<const std::complex<double>> s_grid,
                                              std::span<const std::int64_t> bounds, unsigned threads) {
  if (bounds.empty() || s_grid.empty()) return {};
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    if (bounds[i] < 1) throw InvalidArgument("zeta partial sums need B >= 1");
    if (i > 0 && bounds[i] <= bounds[i - 1]) throw InvalidArgument("bounds must be strictly increasing");
  }
  const auto hist = height_histogram(spec, bounds.back(), threads);
  std::vector<ZetaPartialSum> out;
  for (const auto& s : s_grid) {
    for (auto B : bounds) out.push_back(zeta_partial_sum_from_histogram(hist, s, B));
  }
  return out;
}

AbscissaEstimate abscissa_estimate(const CountSeries& series) {
  std::vector<double> x, y;
  for (const auto& [b, n] : series.entries()) {
    if (n <= 0 || b < 2) continue;
    x.push_back(std::log(static_cast<double>(b)));
    y.push_back(std::log(n.get_d()));
  }
  if (x.size() < 3) throw InsufficientData("abscissa estimate needs at least three entries with N > 0 and B > 1");
  AbscissaEstimate out;
  out.ratio = y.back() / x.back();
  const std::size_t start = x.size() / 2;
  const std::size_t from = std::min(start, x.size() - 2);
  out.slope = least_squares(std::span(x).subspan(from), std::span(y).subspan(from)).slope;
  return out;
}

std::string AsymptoticFit::to_json() const {
  nlohmann::json j{{"c", c}, {"a", a}, {"t", t}, {"residual", residual}};
  return j.dump();
}

AsymptoticFit fit_asymptotic(std::span<const std::pair<double, double>> samples, std::span<const int> t_candidates) {
  if (samples.size() < 8) throw InsufficientData("asymptotic fit needs at least 8 entries");
  if (samples.back().first < 100.0 * samples.front().first)
    throw InsufficientData("asymptotic fit needs entries spanning at least two decades");
  if (t_candidates.empty()) throw InvalidArgument("no candidate log powers");
  std::vector<double> log_b, log_log_b, log_n;
  for (std::size_t i = samples.size() / 2; i < samples.size(); ++i) {
    const auto [b, n] = samples[i];
    if (!(n > 0) || !(b > 1)) throw InsufficientData("tail of the series needs B > 1 and N > 0");
    log_b.push_back(std::log(b));
    log_log_b.push_back(std::log(std::log(b)));
    log_n.push_back(std::log(n));
  }
  AsymptoticFit best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int t : t_candidates) {
    if (t < 1) throw InvalidArgument("log powers t must be >= 1");
    std::vector<double> y(log_n.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = log_n[i] - (t - 1) * log_log_b[i];
    const Line line = least_squares(log_b, y);
    if (line.rms < best.residual) best = AsymptoticFit{std::exp(line.intercept), line.slope, t, line.rms};
  }
  return best;
}

AsymptoticFit fit_asymptotic(const CountSeries& series, std::span<const int> t_candidates) {
  std::vector<std::pair<double, double>> samples;
  for (const auto& [b, n] : series.entries()) samples.emplace_back(static_cast<double>(b), n.get_d());
  return fit_asymptotic(samples, t_candidates);
}

}  // namespace heights
