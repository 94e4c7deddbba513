#include "heights/igusa.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>
#include <type_traits>

#include "heights/enumerate.hpp"
#include "heights/error.hpp"
#include "heights/quadrature.hpp"

namespace heights {

namespace {

constexpr std::uint64_t kMaxFieldPoints = 100'000'000;

BigInt count_from_json(const nlohmann::json& v, const std::string& where) {
  BigInt out;
  if (v.is_number_integer()) {
    out = v.is_number_unsigned() ? BigInt(std::to_string(v.get<std::uint64_t>()))
                                 : BigInt(static_cast<long>(v.get<std::int64_t>()));
  } else if (v.is_string()) {
    try {
      out = BigInt(v.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw InvalidArgument(where + ": not an integer: " + v.dump());
    }
  } else {
    throw InvalidArgument(where + ": not an integer: " + v.dump());
  }
  return out;
}

std::int64_t prime_from_key(const std::string& key) {
  std::size_t used = 0;
  long long p = 0;
  try {
    p = std::stoll(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
    throw InvalidArgument("strata key '" + key + "' is not a prime");
  return p;
}

void require_prime(std::int64_t q) {
  if (q < 2 || !is_prime(static_cast<std::uint64_t>(q)))
    throw InvalidArgument(std::to_string(q) + " is not a prime");
}

unsigned get_unsigned(const nlohmann::json& j, const char* field) {
  if (!j.contains(field)) throw InvalidArgument(std::string("datum needs \"") + field + "\"");
  const auto& v = j.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InvalidArgument(std::string("\"") + field + "\" must be a nonnegative integer");
  return v.get<unsigned>();
}

// sum of p^{-3/2} over primes p > P, by the prime number theorem.
double prime_tail_sum(double P) { return 2.0 / (std::sqrt(P) * std::log(P)); }

template <class T>
T chart_power(double phi, T exponent) {
  if (phi == 0.0) return T(0.0);
  return std::exp(exponent * std::log(phi));
}

// Splits [a, b] at 0 so that singularities at the origin sit on endpoints.
std::vector<std::pair<double, double>> split_at_zero(double a, double b) {
  if (a < 0.0 && b > 0.0) return {{a, 0.0}, {0.0, b}};
  return {{a, b}};
}

template <class T>
T integrate_charts(const ArchimedeanIntegrand& in, T s, double tol) {
  const T e = s - 1.0;
  T total{};
  double err = 0;
  bool ok = true;
  const double piece_tol = 0.05 * tol;
  for (const auto& chart : in.charts) {
    if (chart.box.size() == 1) {
      for (auto [a, b] : split_at_zero(chart.box[0].first, chart.box[0].second)) {
        auto f = [&](double x) -> T {
          const double pt[1] = {x};
          return chart_power<T>(chart.phi(pt), e) * chart.omega(pt);
        };
        quad::Result<T> r;
        if constexpr (std::is_same_v<T, double>) {
          r = quad::integrate(f, a, b, piece_tol);
        } else {
          r = quad::integrate_complex(f, a, b, piece_tol);
        }
        total += r.value;
        err += r.error;
        ok = ok && r.converged;
      }
    } else if (chart.box.size() == 2) {
      for (auto [ax, bx] : split_at_zero(chart.box[0].first, chart.box[0].second)) {
        for (auto [ay, by] : split_at_zero(chart.box[1].first, chart.box[1].second)) {
          auto f = [&](double x, double y) -> T {
            const double pt[2] = {x, y};
            return chart_power<T>(chart.phi(pt), e) * chart.omega(pt);
          };
          quad::Result<T> r;
          if constexpr (std::is_same_v<T, double>) {
            r = quad::integrate_2d(f, ax, bx, ay, by, piece_tol);
          } else {
            r = quad::integrate_2d_complex(f, ax, bx, ay, by, piece_tol);
          }
          total += r.value;
          err += r.error;
          ok = ok && r.converged;
        }
      }
    } else {
      throw InvalidArgument("charts must be 1- or 2-dimensional");
    }
  }
  if (!ok || err > tol) throw ResourceError("archimedean quadrature did not reach the requested tolerance");
  return total;
}

template <class T>
T archimedean_value(const ArchimedeanSpec& spec, T s) {
  switch (spec.kind) {
    case ArchimedeanSpec::Kind::kConstant:
      return T(spec.constant);
    case ArchimedeanSpec::Kind::kP1Max:
      return archimedean_local_zeta(p1_max_integrand(), s);
    case ArchimedeanSpec::Kind::kP1FubiniStudy:
      return archimedean_local_zeta(p1_fubini_study_integrand(), s);
    case ArchimedeanSpec::Kind::kGmMax:
      return archimedean_local_zeta(gm_max_integrand(), s);
  }
  return T(spec.constant);
}

// log of lambda_p^U Z_p(s) prod_a (1 - p^{-(1 + d_a (s-1))}). The datum's
// ranks belong to X; the open part U has rank_M0 + #components units.
std::complex<double> log_phi_factor(const NCDatum& datum, std::int64_t p, std::complex<double> s) {
  if (!datum.is_good(p)) {
    auto it = datum.bad_local_factors.find(p);
    if (it == datum.bad_local_factors.end()) return 0.0;
    if (!(it->second > 0)) throw InvalidArgument("bad local factors must be positive");
    return std::log(it->second);
  }
  const auto lambda = convergence_factor(datum.rank_M0 + static_cast<unsigned>(datum.components.size()),
                                         datum.rank_M1, p);
  std::complex<double> out = std::log(lambda) + std::log(denef_local_zeta(datum, p, s).value);
  const double lp = std::log(static_cast<double>(p));
  for (const auto& c : datum.components) out += std::log(1.0 - std::exp(-(1.0 + static_cast<double>(c.d) * (s - 1.0)) * lp));
  return out;
}

// Per-prime logs, computed in parallel and returned in prime order.
std::vector<std::complex<double>> log_phi_factors(const NCDatum& datum, std::span<const std::int64_t> primes,
                                                  std::complex<double> s, unsigned threads) {
  std::vector<std::complex<double>> logs(primes.size());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(1, primes.size())));
  // Each worker stops at its first failure; the lowest failing prime wins,
  // so the reported error does not depend on scheduling.
  std::vector<std::pair<std::size_t, std::exception_ptr>> errors(workers, {primes.size(), nullptr});
  auto work = [&](unsigned w) {
    std::size_t i = w;
    try {
      for (; i < primes.size(); i += workers) logs[i] = log_phi_factor(datum, primes[i], s);
    } catch (...) {
      errors[w] = {i, std::current_exception()};
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  const auto first = std::min_element(errors.begin(), errors.end(),
                                       [](const auto& a, const auto& b) { return a.first < b.first; });
  if (first->second) std::rethrow_exception(first->second);
  return logs;
}

double prod_multiplicities(const NCDatum& datum) {
  double out = 1;
  for (const auto& c : datum.components) out *= c.d;
  return out;
}

void check_cutoff(std::int64_t P) {
  if (P < 2) throw InvalidArgument("prime cutoff must be at least 2");
  if (P > 100'000'000) throw ResourceError("prime cutoff above 1e8");
}

}  // namespace

ArchimedeanIntegrand p1_max_integrand() {
  ArchimedeanIntegrand out;
  out.threshold = 0.5;
  auto one = [](std::span<const double>) { return 1.0; };
  out.charts.push_back(Chart{{{-1.0, 1.0}}, one, one});
  out.charts.push_back(Chart{{{-1.0, 1.0}}, [](std::span<const double> y) { return y[0] * y[0]; }, one});
  return out;
}

ArchimedeanIntegrand p1_fubini_study_integrand() {
  ArchimedeanIntegrand out;
  out.threshold = 0.5;
  auto inv = [](std::span<const double> x) { return 1.0 / (1.0 + x[0] * x[0]); };
  out.charts.push_back(Chart{{{-1.0, 1.0}}, inv, inv});
  out.charts.push_back(Chart{{{-1.0, 1.0}},
                             [](std::span<const double> y) { return y[0] * y[0] / (1.0 + y[0] * y[0]); }, inv});
  return out;
}

ArchimedeanIntegrand gm_max_integrand() {
  ArchimedeanIntegrand out;
  out.threshold = 0.0;
  auto abs_x = [](std::span<const double> x) { return std::abs(x[0]); };
  auto one = [](std::span<const double>) { return 1.0; };
  out.charts.push_back(Chart{{{-1.0, 1.0}}, abs_x, one});
  out.charts.push_back(Chart{{{-1.0, 1.0}}, abs_x, one});
  return out;
}

double archimedean_local_zeta(const ArchimedeanIntegrand& integrand, double s, double tol) {
  if (!(s > integrand.threshold))
    throw DomainError("archimedean integral diverges for s <= " + std::to_string(integrand.threshold));
  return integrate_charts<double>(integrand, s, tol);
}

std::complex<double> archimedean_local_zeta(const ArchimedeanIntegrand& integrand, std::complex<double> s,
                                            double tol) {
  if (!(s.real() > integrand.threshold))
    throw DomainError("archimedean integral diverges for Re(s) <= " + std::to_string(integrand.threshold));
  return integrate_charts<std::complex<double>>(integrand, s, tol);
}

ArchimedeanSpec ArchimedeanSpec::parse(std::string_view name) {
  if (name == "p1_max") return {Kind::kP1Max, 0};
  if (name == "p1_fubini_study") return {Kind::kP1FubiniStudy, 0};
  if (name == "gm_max") return {Kind::kGmMax, 0};
  throw InvalidArgument("unknown archimedean integrand '" + std::string(name) +
                        "' (expected p1_max, p1_fubini_study, gm_max or a number)");
}

std::string ArchimedeanSpec::name() const {
  switch (kind) {
    case Kind::kP1Max:
      return "p1_max";
    case Kind::kP1FubiniStudy:
      return "p1_fubini_study";
    case Kind::kGmMax:
      return "gm_max";
    case Kind::kConstant:
      break;
  }
  return "constant";
}

std::string NCDatum::key(StratumMask m) const {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < components.size(); ++i)
    if (m >> i & 1u) labels.push_back(components[i].label);
  std::sort(labels.begin(), labels.end());
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  return out;
}

StratumMask NCDatum::mask(std::string_view k) const {
  StratumMask out = 0;
  if (k.empty()) return out;
  std::size_t start = 0;
  while (start <= k.size()) {
    const std::size_t end = std::min(k.find(',', start), k.size());
    const auto label = k.substr(start, end - start);
    auto it = std::find_if(components.begin(), components.end(), [&](const auto& c) { return c.label == label; });
    if (it == components.end()) throw InvalidArgument("stratum key names unknown component '" + std::string(label) + "'");
    const auto bit = StratumMask{1} << (it - components.begin());
    if (out & bit) throw InvalidArgument("stratum key repeats component '" + std::string(label) + "'");
    out |= bit;
    start = end + 1;
  }
  return out;
}

StrataCounts NCDatum::strata_at(std::int64_t q) const {
  if (auto it = strata.find(q); it != strata.end()) return it->second;
  if (!strata_poly.empty()) {
    StrataCounts out;
    for (const auto& [m, coeffs] : strata_poly) {
      BigInt v = 0;
      for (auto c = coeffs.rbegin(); c != coeffs.rend(); ++c) v = v * q + *c;
      if (v < 0) throw DataError("stratum polynomial is negative at q = " + std::to_string(q));
      out[m] = v;
    }
    return out;
  }
  if (variety) return count_strata_ff(*variety, boundary, q, bad_primes);
  throw DataError("no stratum counts for q = " + std::to_string(q));
}

NCDatum NCDatum::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("datum must be a JSON object");
  NCDatum d;
  try {
    d.dim = get_unsigned(j, "dim");
    d.rank_M0 = get_unsigned(j, "rank_M0");
    d.rank_M1 = get_unsigned(j, "rank_M1");
    if (!j.contains("components") || !j.at("components").is_array())
      throw InvalidArgument("datum needs a \"components\" array");
    for (const auto& c : j.at("components")) {
      BoundaryComponent comp;
      comp.label = c.at("label").get<std::string>();
      const auto& mult = c.at("d");
      if (!mult.is_number_integer() || mult.get<long long>() < 1)
        throw InvalidArgument("multiplicity of '" + comp.label + "' must be a positive integer");
      comp.d = mult.get<unsigned>();
      if (comp.label.empty() || comp.label.find(',') != std::string::npos)
        throw InvalidArgument("component labels must be nonempty and contain no comma");
      for (const auto& other : d.components)
        if (other.label == comp.label) throw InvalidArgument("duplicate component label '" + comp.label + "'");
      d.components.push_back(std::move(comp));
    }
    if (d.components.size() > 31) throw InvalidArgument("at most 31 boundary components are supported");

    if (j.contains("strata")) {
      for (const auto& [pk, table] : j.at("strata").items()) {
        const auto p = prime_from_key(pk);
        StrataCounts counts;
        for (const auto& [sk, v] : table.items()) {
          BigInt c = count_from_json(v, "stratum count");
          if (c < 0) throw InvalidArgument("stratum counts must be nonnegative");
          counts[d.mask(sk)] = c;
        }
        d.strata[p] = std::move(counts);
      }
    }
    if (j.contains("strata_poly")) {
      for (const auto& [sk, coeffs] : j.at("strata_poly").items()) {
        std::vector<BigInt> cs;
        for (const auto& c : coeffs) cs.push_back(count_from_json(c, "stratum polynomial"));
        d.strata_poly[d.mask(sk)] = std::move(cs);
      }
    }
    if (j.contains("variety")) {
      const auto& v = j.at("variety");
      d.variety = VarietySpec::from_json(v);
      if (v.contains("boundary")) d.boundary = polys_from_json(v.at("boundary"), d.variety->n + 1);
      if (d.boundary.size() != d.components.size())
        throw InvalidArgument("variety needs one boundary polynomial per component");
      if (d.variety->n < d.dim) throw InvalidArgument("variety lives in a projective space smaller than dim");
    }
    if (j.contains("bad_primes")) {
      for (const auto& p : j.at("bad_primes")) {
        const auto v = p.get<std::int64_t>();
        require_prime(v);
        d.bad_primes.insert(v);
      }
    } else if (d.variety) {
      d.bad_primes = default_bad_primes(*d.variety, d.boundary);
    }
    if (j.contains("archimedean")) {
      const auto& a = j.at("archimedean");
      if (a.is_number()) {
        d.archimedean = ArchimedeanSpec{ArchimedeanSpec::Kind::kConstant, a.get<double>()};
      } else {
        d.archimedean = ArchimedeanSpec::parse(a.get<std::string>());
      }
    }
    if (j.contains("bad_local_factors")) {
      for (const auto& [pk, v] : j.at("bad_local_factors").items()) {
        const auto p = prime_from_key(pk);
        const double f = v.get<double>();
        if (!(f > 0)) throw InvalidArgument("bad local factors must be positive");
        d.bad_local_factors[p] = f;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed datum: ") + e.what());
  }
  return d;
}

nlohmann::json NCDatum::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["components"] = nlohmann::json::array();
  for (const auto& c : components) j["components"].push_back({{"label", c.label}, {"d", c.d}});
  j["rank_M0"] = rank_M0;
  j["rank_M1"] = rank_M1;
  j["bad_primes"] = bad_primes;
  j["strata"] = nlohmann::json::object();
  for (const auto& [p, counts] : strata) {
    auto& t = j["strata"][std::to_string(p)];
    t = nlohmann::json::object();
    for (const auto& [m, c] : counts) t[key(m)] = c.fits_slong_p() ? nlohmann::json(c.get_si()) : nlohmann::json(c.get_str());
  }
  if (!strata_poly.empty()) {
    for (const auto& [m, coeffs] : strata_poly) {
      auto& arr = j["strata_poly"][key(m)];
      arr = nlohmann::json::array();
      for (const auto& c : coeffs) arr.push_back(c.fits_slong_p() ? nlohmann::json(c.get_si()) : nlohmann::json(c.get_str()));
    }
  }
  if (variety) {
    j["variety"] = variety->to_json();
    j["variety"]["boundary"] = nlohmann::json::array();
    for (const auto& b : boundary) j["variety"]["boundary"].push_back(b.to_json());
  }
  if (archimedean.kind == ArchimedeanSpec::Kind::kConstant) {
    j["archimedean"] = archimedean.constant;
  } else {
    j["archimedean"] = archimedean.name();
  }
  for (const auto& [p, f] : bad_local_factors) j["bad_local_factors"][std::to_string(p)] = f;
  return j;
}

StrataCounts count_strata_ff(const VarietySpec& spec, std::span<const Polynomial> boundary, std::int64_t p,
                             const std::set<std::int64_t>& bad_primes) {
  require_prime(p);
  if (bad_primes.count(p))
    throw InvalidArgument("p = " + std::to_string(p) + " is a bad prime; stratum counts there are not used");
  if (boundary.size() > 31) throw InvalidArgument("at most 31 boundary components are supported");
  const unsigned w = spec.n + 1;
  for (const auto& b : boundary)
    if (b.num_vars() != w) throw InvalidArgument("boundary polynomial has the wrong number of variables");
  // #P^n(F_p) = 1 + p + ... + p^n
  std::uint64_t total = 0, pk = 1;
  for (unsigned i = 0; i < w; ++i) {
    total += pk;
    if (total > kMaxFieldPoints) throw ResourceError("P^" + std::to_string(spec.n) + "(F_" + std::to_string(p) +
                                                     ") has more than 1e8 points");
    if (i + 1 < w) pk *= static_cast<std::uint64_t>(p);
  }
  StrataCounts out;
  std::vector<std::uint64_t> tally(std::size_t{1} << boundary.size(), 0);
  std::vector<std::int64_t> x(w);
  // Points with first nonzero coordinate 1 at position lead.
  for (unsigned lead = 0; lead < w; ++lead) {
    std::fill(x.begin(), x.end(), 0);
    x[lead] = 1;
    while (true) {
      bool on_x = true;
      for (const auto& f : spec.polys) {
        if (f.evaluate_mod(x, p) != 0) {
          on_x = false;
          break;
        }
      }
      if (on_x) {
        StratumMask m = 0;
        for (std::size_t i = 0; i < boundary.size(); ++i)
          if (boundary[i].evaluate_mod(x, p) == 0) m |= StratumMask{1} << i;
        ++tally[m];
      }
      unsigned i = w;
      while (i > lead + 1 && x[i - 1] == p - 1) x[--i] = 0;
      if (i == lead + 1) break;
      ++x[i - 1];
    }
  }
  for (std::size_t m = 0; m < tally.size(); ++m)
    if (tally[m]) out[static_cast<StratumMask>(m)] = BigInt(std::to_string(tally[m]));
  return out;
}

std::set<std::int64_t> default_bad_primes(const VarietySpec& spec, std::span<const Polynomial> boundary) {
  std::set<std::int64_t> out;
  auto scan = [&](const Polynomial& f) {
    for (const auto& t : f.terms()) {
      const BigInt c = ::abs(t.coeff);
      if (c <= 1) continue;
      for (const auto& [p, e] : factorize(c)) out.insert(p.get_si());
    }
  };
  for (const auto& f : spec.polys) scan(f);
  for (const auto& f : boundary) scan(f);
  return out;
}

LocalZetaValue denef_local_zeta(const NCDatum& datum, std::int64_t q, std::complex<double> s) {
  require_prime(q);
  if (!datum.is_good(q)) throw InvalidArgument("q = " + std::to_string(q) + " is a bad prime for this datum");
  const auto counts = datum.strata_at(q);
  const double qd = static_cast<double>(q);
  const double lq = std::log(qd);
  std::vector<std::complex<double>> factor(datum.components.size());
  for (std::size_t i = 0; i < factor.size(); ++i) {
    const auto w = 1.0 + static_cast<double>(datum.components[i].d) * (s - 1.0);
    const auto den = std::exp(w * lq) - 1.0;
    if (std::abs(den) < 1e-13) {
      bool used = false;
      for (const auto& [m, c] : counts) used = used || ((m >> i & 1u) && c != 0);
      if (used)
        throw PoleError("pole of the local factor of component '" + datum.components[i].label + "' at q = " +
                            std::to_string(q),
                        datum.components[i].label);
      continue;
    }
    factor[i] = (qd - 1.0) / den;
  }
  std::complex<double> sum = 0;
  for (const auto& [m, c] : counts) {
    if (c == 0) continue;
    std::complex<double> term = c.get_d();
    for (std::size_t i = 0; i < factor.size(); ++i)
      if (m >> i & 1u) term *= factor[i];
    sum += term;
  }
  return LocalZetaValue{s, sum * std::pow(qd, -static_cast<double>(datum.dim)), q};
}

Rational denef_local_zeta_exact(const NCDatum& datum, std::int64_t q, const Rational& s) {
  require_prime(q);
  if (!datum.is_good(q)) throw InvalidArgument("q = " + std::to_string(q) + " is a bad prime for this datum");
  const auto counts = datum.strata_at(q);
  const Rational qr{static_cast<long>(q)};
  std::vector<std::optional<Rational>> factor(datum.components.size());
  for (std::size_t i = 0; i < factor.size(); ++i) {
    const Rational shift = Rational(static_cast<long>(datum.components[i].d)) * (s - Rational(1));
    if (shift.den() != 1) throw InvalidArgument("exact evaluation needs d_a (s - 1) to be an integer");
    const long e = 1 + shift.num().get_si();
    if (e == 0) continue;  // pole; only an error if the stratum is populated
    factor[i] = (qr - Rational(1)) / (qr.pow(e) - Rational(1));
  }
  Rational sum;
  for (const auto& [m, c] : counts) {
    if (c == 0) continue;
    Rational term{c};
    for (std::size_t i = 0; i < factor.size(); ++i) {
      if (!(m >> i & 1u)) continue;
      if (!factor[i])
        throw PoleError("pole of the local factor of component '" + datum.components[i].label + "'",
                        datum.components[i].label);
      term = term * *factor[i];
    }
    sum = sum + term;
  }
  return sum * qr.pow(-static_cast<long>(datum.dim));
}

double convergence_factor(unsigned rank_M0, unsigned rank_M1, std::int64_t q) {
  if (q < 2) throw InvalidArgument("convergence factor needs q >= 2");
  return std::pow(1.0 - 1.0 / static_cast<double>(q), static_cast<double>(rank_M1) - static_cast<double>(rank_M0));
}

Rational convergence_factor_exact(unsigned rank_M0, unsigned rank_M1, std::int64_t q) {
  if (q < 2) throw InvalidArgument("convergence factor needs q >= 2");
  const Rational base = Rational(1) - Rational(1, static_cast<long>(q));
  return base.pow(static_cast<long>(rank_M1) - static_cast<long>(rank_M0));
}

RegularizedProduct regularized_euler_product(const NCDatum& datum, std::complex<double> s, std::int64_t prime_cutoff,
                                             unsigned threads) {
  check_cutoff(prime_cutoff);
  const bool real = s.imag() == 0.0;
  if (real && s.real() < 1.0) throw DomainError("the Euler product is evaluated only for real s >= 1");
  if (!real && s.real() < 1.05) throw DomainError("complex s needs Re(s) >= 1.05");

  const auto primes = primes_up_to(prime_cutoff);
  const auto logs = log_phi_factors(datum, primes, s, threads);
  std::complex<double> log_phi = 0;
  for (const auto& l : logs) log_phi += l;

  RegularizedProduct out;
  out.s = s;
  out.pole_order = datum.pole_order();
  out.regular_part = std::exp(log_phi);
  out.prime_cutoff = prime_cutoff;
  out.primes_used = primes.size();

  if (real && s.real() == 1.0) {
    const double z_inf = archimedean_value<double>(datum.archimedean, 1.0);
    const double lead = out.regular_part.real() * z_inf / prod_multiplicities(datum);
    out.leading = lead;
    if (out.pole_order == 0) out.assembled = out.regular_part * z_inf;
    return out;
  }
  std::complex<double> zetas = 1.0;
  for (const auto& c : datum.components) {
    const auto arg = 1.0 + static_cast<double>(c.d) * (s - 1.0);
    zetas *= real ? std::complex<double>(riemann_zeta(arg.real())) : riemann_zeta(arg);
  }
  const std::complex<double> z_inf = real ? std::complex<double>(archimedean_value<double>(datum.archimedean, s.real()))
                                          : archimedean_value<std::complex<double>>(datum.archimedean, s);
  out.assembled = zetas * out.regular_part * z_inf;
  return out;
}

nlohmann::json LeadingConstant::to_json() const {
  return {{"leading_constant", value}, {"tau", tau},         {"archimedean", archimedean},
          {"euler_product", euler_product}, {"pole_order", pole_order}, {"prod_d", prod_d},
          {"tail_bound", tail_bound},      {"prime_cutoff", prime_cutoff}};
}

LeadingConstant leading_constant(const NCDatum& datum, std::int64_t prime_cutoff, unsigned threads) {
  check_cutoff(prime_cutoff);
  const auto primes = primes_up_to(prime_cutoff);
  const auto logs = log_phi_factors(datum, primes, 1.0, threads);
  double log_phi = 0;
  double C = 0;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    log_phi += logs[i].real();
    if (2 * primes[i] > prime_cutoff && datum.is_good(primes[i]))
      C = std::max(C, std::pow(static_cast<double>(primes[i]), 1.5) * std::abs(logs[i].real()));
  }
  LeadingConstant out;
  out.euler_product = std::exp(log_phi);
  out.archimedean = archimedean_value<double>(datum.archimedean, 1.0);
  out.tau = out.euler_product * out.archimedean;
  out.prod_d = prod_multiplicities(datum);
  out.value = out.tau / out.prod_d;
  out.pole_order = datum.pole_order();
  out.tail_bound = std::expm1(C * prime_tail_sum(static_cast<double>(prime_cutoff)));
  out.prime_cutoff = prime_cutoff;
  return out;
}

double volume_prediction(double leading, std::size_t pole_order, double B) {
  if (pole_order < 1) throw DomainError("volume asymptotic needs at least one boundary component");
  if (!(B > 1.0)) throw InvalidArgument("volume asymptotic needs B > 1");
  const double a = static_cast<double>(pole_order);
  return leading * B * std::pow(std::log(B), a - 1.0) / std::tgamma(a);
}

double volume_asymptotic(const NCDatum& datum, double B, std::int64_t prime_cutoff, unsigned threads) {
  if (!(B > 1.0)) throw InvalidArgument("volume asymptotic needs B > 1");
  if (datum.pole_order() < 1) throw DomainError("volume asymptotic needs at least one boundary component");
  return volume_prediction(leading_constant(datum, prime_cutoff, threads).value, datum.pole_order(), B);
}

}  // namespace heights
