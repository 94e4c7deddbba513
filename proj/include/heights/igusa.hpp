#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heights/arith.hpp"
#include "heights/variety.hpp"

namespace heights {

// Strata are indexed by bitmasks over the component list: bit i set means
// component i vanishes on the stratum.
using StratumMask = std::uint32_t;
using StrataCounts = std::map<StratumMask, BigInt>;

struct BoundaryComponent {
  std::string label;
  unsigned d = 1;  // multiplicity in L
};

// phi(x)^{s-1} omega(x) over a box of dimension 1 or 2 (bounds may be infinite).
struct Chart {
  std::vector<std::pair<double, double>> box;
  std::function<double(std::span<const double>)> phi;
  std::function<double(std::span<const double>)> omega;
};

// Sum over charts. The integral converges for s > threshold.
struct ArchimedeanIntegrand {
  std::vector<Chart> charts;
  double threshold = 0.0;
};

// int_R max(1,|x|)^{-2s} dx, via the charts x and 1/x.
ArchimedeanIntegrand p1_max_integrand();
// int_R (1+x^2)^{-s} dx.
ArchimedeanIntegrand p1_fubini_study_integrand();
// int_{R^*} max(|x|,1/|x|)^{-s} dx/|x|, the toric height on G_m.
ArchimedeanIntegrand gm_max_integrand();

inline constexpr double kArchimedeanTolerance = 1e-8;

// Throws DomainError for s <= threshold and ResourceError when the
// quadrature does not reach `tol`.
double archimedean_local_zeta(const ArchimedeanIntegrand& integrand, double s, double tol = kArchimedeanTolerance);
std::complex<double> archimedean_local_zeta(const ArchimedeanIntegrand& integrand, std::complex<double> s,
                                            double tol = kArchimedeanTolerance);

struct ArchimedeanSpec {
  enum class Kind { kP1Max, kP1FubiniStudy, kGmMax, kConstant };
  Kind kind = Kind::kConstant;
  double constant = 1.0;  // used by kConstant

  static ArchimedeanSpec parse(std::string_view name);
  std::string name() const;
};

// Normal-crossings datum for Denef's formula at good primes.
struct NCDatum {
  unsigned dim = 0;
  std::vector<BoundaryComponent> components;
  unsigned rank_M0 = 0;  // ranks for the compactification X
  unsigned rank_M1 = 0;
  std::set<std::int64_t> bad_primes;

  // Explicit per-prime counts, taking precedence over the other sources.
  std::map<std::int64_t, StrataCounts> strata;
  // Counts valid at every good prime, as coefficient lists in q.
  std::map<StratumMask, std::vector<BigInt>> strata_poly;
  // X and one polynomial per component; strata by brute force over F_p.
  std::optional<VarietySpec> variety;
  std::vector<Polynomial> boundary;

  ArchimedeanSpec archimedean;
  // Full regularized local factor at a bad prime, s-independent.
  std::map<std::int64_t, double> bad_local_factors;

  std::size_t pole_order() const { return components.size(); }
  bool is_good(std::int64_t p) const { return !bad_primes.count(p); }

  // Stratum key: sorted comma-joined labels ("" for the open stratum).
  std::string key(StratumMask mask) const;
  StratumMask mask(std::string_view key) const;

  // Throws DataError if no source covers q.
  StrataCounts strata_at(std::int64_t q) const;

  // {"dim":1, "components":[{"label":"alpha","d":2}], "rank_M0":0, "rank_M1":1,
  //  "bad_primes":[], "strata":{"5":{"":5,"alpha":1}}}
  // plus the optional "strata_poly", "variety", "archimedean" and
  // "bad_local_factors" fields.
  static NCDatum from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Classifies every point of X(F_p) by the set of boundary components through
// it. Refuses primes in `bad_primes` and spaces with more than 1e8 points.
StrataCounts count_strata_ff(const VarietySpec& spec, std::span<const Polynomial> boundary, std::int64_t p,
                             const std::set<std::int64_t>& bad_primes = {});

// Primes dividing a coefficient of X or of a boundary polynomial.
std::set<std::int64_t> default_bad_primes(const VarietySpec& spec, std::span<const Polynomial> boundary);

struct LocalZetaValue {
  std::complex<double> s;
  std::complex<double> value;
  std::optional<std::int64_t> q;  // absent at the archimedean place
};

// sum_A q^{-dim} #X_A(F_q) prod_{a in A} (q-1)/(q^{1+d_a(s-1)} - 1).
LocalZetaValue denef_local_zeta(const NCDatum& datum, std::int64_t q, std::complex<double> s);
// Exact version for s with every d_a (s-1) an integer (s = 1 in particular).
Rational denef_local_zeta_exact(const NCDatum& datum, std::int64_t q, const Rational& s);

// (1 - 1/q)^{rank_M1 - rank_M0}
double convergence_factor(unsigned rank_M0, unsigned rank_M1, std::int64_t q);
Rational convergence_factor_exact(unsigned rank_M0, unsigned rank_M1, std::int64_t q);

struct RegularizedProduct {
  std::complex<double> s;
  std::size_t pole_order = 0;
  std::complex<double> regular_part;         // Phi(s) over primes <= cutoff
  std::optional<std::complex<double>> assembled;  // absent at the pole s = 1
  // At s = 1: lim (s-1)^a Z(s) = prod 1/d_a * Phi(1) * Z_inf(1).
  std::optional<double> leading;
  std::int64_t prime_cutoff = 0;
  std::size_t primes_used = 0;
};

// Phi(s) = prod_{p <= P} lambda_p Z_p(s) prod_a (1 - p^{-(1+d_a(s-1))}),
// accumulated as a sum of logs in increasing prime order, so the result does
// not depend on `threads`. Z(s) = prod_a zeta(1+d_a(s-1)) Phi(s) Z_inf(s).
// Real s must be >= 1, complex s needs Re(s) >= 1.05.
RegularizedProduct regularized_euler_product(const NCDatum& datum, std::complex<double> s,
                                             std::int64_t prime_cutoff, unsigned threads = 0);

struct LeadingConstant {
  double value = 0;          // prod 1/d_a * tau
  double tau = 0;            // Z_inf(1) * Phi(1)
  double archimedean = 0;    // Z_inf(1)
  double euler_product = 0;  // Phi(1)
  std::size_t pole_order = 0;
  double prod_d = 1;
  // Empirical relative bound on the omitted primes, C sum_{p>P} p^{-3/2}
  // with C fitted on (P/2, P]. Not certified.
  double tail_bound = 0;
  std::int64_t prime_cutoff = 0;

  nlohmann::json to_json() const;
};

LeadingConstant leading_constant(const NCDatum& datum, std::int64_t prime_cutoff, unsigned threads = 0);

// leading / (a-1)! * B (log B)^{a-1}; needs a >= 1 and B > 1.
double volume_prediction(double leading, std::size_t pole_order, double B);
double volume_asymptotic(const NCDatum& datum, double B, std::int64_t prime_cutoff, unsigned threads = 0);

}  // namespace heights
