#include "heights/variety.hpp"

#include <map>

#include "heights/error.hpp"

namespace heights {

namespace {

BigInt coeff_from_json(const nlohmann::json& c) {
  if (c.is_number_integer()) {
    if (c.is_number_unsigned()) return BigInt(std::to_string(c.get<std::uint64_t>()));
    return BigInt(static_cast<long>(c.get<std::int64_t>()));
  }
  if (c.is_string()) {
    try {
      return BigInt(c.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw InvalidArgument("polynomial coefficient must be an integer: " + c.dump());
}

}  // namespace

Polynomial::Polynomial(std::size_t num_vars, std::vector<Term> terms) : num_vars_(num_vars) {
  std::map<std::vector<unsigned>, BigInt> merged;
  for (auto& t : terms) {
    if (t.exponents.size() != num_vars)
      throw InvalidArgument("term has " + std::to_string(t.exponents.size()) + " exponents, expected " +
                            std::to_string(num_vars));
    merged[t.exponents] += t.coeff;
  }
  bool first = true;
  for (auto& [e, c] : merged) {
    if (c == 0) continue;
    unsigned deg = 0;
    for (auto v : e) deg += v;
    if (first) {
      degree_ = deg;
      first = false;
    } else if (deg != degree_) {
      throw InvalidArgument("polynomial is not homogeneous");
    }
    terms_.push_back(Term{c, e});
  }
  if (terms_.empty()) throw InvalidArgument("polynomial has no nonzero coefficient");
}

unsigned Polynomial::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exponents[var]);
  return d;
}

BigInt Polynomial::evaluate(std::span<const BigInt> x) const {
  BigInt sum = 0;
  for (const auto& t : terms_) {
    BigInt m = t.coeff;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (unsigned k = 0; k < t.exponents[i]; ++k) m *= x[i];
    }
    sum += m;
  }
  return sum;
}

std::int64_t Polynomial::evaluate_mod(std::span<const std::int64_t> x, std::int64_t p) const {
  using i128 = __int128;
  i128 sum = 0;
  for (const auto& t : terms_) {
    BigInt cr;
    mpz_fdiv_r_ui(cr.get_mpz_t(), t.coeff.get_mpz_t(), static_cast<unsigned long>(p));
    i128 m = cr.get_si();
    for (std::size_t i = 0; i < num_vars_; ++i) {
      for (unsigned k = 0; k < t.exponents[i]; ++k) m = m * x[i] % p;
    }
    sum = (sum + m) % p;
  }
  if (sum < 0) sum += p;
  return static_cast<std::int64_t>(sum);
}

nlohmann::json Polynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json c;
    if (t.coeff.fits_slong_p()) {
      c = t.coeff.get_si();
    } else {
      c = t.coeff.get_str();
    }
    terms.push_back({{"c", c}, {"e", t.exponents}});
  }
  return {{"terms", terms}};
}

Polynomial Polynomial::from_json(const nlohmann::json& j, std::size_t num_vars) {
  const nlohmann::json* terms = &j;
  if (j.is_object()) {
    if (!j.contains("terms")) throw InvalidArgument("polynomial object needs \"terms\"");
    terms = &j.at("terms");
  }
  if (!terms->is_array()) throw InvalidArgument("polynomial terms must be an array");
  std::vector<Term> out;
  for (const auto& t : *terms) {
    if (!t.is_object() || !t.contains("c") || !t.contains("e"))
      throw InvalidArgument("term must be {\"c\": int, \"e\": [..]}: " + t.dump());
    Term term;
    term.coeff = coeff_from_json(t.at("c"));
    for (const auto& e : t.at("e")) {
      if (!e.is_number_integer() || e.get<long>() < 0)
        throw InvalidArgument("exponents must be nonnegative integers: " + t.dump());
      term.exponents.push_back(e.get<unsigned>());
    }
    out.push_back(std::move(term));
  }
  return Polynomial(num_vars, std::move(out));
}

std::vector<Polynomial> polys_from_json(const nlohmann::json& j, std::size_t num_vars) {
  const nlohmann::json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("polys")) throw InvalidArgument("expected \"polys\"");
    arr = &j.at("polys");
  }
  if (!arr->is_array()) throw InvalidArgument("\"polys\" must be an array");
  std::vector<Polynomial> out;
  for (const auto& p : *arr) out.push_back(Polynomial::from_json(p, num_vars));
  return out;
}

bool VarietySpec::contains(std::span<const BigInt> x) const {
  for (const auto& p : polys) {
    if (p.evaluate(x) != 0) return false;
  }
  for (const auto& system : excluded) {
    bool all_vanish = true;
    for (const auto& p : system) {
      if (p.evaluate(x) != 0) {
        all_vanish = false;
        break;
      }
    }
    if (all_vanish) return false;
  }
  return true;
}

nlohmann::json VarietySpec::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["polys"] = nlohmann::json::array();
  for (const auto& p : polys) j["polys"].push_back(p.to_json());
  j["excluded"] = nlohmann::json::array();
  for (const auto& sys : excluded) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& p : sys) s.push_back(p.to_json());
    j["excluded"].push_back({{"polys", s}});
  }
  return j;
}

VarietySpec VarietySpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n")) throw InvalidArgument("variety spec needs \"n\"");
  const auto& jn = j.at("n");
  if (!jn.is_number_integer() || jn.get<long>() < 1)
    throw InvalidArgument("\"n\" must be a positive integer");
  VarietySpec spec;
  spec.n = jn.get<unsigned>();
  if (j.contains("polys")) spec.polys = polys_from_json(j.at("polys"), spec.n + 1);
  if (j.contains("excluded")) {
    if (!j.at("excluded").is_array()) throw InvalidArgument("\"excluded\" must be an array");
    for (const auto& sys : j.at("excluded")) spec.excluded.push_back(polys_from_json(sys, spec.n + 1));
  }
  return spec;
}

}  // namespace heights
