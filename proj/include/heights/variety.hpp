#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heights/arith.hpp"
#include "json.hpp"

namespace heights {

struct Term {
  BigInt coeff;
  std::vector<unsigned> exponents;  // one per homogeneous coordinate
};

// Homogeneous polynomial in n+1 variables with integer coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  // Merges like terms and drops zero coefficients. Throws InvalidArgument if
  // the result is zero, a term has the wrong arity, or degrees differ.
  Polynomial(std::size_t num_vars, std::vector<Term> terms);

  std::size_t num_vars() const { return num_vars_; }
  unsigned degree() const { return degree_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_constant() const { return degree_ == 0; }
  // Largest exponent of x_var over all terms.
  unsigned degree_in(std::size_t var) const;

  BigInt evaluate(std::span<const BigInt> x) const;
  // Value mod p in [0, p), for 0 < p < 2^62.
  std::int64_t evaluate_mod(std::span<const std::int64_t> x, std::int64_t p) const;

  nlohmann::json to_json() const;
  static Polynomial from_json(const nlohmann::json& j, std::size_t num_vars);

 private:
  std::size_t num_vars_ = 0;
  unsigned degree_ = 0;
  std::vector<Term> terms_;
};

// A locally closed subscheme X \ (Y_1 u ... u Y_k) of P^n, with X and each
// Y_i cut out by homogeneous polynomials.
struct VarietySpec {
  unsigned n = 1;
  std::vector<Polynomial> polys;
  std::vector<std::vector<Polynomial>> excluded;

  static VarietySpec projective_space(unsigned n) { return VarietySpec{n, {}, {}}; }

  bool is_full_projective_space() const { return polys.empty() && excluded.empty(); }
  // Whether a (nonzero) integer vector lies on X and off every Y_i.
  bool contains(std::span<const BigInt> x) const;

  // {"n": 3, "polys": [{"terms": [{"c": 1, "e": [1,0,1,0]}, ...]}], "excluded": []}
  nlohmann::json to_json() const;
  static VarietySpec from_json(const nlohmann::json& j);
};

std::vector<Polynomial> polys_from_json(const nlohmann::json& j, std::size_t num_vars);

}  // namespace heights
