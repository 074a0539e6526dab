#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pitgen/binomial.hpp"
#include "pitgen/field.hpp"
#include "pitgen/unipoly.hpp"

namespace pitgen {

using Exponents = std::vector<std::uint32_t>;

int support_size(const Exponents& a);                    // |a|_0
std::uint64_t total_degree(const Exponents& a);          // |a|_1
std::uint32_t max_entry(const Exponents& a);             // |a|_inf
// binom(b, a) = prod_i binom(b_i, a_i)
Felt binomial(const Exponents& b, const Exponents& a, const Field& f);

// Expansion cap for anything that multiplies out polynomials: 2e6 terms by
// default, overridden by PIT_TERM_BUDGET.
std::size_t term_budget();

// Every a in {0..d-1}^n, lexicographic.
std::vector<Exponents> all_exponents(std::size_t n, std::uint32_t d);
// The subset with |a|_0 <= max_support.
std::vector<Exponents> exponents_with_support(std::size_t n, std::uint32_t d, int max_support);

// Sparse multivariate polynomial; terms are kept in lexicographic order of
// exponent vectors and zero coefficients are never stored.
class SparsePoly {
 public:
  SparsePoly(const Field& f, std::size_t arity) : field_(f), arity_(arity) {}

  static SparsePoly constant(const Field& f, std::size_t arity, const Felt& c);
  static SparsePoly variable(const Field& f, std::size_t arity, std::size_t i);
  static SparsePoly monomial(const Field& f, const Exponents& a, const Felt& c);

  const Field& field() const { return field_; }
  std::size_t arity() const { return arity_; }
  const std::map<Exponents, Felt>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Felt coeff(const Exponents& a) const;
  void add_term(const Exponents& a, const Felt& c);

  std::uint64_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  std::uint32_t individual_degree() const;

  SparsePoly operator+(const SparsePoly& o) const;
  SparsePoly operator-(const SparsePoly& o) const;
  SparsePoly operator-() const;
  SparsePoly operator*(const SparsePoly& o) const;
  SparsePoly operator*(const Felt& c) const;
  SparsePoly& operator+=(const SparsePoly& o);
  SparsePoly pow(std::uint64_t k) const;
  bool operator==(const SparsePoly& o) const;
  bool operator!=(const SparsePoly& o) const { return !(*this == o); }

  // Same polynomial viewed in a larger ring: variable i goes to slot
  // placement[i] of a ring with new_arity variables.
  SparsePoly embed(std::size_t new_arity, const std::vector<std::size_t>& placement) const;

 private:
  void check_compatible(const SparsePoly& o) const;
  Field field_;
  std::size_t arity_;
  std::map<Exponents, Felt> terms_;
};

// The univariate p(x_var) as an element of the ring with `arity` variables.
SparsePoly lift(const UniPoly& p, std::size_t arity, std::size_t var);

Felt coeff(const SparsePoly& f, const Exponents& a);
Felt eval(const SparsePoly& f, const std::vector<Felt>& point);

// The coefficient of x^b in f(x + t), as a polynomial in x.
SparsePoly hasse_derivative(const SparsePoly& f, const Exponents& b);

// f(x + t) in 2n variables, x-block first, then t-block.
SparsePoly shift_symbolic(const SparsePoly& f);
// f(x + alpha).
SparsePoly shift(const SparsePoly& f, const std::vector<Felt>& alpha);

struct PolyMap {
  std::size_t in_arity = 0;
  std::vector<SparsePoly> components;

  std::size_t out_arity() const { return components.size(); }
  static PolyMap identity(const Field& f, std::size_t n);
};

SparsePoly compose(const SparsePoly& f, const PolyMap& g);

// Substitutes z_j <- y_j^D where z = variables listed in z_block and y = the
// remaining variables in order (equal counts).  The result lives in the
// y-variables only.  Requires every individual degree of f below D.
SparsePoly kronecker_substitute(const SparsePoly& f, const std::vector<std::size_t>& z_block,
                                std::uint32_t D);

}  // namespace pitgen
