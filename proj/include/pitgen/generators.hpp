#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pitgen/poly.hpp"
#include "pitgen/unipoly.hpp"

namespace pitgen {

// A contiguous run of seed variables.  role: 't' and 's' mark the monomial
// block and the interpolating block of a monomial map; 'y', 'z', 'u' are the
// SV, SV-selector and hash-selector blocks.
struct SeedBlock {
  std::string name;
  char role = 't';
  std::size_t offset = 0;
  std::size_t size = 0;
};

struct Factor {
  enum class Kind { power, indicator, select };
  Kind kind = Kind::power;
  std::size_t var = 0;
  std::uint32_t power = 1;
  // indicator: L_index(var^power) over nodesets[nodes]
  // select:    sum_k L_k(sel) * var^table[k] over nodesets[nodes]
  std::size_t nodes = 0;
  std::size_t index = 0;
  std::size_t sel = 0;
  std::shared_ptr<const std::vector<std::uint32_t>> table;
};

struct GTerm {
  Felt coef;
  std::vector<Factor> factors;
};

struct GeneratorMap {
  Field field{2};
  std::vector<SeedBlock> blocks;
  std::vector<std::vector<GTerm>> components;
  std::vector<std::shared_ptr<const NodeSet>> nodesets;
  // When set, seeds are first mapped through this map and the factors read
  // its outputs (used to put a variable reducer in front of a generator).
  std::optional<PolyMap> inner;
  std::string explicitness;

  std::size_t out_arity() const { return components.size(); }
  std::size_t seed_count() const;
  // Arity the factors index: inner ? inner->out_arity() : seed_count().
  std::size_t factor_arity() const;
  const SeedBlock& block(const std::string& name) const;
  void validate() const;
};

std::vector<Felt> evaluate(const GeneratorMap& g, const std::vector<Felt>& seed);

// Components as polynomials in the seed variables; seeds listed in `fixed`
// are replaced by the given values (they stay in the ring, with degree 0).
PolyMap expand(const GeneratorMap& g, const std::map<std::size_t, Felt>& fixed = {});

// profile[i][v] bounds deg_{seed v}(component i).
using DegreeProfile = std::vector<std::vector<std::uint64_t>>;
DegreeProfile degree_profile(const GeneratorMap& g);

// Disjoint-seed sum: seeds of b follow those of a, components are added.
GeneratorMap add(const GeneratorMap& a, const GeneratorMap& b);
// Keep only the first n components.
GeneratorMap truncate(const GeneratorMap& g, std::size_t n);
GeneratorMap identity_generator(const Field& f, std::size_t n);

// Component k (1..n) = sum_j 1{z_j = xi_k} y_j with xi_0..xi_n = 0..n.
GeneratorMap sv_generator(const Field& f, std::size_t n, std::size_t ell);

u64 ks_prime(std::size_t n, std::uint32_t d, u64 sparsity);
// x_i <- prod_j t_j^(k_j^i mod p_KS) with k_j selected by s_j over Z_{p_KS}.
GeneratorMap ks_generator(const Field& f, std::size_t n, std::uint32_t d, u64 sparsity, std::size_t m = 1);

struct MonomialMapKind {
  enum class Type { ell_wise, total_degree };
  Type type = Type::ell_wise;
  std::size_t ell = 1;     // ell_wise
  std::uint32_t d = 2;     // individual degree < d
  std::uint32_t D = 0;     // total_degree: |a|_1 < D
  static MonomialMapKind ell_wise(std::size_t ell, std::uint32_t d) { return {Type::ell_wise, ell, d, 0}; }
  static MonomialMapKind total_degree(std::uint32_t D, std::uint32_t d = 0) {
    return {Type::total_degree, 0, d ? d : D, D};
  }
};

// Candidate values of each s-role seed: the nodes it is interpolated over.
std::vector<std::vector<Felt>> interpolation_cube(const GeneratorMap& g);

// Under s = s_values, every component in `vars` is a single nonzero
// t-monomial and the exponent vectors of x^a, a over `universe`, are
// pairwise distinct.
bool separates(const GeneratorMap& g, const std::vector<Felt>& s_values, const std::vector<std::size_t>& vars,
               const std::vector<Exponents>& universe);

bool certify_monomial_map(const GeneratorMap& g, const MonomialMapKind& kind);

struct TotalDegreeCertificate {
  std::uint32_t D = 0;
  std::uint32_t d = 0;
  std::vector<Felt> s_values;
};
std::optional<TotalDegreeCertificate> find_total_degree_seed(const GeneratorMap& g, std::uint32_t D,
                                                             std::uint32_t d);

struct HashFamily {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<std::uint32_t>> members;
};

std::size_t hash_range(std::size_t ell);
HashFamily pairwise_hash_family(std::size_t n, std::size_t ell);
// Every ell-subset of [n] is separated by some member (exhaustive).
bool is_perfect(const HashFamily& fam, std::size_t ell);

// Seeds y_1..y_m, z_1..z_m, u.  With kronecker_D > 0 the z block is dropped
// and z_j <- y_j^D is substituted.
GeneratorMap hashing_generator(const Field& f, std::size_t n, std::size_t m, const HashFamily& fam,
                               std::uint32_t kronecker_D = 0);
std::uint32_t hashing_kronecker_degree(std::size_t n, std::uint32_t d);

GeneratorMap merge_reduce_generator(std::size_t N, std::uint32_t d, u64 r, const GeneratorMap& base,
                                    const TotalDegreeCertificate& cert);

struct UnknownOrderParams {
  std::size_t padded_n = 0;
  std::uint32_t D = 0;      // 2d(floor(lg r^2) + 1)
  u64 sparsity = 0;
  u64 ks_prime = 0;
  std::size_t sv_ell = 0;   // floor(lg r^2) + 1
  u64 field_bound = 0;      // smallest admissible p
};
UnknownOrderParams unknown_order_params(std::size_t N, std::uint32_t d, u64 r);
// include_sv = false drops the SV summand (used only as a broken control).
GeneratorMap unknown_order_generator(const Field& f, std::size_t N, std::uint32_t d, u64 r, bool include_sv = true);

std::size_t commutative_ell(u64 r);
GeneratorMap commutative_generator(const Field& f, std::size_t n, std::uint32_t d, u64 r);

struct VariableReducer {
  std::string name;
  bool deterministic = true;
  // Map from the reducer's seeds onto m variables.
  std::function<PolyMap(const Field&, std::size_t m)> make;
  std::function<std::size_t(std::size_t m)> declared_seeds;
  std::uint32_t declared_degree = 1;
};
VariableReducer grid_reducer();
// y_j <- a_j + b_j w on a random line; a nonzero polynomial of degree D
// survives with probability at least 1 - D/p.
VariableReducer random_line_reducer(u64 seed);

GeneratorMap hplusfs_generator(const Field& f, std::size_t n, std::uint32_t d, std::size_t ell,
                               const VariableReducer& reducer);

struct DegreeBounds {
  std::uint64_t individual = 0;  // e: deg_{x_i} f <= e
  std::uint64_t total = 0;       // deg f <= D
};

// Greedy bound on deg_v(f o g) from the degree profile.
std::vector<std::uint64_t> composed_degrees(const GeneratorMap& g, const DegreeBounds& b);

// The product cube of seed values 0..count-1 (1..count where nonzero is
// requested), pushed through the generator.
class PointSet {
 public:
  PointSet(GeneratorMap g, std::vector<std::uint64_t> counts, std::vector<bool> nonzero = {});

  const GeneratorMap& generator() const { return g_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::size_t arity() const { return g_.out_arity(); }
  std::string size_string() const;
  // Empty when the size does not fit in 64 bits.
  std::optional<u64> size_u64() const;

  // Mixed radix, last seed fastest.  nullopt if index >= size.
  std::optional<std::vector<std::uint64_t>> digits(u64 index) const;
  std::vector<Felt> seed_at(const std::vector<std::uint64_t>& digits) const;
  std::vector<Felt> point_at(const std::vector<std::uint64_t>& digits) const;
  std::vector<Felt> point(u64 index) const;
  // Odometer step; false after the last point.
  bool next(std::vector<std::uint64_t>& digits) const;

 private:
  GeneratorMap g_;
  std::vector<std::uint64_t> counts_;
  std::vector<bool> nonzero_;
};

PointSet gen_to_hitting_set(const GeneratorMap& g, const DegreeBounds& b);

}  // namespace pitgen
