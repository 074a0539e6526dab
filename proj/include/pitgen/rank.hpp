#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pitgen/linalg.hpp"
#include "pitgen/poly.hpp"

namespace pitgen {

// entries(a, i) = d_{x^a}(f_i)(anchor) for a = rows[a].
struct DerivMatrix {
  std::vector<Exponents> rows;
  FMatrix entries;
  std::vector<Felt> anchor;
};

DerivMatrix deriv_matrix(const std::vector<SparsePoly>& fvec, const std::vector<Exponents>& rows,
                         const std::vector<Felt>& alpha);

// Rank of the support-<=ell rows of the full {0..d-1}^n derivative matrix
// at alpha equals the rank of the whole matrix.
bool is_rank_concentrated(const std::vector<SparsePoly>& fvec, int ell, const std::vector<Felt>& alpha,
                          std::uint32_t d);

// Rank over F(t) of [d_{x^i}(f_j)(t)]_{i<r, j<r}.  Every minor has degree at
// most r*max(deg), so the maximum rank over that many plus one distinct
// points is exact; this needs p > r*max(deg, 1).
int wronskian_rank(const std::vector<UniPoly>& fs);

// Rows of T_r: exponents in {0..d-1}^n with support <= floor(lg r).
std::vector<Exponents> transfer_rows(std::size_t n, std::uint32_t d, u64 r);

// T(alpha) restricted to `rows`; columns are all of {0..d-1}^n in lex order.
FMatrix transfer_matrix(const Field& f, std::size_t n, std::uint32_t d, const std::vector<Exponents>& rows,
                        const std::vector<Felt>& alpha);
// The same with t symbolic: entry (a, b) is binom(b, a) t^(b-a), n t-variables.
std::vector<std::vector<SparsePoly>> transfer_matrix_symbolic(const Field& f, std::size_t n, std::uint32_t d,
                                                              const std::vector<Exponents>& rows);

// Every r columns linearly independent (exhaustive; data-parallel).
bool check_code_distance(const FMatrix& H, int r);

// H_{i,j} = omega^(i*j), omega a primitive root (order p-1 > cols required).
FMatrix dual_rs_parity(const Field& f, Eigen::Index rows, Eigen::Index cols);

// E(t) = Lambda(t)^{-1} H W(t) with monomial diagonals given as exponent
// vectors over the same t-variables.
struct CondenserSpec {
  Field field{2};
  std::vector<Exponents> lambda;
  FMatrix H;
  std::vector<Exponents> W;
  int r = 0;

  std::size_t t_vars() const;
  void validate() const;
};

FMatrix condenser_at(const CondenserSpec& spec, const std::vector<Felt>& t);

// Per t-variable, max over k <= r of (sum of the k largest W-degrees) minus
// (sum of the k smallest); the cube C_i = {1, ..., span_i + 1}.
std::vector<u64> condenser_cube(const CondenserSpec& spec);

struct RankReport {
  std::size_t rank_M = 0;
  std::size_t rank_EM = 0;
  u64 trials = 0;
  std::vector<u64> cube;
  std::optional<std::vector<Felt>> point;  // the cube point that achieved rank_EM
};

// t0 empty: walk the cube in index order until rank(E(t) M) = rank(M).
RankReport condense(const CondenserSpec& spec, const FMatrix& M, const std::vector<Felt>& t0 = {});

struct PartialId {
  std::size_t i0 = 0;          // 0-based
  std::vector<std::size_t> S;  // sorted coordinates
};

// Throws PreconditionError on duplicates or ragged input.
PartialId partial_id(const std::vector<std::vector<std::uint32_t>>& strings);

// Binary strings of length <= 6 packed as the low bits of an integer; the
// family is a 64-bit mask over the 64 possible strings.  Same tie-breaking as
// partial_id.  Returns i0 as the string value and S as a coordinate mask.
struct PackedPartialId {
  unsigned i0;
  unsigned S;
};
PackedPartialId partial_id_packed(std::uint64_t family);
// Results for every family base | {b} with b in candidates (bit set, b not in
// base); out[b] receives them.  base must have popcount >= 1.
void partial_id_extend(std::uint64_t base, std::uint64_t candidates, PackedPartialId out[64]);

// Linear combination of Hasse derivatives.
struct DiffOperator {
  std::map<Exponents, Felt> terms;
};

// Delta(x^b)(1) = sum_a c_a binom(b, a).
Felt apply_at_ones(const DiffOperator& op, const Exponents& b, const Field& f);
SparsePoly apply(const DiffOperator& op, const SparsePoly& f);

// Delta_j(x^i)(1) = [i == j] for i < d (one variable).
DiffOperator univar_isolating_operator(const Field& f, std::uint32_t d, std::uint32_t j);

struct IsolatingFamily {
  std::vector<std::size_t> perm;  // perm[i] = index of the monomial isolated by ops[i]
  std::vector<DiffOperator> ops;
  std::vector<std::vector<std::size_t>> supports;  // variable set of each operator
};

// ops[i](x^{b_perm[j]})(1) = 1 if i == j and 0 if j < i.
IsolatingFamily isolating_family(const Field& f, const std::vector<Exponents>& monomials, std::uint32_t d);

// Lexicographic monomial order on weights: (1,0) > (0,k) for all k.
bool weight_less(const Exponents& a, const Exponents& b);

// Weight-minimizing column basis of M (weight of a set = product of the
// column weights).  `distinct_block` lists the columns I whose weights are
// pairwise distinct and below every other weight, with rank(M|_I) = rank(M);
// empty means every column is in I.
std::vector<Eigen::Index> greedy_min_basis(const FMatrix& M, const std::vector<Exponents>& w,
                                           const std::vector<Eigen::Index>& distinct_block = {});

}  // namespace pitgen
