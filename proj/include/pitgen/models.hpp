#pragma once

#include <cstdint>
#include <vector>

#include "pitgen/linalg.hpp"
#include "pitgen/poly.hpp"

namespace pitgen {

// One ROABP layer: the matrix polynomial sum_k coeffs[k] * x^k.
struct MatrixLayer {
  std::vector<FMatrix> coeffs;

  Eigen::Index rows() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
  Eigen::Index cols() const { return coeffs.empty() ? 0 : coeffs.front().cols(); }
  FMatrix at(const Felt& x) const;
  UniPoly entry(const Field& f, Eigen::Index i, Eigen::Index j) const;
};

// Product of layers; layer i reads variable order[i].  Layers may be
// rectangular as long as consecutive shapes chain.
struct MatrixRoabp {
  Field field{2};
  std::size_t n = 0;
  std::uint32_t d = 1;  // entries have degree < d
  std::vector<std::size_t> order;
  std::vector<MatrixLayer> layers;

  Eigen::Index width() const;
  void validate() const;
};

// Scalar output left * prod(layers) * right.
struct Roabp {
  MatrixRoabp m;
  FVector left;
  FVector right;

  void validate() const;
};

// Layer i is sum_j coeffs[i][j] * x_{partition[i][j]}.
struct Smabp {
  Field field{2};
  std::size_t sets = 0;      // d in the usual notation
  std::size_t set_size = 0;  // n
  Eigen::Index r = 0;
  std::vector<std::vector<std::size_t>> partition;
  std::vector<std::vector<FMatrix>> coeffs;
  FVector left;
  FVector right;

  std::size_t arity() const { return sets * set_size; }
  void validate() const;
};

// sum_i (c_0 + c_1 x_1 + ... + c_n x_n)^power_i
struct DiagonalTerm {
  std::vector<Felt> coeffs;  // constant first
  std::uint32_t power = 0;
};

struct DiagonalCircuit {
  Field field{2};
  std::size_t n = 0;
  std::vector<DiagonalTerm> terms;

  void validate() const;
};

FMatrix roabp_eval_matrix(const MatrixRoabp& m, const std::vector<Felt>& point);
Felt roabp_eval(const Roabp& m, const std::vector<Felt>& point);

// Entries of the product in row-major order.
std::vector<SparsePoly> roabp_expand_matrix(const MatrixRoabp& m);
SparsePoly roabp_expand(const Roabp& m);

// Same layers, read in a different order (layer i now reads order[i]).
Roabp reorder(const Roabp& m, const std::vector<std::size_t>& order);

SparsePoly smabp_expand(const Smabp& s);
Felt smabp_eval(const Smabp& s, const std::vector<Felt>& point);
Roabp smabp_to_roabp(const Smabp& s);

SparsePoly diagonal_to_poly(const DiagonalCircuit& c);
Felt diagonal_eval(const DiagonalCircuit& c, const std::vector<Felt>& point);

// dim span{ d_{x^a} f } over all a.
std::size_t partial_derivative_dim(const SparsePoly& f);

// A ROABP for f reading variables in `order`, built from the coefficient
// spaces at each cut; its width at cut k is the rank of the prefix/suffix
// coefficient matrix, which never exceeds partial_derivative_dim(f).
Roabp roabp_from_poly(const SparsePoly& f, const std::vector<std::size_t>& order);

enum class ModelKind { roabp, commutative, smabp, diagonal };

struct RandomModel {
  ModelKind kind = ModelKind::roabp;
  Roabp roabp;
  Smabp smabp;
  DiagonalCircuit diagonal;
  // Set for ModelKind::commutative: the layers are P D_i(x_i) P^{-1} with D_i
  // diagonal, so they commute and the polynomial is the same in every order.
  bool commutativity_witness = false;
};

// Deterministic in seed.  For roabp/commutative: n variables, entries of
// degree < d, width r.  For smabp: d sets of n variables, width r.  For
// diagonal: r terms with powers in 1..d.
RandomModel random_model(ModelKind kind, const Field& f, std::size_t n, std::uint32_t d,
                         Eigen::Index r, u64 seed);

}  // namespace pitgen
