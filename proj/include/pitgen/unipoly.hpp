#pragma once

#include <vector>

#include "pitgen/field.hpp"

namespace pitgen {

// Dense univariate polynomial; coeffs()[i] multiplies z^i.
class UniPoly {
 public:
  explicit UniPoly(const Field& f) : field_(f) {}
  UniPoly(const Field& f, std::vector<Felt> coeffs);

  static UniPoly constant(const Field& f, Felt c);
  static UniPoly monomial(const Field& f, int degree, Felt c);

  const Field& field() const { return field_; }
  const std::vector<Felt>& coeffs() const { return c_; }
  // -1 for the zero polynomial
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Felt coeff(int i) const;
  Felt eval(const Felt& z) const;

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly operator*(const Felt& c) const;
  bool operator==(const UniPoly& o) const { return field_ == o.field_ && c_ == o.c_; }

  // Hasse derivative of order k: sum_i binom(i, k) c_i z^(i-k).
  UniPoly hasse(int k) const;

 private:
  void trim();
  Field field_;
  std::vector<Felt> c_;
};

// Distinct interpolation nodes with precomputed barycentric weights, so that
// all indicators 1{z = node_k} can be evaluated together in O(K).
class NodeSet {
 public:
  NodeSet(const Field& f, std::vector<Felt> nodes);
  // The nodes 0, 1, ..., K-1 (requires K <= p); weights from factorials.
  static NodeSet range(const Field& f, u64 K);

  const Field& field() const { return field_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Felt>& nodes() const { return nodes_; }

  // The Lagrange polynomial for node k, degree size()-1.
  UniPoly indicator(std::size_t k) const;
  // L_k(z) for every k.
  std::vector<Felt> indicator_values(const Felt& z) const;

 private:
  Field field_;
  std::vector<Felt> nodes_;
  std::vector<Felt> weights_;  // 1 / prod_{j != k} (x_k - x_j)
};

// The polynomial L with L(points[j]) = 1 if j == k and 0 otherwise.
UniPoly lagrange_indicator(const std::vector<Felt>& points, std::size_t k);

}  // namespace pitgen
