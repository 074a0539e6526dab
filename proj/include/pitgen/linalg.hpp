#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pitgen/field.hpp"

// Exact dense linear algebra over any scalar type that provides is_zero(x)
// and inverse(x) (found by ADL) plus the field operations.

namespace pitgen {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using FMatrix = Matrix<Felt>;
using FVector = Vector<Felt>;

inline FMatrix zeros(const Field& f, Eigen::Index rows, Eigen::Index cols) {
  return FMatrix::Constant(rows, cols, f.zero());
}

inline FMatrix identity(const Field& f, Eigen::Index n) {
  FMatrix m = zeros(f, n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = f.one();
  return m;
}

template <typename Scalar>
struct Echelon {
  Matrix<Scalar> reduced;             // reduced row echelon form
  std::vector<Eigen::Index> pivots;   // pivot column of each nonzero row
};

template <typename Derived>
Echelon<typename Derived::Scalar> row_echelon(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Echelon<Scalar> e{m, {}};
  auto& a = e.reduced;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index piv = row;
    while (piv < a.rows() && is_zero(a(piv, col))) ++piv;
    if (piv == a.rows()) continue;
    a.row(piv).swap(a.row(row));
    Scalar inv = inverse(a(row, col));
    for (Eigen::Index j = col; j < a.cols(); ++j) a(row, j) = a(row, j) * inv;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i == row || is_zero(a(i, col))) continue;
      Scalar factor = a(i, col);
      for (Eigen::Index j = col; j < a.cols(); ++j) a(i, j) = a(i, j) - factor * a(row, j);
    }
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

template <typename Derived>
Eigen::Index rank(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> a = m;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index piv = row;
    while (piv < a.rows() && is_zero(a(piv, col))) ++piv;
    if (piv == a.rows()) continue;
    a.row(piv).swap(a.row(row));
    Scalar inv = inverse(a(row, col));
    for (Eigen::Index i = row + 1; i < a.rows(); ++i) {
      if (is_zero(a(i, col))) continue;
      Scalar factor = a(i, col) * inv;
      for (Eigen::Index j = col; j < a.cols(); ++j) a(i, j) = a(i, j) - factor * a(row, j);
    }
    ++row;
  }
  return row;
}

template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> a = m;
  Scalar det(1);
  for (Eigen::Index col = 0; col < a.cols(); ++col) {
    Eigen::Index piv = col;
    while (piv < a.rows() && is_zero(a(piv, col))) ++piv;
    if (piv == a.rows()) return Scalar(0) * det;
    if (piv != col) {
      a.row(piv).swap(a.row(col));
      det = -det;
    }
    det = det * a(col, col);
    Scalar inv = inverse(a(col, col));
    for (Eigen::Index i = col + 1; i < a.rows(); ++i) {
      if (is_zero(a(i, col))) continue;
      Scalar factor = a(i, col) * inv;
      for (Eigen::Index j = col; j < a.cols(); ++j) a(i, j) = a(i, j) - factor * a(col, j);
    }
  }
  return det;
}

// Throws DivisionByZero when m is singular.
template <typename Derived>
Matrix<typename Derived::Scalar> inverse_exact(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw PreconditionError("inverse of a non-square matrix");
  Matrix<Scalar> aug(n, 2 * n);
  aug.leftCols(n) = m;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) aug(i, n + j) = Scalar(i == j ? 1 : 0);
  auto e = row_echelon(aug);
  if (static_cast<Eigen::Index>(e.pivots.size()) < n || (n > 0 && e.pivots[n - 1] != n - 1))
    throw DivisionByZero("singular matrix");
  return e.reduced.rightCols(n);
}

// Columns listed in `cols`, in that order.
template <typename Derived>
Matrix<typename Derived::Scalar> select_columns(const Eigen::MatrixBase<Derived>& m,
                                                const std::vector<Eigen::Index>& cols) {
  Matrix<typename Derived::Scalar> out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = m.col(cols[k]);
  return out;
}

template <typename Derived>
Matrix<typename Derived::Scalar> select_rows(const Eigen::MatrixBase<Derived>& m,
                                             const std::vector<Eigen::Index>& rows) {
  Matrix<typename Derived::Scalar> out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = m.row(rows[k]);
  return out;
}

}  // namespace pitgen
