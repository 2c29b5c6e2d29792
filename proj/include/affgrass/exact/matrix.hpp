#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "affgrass/exact/polynomial.hpp"
#include "affgrass/exact/rational.hpp"

namespace affgrass::exact {

/// Dense row-major matrix over Q.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> row_major);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(const std::vector<RatVector>& rows);
  static RatMatrix from_columns(std::span<const RatVector> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  std::span<const Rational> entries() const { return entries_; }

  RatVector row(std::size_t i) const;
  RatVector column(std::size_t j) const;

  RatMatrix transpose() const;
  Rational trace() const;
  bool is_zero() const;
  bool is_symmetric() const;

  /// Principal submatrix on the given (sorted) index set.
  RatMatrix principal_submatrix(std::span<const std::size_t> idx) const;

  friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend RatMatrix operator*(const Rational& s, const RatMatrix& a);
  friend RatVector operator*(const RatMatrix& a, const RatVector& v);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b) = default;

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

/// Exact inverse by Gauss-Jordan elimination. Throws SingularMatrix.
RatMatrix inverse(const RatMatrix& a);

/// Exact rank over Q.
std::size_t rank(const RatMatrix& a);

/// Indices of the pivot columns of the row echelon form, ascending: the
/// lexicographically first set of columns that is a basis of the column space.
std::vector<std::size_t> pivot_columns(const RatMatrix& a);

/// Solves a x = b for square nonsingular a. Throws SingularMatrix.
RatVector solve(const RatMatrix& a, const RatVector& b);

/// det(xI - a), monic, via Faddeev-LeVerrier (exact over Q).
RatPolynomial char_poly(const RatMatrix& a);

/// sum_ij a_ij b_ij, i.e. trace(a^T b).
Rational frobenius_inner(const RatMatrix& a, const RatMatrix& b);

}  // namespace affgrass::exact
