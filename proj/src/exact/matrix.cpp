#include "affgrass/exact/matrix.hpp"

#include <utility>

#include "affgrass/errors.hpp"

namespace affgrass::exact {

namespace {

std::string shape(const RatMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const RatMatrix& a, const char* what) {
  if (!a.is_square()) {
    throw ShapeMismatch(std::string(what) + " needs a square matrix, got " + shape(a));
  }
}

}  // namespace

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Rational(0)) {}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> row_major)
    : rows_(rows), cols_(cols), entries_(std::move(row_major)) {
  if (entries_.size() != rows_ * cols_) {
    throw ShapeMismatch("entry count " + std::to_string(entries_.size()) +
                        " does not match " + shape(*this));
  }
}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw ShapeMismatch("ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RatMatrix RatMatrix::from_columns(std::span<const RatVector> columns) {
  const std::size_t c = columns.size();
  const std::size_t r = c ? columns[0].size() : 0;
  RatMatrix m(r, c);
  for (std::size_t j = 0; j < c; ++j) {
    if (columns[j].size() != r) throw ShapeMismatch("ragged columns");
    for (std::size_t i = 0; i < r; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

RatVector RatMatrix::row(std::size_t i) const {
  return RatVector(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

RatVector RatMatrix::column(std::size_t j) const {
  RatVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

Rational RatMatrix::trace() const {
  require_square(*this, "trace");
  Rational s = 0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
  return s;
}

bool RatMatrix::is_zero() const {
  for (const auto& x : entries_) {
    if (sgn(x) != 0) return false;
  }
  return true;
}

bool RatMatrix::is_symmetric() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

RatMatrix RatMatrix::principal_submatrix(std::span<const std::size_t> idx) const {
  require_square(*this, "principal_submatrix");
  RatMatrix s(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = 0; b < idx.size(); ++b) s(a, b) = (*this)(idx[a], idx[b]);
  }
  return s;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw ShapeMismatch("add " + shape(a) + " + " + shape(b));
  }
  RatMatrix out(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    out.entries_[i] = a.entries_[i] + b.entries_[i];
  }
  return out;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw ShapeMismatch("subtract " + shape(a) + " - " + shape(b));
  }
  RatMatrix out(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    out.entries_[i] = a.entries_[i] - b.entries_[i];
  }
  return out;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw ShapeMismatch("multiply " + shape(a) + " * " + shape(b));
  RatMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

RatMatrix operator*(const Rational& s, const RatMatrix& a) {
  RatMatrix out(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.entries_.size(); ++i) out.entries_[i] = s * a.entries_[i];
  return out;
}

RatVector operator*(const RatMatrix& a, const RatVector& v) {
  if (a.cols_ != v.size()) {
    throw ShapeMismatch("apply " + shape(a) + " to vector of size " +
                        std::to_string(v.size()));
  }
  RatVector out(a.rows_, Rational(0));
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
  }
  return out;
}

std::string RatMatrix::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) s += ", ";
    s += exact::to_string(row(i));
  }
  return s + "]";
}

RatMatrix inverse(const RatMatrix& a) {
  require_square(a, "inverse");
  const std::size_t n = a.rows();
  RatMatrix work = a;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(work(pivot, col)) == 0) ++pivot;
    if (pivot == n) throw SingularMatrix("matrix is singular (rank < " + std::to_string(n) + ")");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Rational p = work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(work(i, col)) == 0) continue;
      const Rational f = work(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

std::vector<std::size_t> pivot_columns(const RatMatrix& a) {
  RatMatrix work = a;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t pivot = r;
    while (pivot < rows && sgn(work(pivot, col)) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(work(pivot, j), work(r, j));
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (sgn(work(i, col)) == 0) continue;
      const Rational f = work(i, col) / work(r, col);
      for (std::size_t j = col; j < cols; ++j) work(i, j) -= f * work(r, j);
    }
    pivots.push_back(col);
    ++r;
  }
  return pivots;
}

std::size_t rank(const RatMatrix& a) { return pivot_columns(a).size(); }

RatVector solve(const RatMatrix& a, const RatVector& b) {
  require_square(a, "solve");
  if (b.size() != a.rows()) throw ShapeMismatch("solve: right-hand side size");
  const std::size_t n = a.rows();
  RatMatrix work = a;
  RatVector rhs = b;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(work(pivot, col)) == 0) ++pivot;
    if (pivot == n) throw SingularMatrix("solve: singular system");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(work(pivot, j), work(col, j));
      std::swap(rhs[pivot], rhs[col]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      if (sgn(work(i, col)) == 0) continue;
      const Rational f = work(i, col) / work(col, col);
      for (std::size_t j = col; j < n; ++j) work(i, j) -= f * work(col, j);
      rhs[i] -= f * rhs[col];
    }
  }
  RatVector x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rational s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= work(i, j) * x[j];
    x[i] = s / work(i, i);
  }
  return x;
}

RatPolynomial char_poly(const RatMatrix& a) {
  require_square(a, "char_poly");
  const std::size_t n = a.rows();
  // Faddeev-LeVerrier: M_1 = I, c_{n-1} = -tr(A);
  // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RatMatrix m(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    const RatMatrix am = a * m;
    c[n - k] = -am.trace() / static_cast<unsigned long>(k);
  }
  return RatPolynomial(std::move(c));
}

Rational frobenius_inner(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch("frobenius_inner " + shape(a) + " vs " + shape(b));
  }
  Rational s = 0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) s += ea[i] * eb[i];
  return s;
}

}  // namespace affgrass::exact
