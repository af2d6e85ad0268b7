#pragma once

// Dense exact linear algebra over Q.  Pivots are always chosen leftmost so
// that every derived basis (and hence every resolution) is reproducible.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qgroth/qring.hpp"

namespace qgroth {

using Vector = std::vector<Rational>;

class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  // Columns given as vectors of length `rows`.
  static Matrix from_columns(std::size_t rows, std::span<const Vector> cols);
  static Matrix from_rows(std::size_t cols, std::span<const Vector> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector column(std::size_t c) const;
  Vector row(std::size_t r) const;
  Matrix transposed() const;
  // Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  Matrix select_rows(std::span<const std::size_t> rows) const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& v);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  Matrix scaled(const Rational& s) const;
  friend bool operator==(const Matrix&, const Matrix&) = default;

  bool is_zero() const;
  bool is_identity() const;

  std::string to_string() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Reduced row-echelon form with leftmost pivots.
struct RowEchelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RowEchelon row_echelon(const Matrix& m);
std::size_t rank(const Matrix& m);

bool is_zero(const Vector& v);

// A subspace of Q^n given by a basis whose restriction to `coord_cols` is the
// identity matrix; the coordinates of a member vector are its entries at
// those columns, and subtracting sum v[c_j] * basis_j clears them.
class Subspace {
public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

  // Row space of the given vectors (RREF basis).
  static Subspace span(std::size_t ambient, std::span<const Vector> vectors);
  static Subspace whole(std::size_t ambient);
  // Null space of m (vectors x with m x = 0), basis indexed by free columns.
  static Subspace null_space(const Matrix& m);
  // Column space of m.
  static Subspace column_space(const Matrix& m);

  std::size_t ambient() const noexcept { return ambient_; }
  std::size_t dim() const noexcept { return basis_.size(); }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& coord_cols() const noexcept { return coord_cols_; }

  // Basis vectors as columns (ambient x dim).
  Matrix basis_matrix() const;

  Vector coordinates(const Vector& v) const;
  // v minus its projection along the basis; zero iff v is a member.
  Vector reduce(const Vector& v) const;
  bool contains(const Vector& v) const { return is_zero(reduce(v)); }
  bool contains(const Subspace& other) const;

  // Columns not used as coordinates: they index a basis of Q^n / this.
  std::vector<std::size_t> complement_cols() const;
  // Matrix of Q^n -> Q^n / this, in the basis of complement columns.
  Matrix quotient_map() const;

private:
  std::size_t ambient_ = 0;
  std::vector<Vector> basis_;
  std::vector<std::size_t> coord_cols_;
};

// X with a * X = b; throws InconsistentSystem if none exists.
Matrix solve(const Matrix& a, const Matrix& b);

}  // namespace qgroth
