#pragma once

// Exact arithmetic in Z[q], Z[q,q^-1], Z[[q]] and Z[[q]][q^-1].
//
// A LaurentSeries is a finite window of integer coefficients together with a
// "big-O" precision: the first exponent whose coefficient is unknown.  Exact
// Laurent polynomials carry no precision.  Every operation returns the
// tightest window it can prove.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace qgroth {

using Integer = mpz_class;
using Rational = mpq_class;

// First unknown exponent; nullopt means exact.
using Precision = std::optional<int>;

inline constexpr int kDefaultPrecision = 40;

Precision min_precision(Precision a, Precision b);

enum class Comparison {
  Equal,       // same window, same coefficients
  EqualSoFar,  // agree on the common window, windows differ
  Unequal,     // a known coefficient differs
  Incomparable // the common window holds no possibly-nonzero coefficient
};

class LaurentSeries {
public:
  // Canonical exact zero.
  LaurentSeries() = default;

  // sum_k coeffs[k] q^(valuation + k) + O(q^precision)
  LaurentSeries(int valuation, std::vector<Integer> coeffs,
                Precision precision = std::nullopt);

  static LaurentSeries constant(const Integer& c);
  static LaurentSeries monomial(int exponent, const Integer& c = 1);
  // O(q^n)
  static LaurentSeries big_o(int n);

  int valuation() const noexcept { return valuation_; }
  const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }
  Precision precision() const noexcept { return precision_; }
  bool is_exact() const noexcept { return !precision_.has_value(); }

  // No known nonzero coefficient.
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_exact_zero() const noexcept { return coeffs_.empty() && is_exact(); }

  // Highest exponent with a nonzero coefficient; requires !is_zero().
  int top_exponent() const noexcept {
    return valuation_ + static_cast<int>(coeffs_.size()) - 1;
  }

  bool is_known(int exponent) const noexcept {
    return !precision_ || exponent < *precision_;
  }
  // Coefficient of q^exponent; zero outside the stored support.
  Integer coeff(int exponent) const;

  // Drop everything at or beyond q^n.
  LaurentSeries truncated(Precision n) const;
  // Multiply by q^s.
  LaurentSeries shifted(int s) const;

  // Value at q = 1; only defined for exact series.
  Integer evaluate_at_one() const;

  LaurentSeries operator-() const;
  friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  LaurentSeries& operator+=(const LaurentSeries& b) { return *this = *this + b; }
  LaurentSeries& operator-=(const LaurentSeries& b) { return *this = *this - b; }
  LaurentSeries& operator*=(const LaurentSeries& b) { return *this = *this * b; }

  // Identical windows and coefficients.
  friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) = default;

  // Text form, e.g. "1 - q^2 + q^4 + O(q^6)".
  std::string to_string() const;

private:
  void canonicalize();

  int valuation_ = 0;
  std::vector<Integer> coeffs_;
  Precision precision_;
};

Comparison compare(const LaurentSeries& a, const LaurentSeries& b);

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b);

// Inverse known up to O(q^target_precision).  The lowest coefficient must be
// +1 or -1.
LaurentSeries series_invert(const LaurentSeries& a, int target_precision);

// Exact division of polynomials; throws std::logic_error on a remainder.
LaurentSeries exact_divide(const LaurentSeries& num, const LaurentSeries& den);

// [n] = 1 + q^2 + ... + q^(2(n-1))
LaurentSeries qint(int n);
LaurentSeries qfactorial(int n);
// [n]! / ([d_1]! ... [d_r]! [n - sum d]!)
LaurentSeries qmultinomial(int n, std::span<const int> parts);
// (q^n - q^-n) / (q - q^-1)
LaurentSeries balanced_qint(int n);

// Dense matrices of series, used for Cartan matrices, K-maps and the
// quantum group operators.
class SeriesMatrix {
public:
  SeriesMatrix() = default;
  SeriesMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static SeriesMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  LaurentSeries& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const LaurentSeries& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);
  friend SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b);
  friend SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b);
  SeriesMatrix scaled(const LaurentSeries& s) const;
  SeriesMatrix truncated(Precision n) const;

  // No nonzero coefficient within the known windows.
  bool is_zero() const;
  friend bool operator==(const SeriesMatrix&, const SeriesMatrix&) = default;

  // Inverse to O(q^precision) of a matrix with entries in Z[[q]] whose
  // constant-term matrix is invertible over Z.
  SeriesMatrix inverse(int precision) const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<LaurentSeries> data_;
};

}  // namespace qgroth
