#include "qgroth/qring.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "qgroth/errors.hpp"

namespace qgroth {

Precision min_precision(Precision a, Precision b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

namespace {

Precision add_to_precision(Precision p, int offset) {
  if (!p) return p;
  return *p + offset;
}

}  // namespace

LaurentSeries::LaurentSeries(int valuation, std::vector<Integer> coeffs, Precision precision)
    : valuation_(valuation), coeffs_(std::move(coeffs)), precision_(precision) {
  canonicalize();
}

LaurentSeries LaurentSeries::constant(const Integer& c) { return LaurentSeries(0, {c}); }

LaurentSeries LaurentSeries::monomial(int exponent, const Integer& c) {
  return LaurentSeries(exponent, {c});
}

LaurentSeries LaurentSeries::big_o(int n) { return LaurentSeries(n, {}, n); }

void LaurentSeries::canonicalize() {
  if (precision_) {
    const long keep = static_cast<long>(*precision_) - valuation_;
    if (keep <= 0) {
      coeffs_.clear();
    } else if (static_cast<long>(coeffs_.size()) > keep) {
      coeffs_.resize(static_cast<std::size_t>(keep));
    }
  }
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  auto first = std::find_if(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c != 0; });
  const auto lead = static_cast<int>(first - coeffs_.begin());
  if (lead > 0) {
    coeffs_.erase(coeffs_.begin(), first);
    valuation_ += lead;
  }
  if (coeffs_.empty()) valuation_ = precision_.value_or(0);
}

Integer LaurentSeries::coeff(int exponent) const {
  const long k = static_cast<long>(exponent) - valuation_;
  if (k < 0 || k >= static_cast<long>(coeffs_.size())) return 0;
  return coeffs_[static_cast<std::size_t>(k)];
}

LaurentSeries LaurentSeries::truncated(Precision n) const {
  return LaurentSeries(valuation_, coeffs_, min_precision(precision_, n));
}

LaurentSeries LaurentSeries::shifted(int s) const {
  if (is_exact_zero()) return {};
  return LaurentSeries(valuation_ + s, coeffs_, add_to_precision(precision_, s));
}

Integer LaurentSeries::evaluate_at_one() const {
  if (!is_exact()) throw std::logic_error("evaluate_at_one: series is not exact");
  Integer sum = 0;
  for (const auto& c : coeffs_) sum += c;
  return sum;
}

LaurentSeries LaurentSeries::operator-() const {
  auto out = coeffs_;
  for (auto& c : out) c = -c;
  return LaurentSeries(valuation_, std::move(out), precision_);
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
  const Precision prec = min_precision(a.precision_, b.precision_);
  if (a.coeffs_.empty() && b.coeffs_.empty()) {
    return prec ? LaurentSeries::big_o(*prec) : LaurentSeries();
  }
  int lo = 0;
  int hi = 0;
  bool init = false;
  for (const auto* s : {&a, &b}) {
    if (s->coeffs_.empty()) continue;
    if (!init) {
      lo = s->valuation_;
      hi = s->top_exponent();
      init = true;
    } else {
      lo = std::min(lo, s->valuation_);
      hi = std::max(hi, s->top_exponent());
    }
  }
  std::vector<Integer> out(static_cast<std::size_t>(hi - lo + 1));
  for (const auto* s : {&a, &b}) {
    for (std::size_t k = 0; k < s->coeffs_.size(); ++k) {
      out[static_cast<std::size_t>(s->valuation_ - lo) + k] += s->coeffs_[k];
    }
  }
  return LaurentSeries(lo, std::move(out), prec);
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return {};
  Precision prec;
  if (b.precision_) prec = min_precision(prec, a.valuation_ + *b.precision_);
  if (a.precision_) prec = min_precision(prec, b.valuation_ + *a.precision_);
  if (a.coeffs_.empty() || b.coeffs_.empty()) return LaurentSeries::big_o(*prec);

  std::size_t len = a.coeffs_.size() + b.coeffs_.size() - 1;
  if (prec) {
    const long cap = static_cast<long>(*prec) - (a.valuation_ + b.valuation_);
    len = static_cast<std::size_t>(std::clamp<long>(cap, 0, static_cast<long>(len)));
  }
  std::vector<Integer> out(len);
  for (std::size_t i = 0; i < a.coeffs_.size() && i < len; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size() && i + j < len; ++j) {
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return LaurentSeries(a.valuation_ + b.valuation_, std::move(out), prec);
}

namespace {

void append_term(std::string& out, const Integer& c, int exponent) {
  const bool negative = c < 0;
  const Integer magnitude = negative ? Integer(-c) : c;
  if (out.empty()) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  const std::string mono =
      exponent == 0 ? "" : (exponent == 1 ? "q" : "q^" + std::to_string(exponent));
  if (magnitude != 1 || mono.empty()) out += magnitude.get_str();
  out += mono;
}

}  // namespace

std::string LaurentSeries::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    append_term(out, coeffs_[k], valuation_ + static_cast<int>(k));
  }
  if (precision_) {
    if (!out.empty()) out += " + ";
    out += "O(q^" + std::to_string(*precision_) + ")";
  }
  return out.empty() ? "0" : out;
}

Comparison compare(const LaurentSeries& a, const LaurentSeries& b) {
  const Precision window = min_precision(a.precision(), b.precision());
  const LaurentSeries da = a.truncated(window);
  const LaurentSeries db = b.truncated(window);
  if (da.coeffs() != db.coeffs() || (!da.is_zero() && da.valuation() != db.valuation())) {
    return Comparison::Unequal;
  }
  if (a.precision() == b.precision()) return Comparison::Equal;
  if (da.is_zero() && window && a.valuation() >= *window && b.valuation() >= *window) {
    return Comparison::Incomparable;
  }
  return Comparison::EqualSoFar;
}

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) { return a + b; }
LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b) { return a * b; }

LaurentSeries series_invert(const LaurentSeries& a, int target_precision) {
  if (a.is_zero()) throw NotInvertible("series is zero within its precision");
  const Integer& lead = a.coeffs().front();
  if (lead != 1 && lead != -1) {
    throw NotInvertible("lowest coefficient " + lead.get_str() + " is not a unit of Z");
  }
  const int v = a.valuation();
  if (a.is_exact() && a.coeffs().size() == 1) return LaurentSeries::monomial(-v, lead);

  if (a.precision() && target_precision > *a.precision() - 2 * v) {
    throw InsufficientPrecision("input known to O(q^" + std::to_string(*a.precision()) +
                                ") cannot determine the inverse to O(q^" +
                                std::to_string(target_precision) + ")");
  }
  const long count = static_cast<long>(target_precision) + v;
  if (count <= 0) return LaurentSeries::big_o(target_precision);

  const auto& u = a.coeffs();
  std::vector<Integer> w(static_cast<std::size_t>(count));
  w[0] = lead;
  for (std::size_t k = 1; k < w.size(); ++k) {
    Integer acc = 0;
    for (std::size_t j = 1; j <= k && j < u.size(); ++j) acc += u[j] * w[k - j];
    w[k] = -lead * acc;
  }
  return LaurentSeries(-v, std::move(w), target_precision);
}

LaurentSeries exact_divide(const LaurentSeries& num, const LaurentSeries& den) {
  if (!num.is_exact() || !den.is_exact()) throw std::logic_error("exact_divide: inexact operand");
  if (den.is_zero()) throw std::domain_error("exact_divide: division by zero");
  if (num.is_zero()) return {};
  std::vector<Integer> rem = num.coeffs();
  const auto& d = den.coeffs();
  if (rem.size() < d.size()) throw std::logic_error("exact_divide: nonzero remainder");
  std::vector<Integer> quot(rem.size() - d.size() + 1);
  for (std::size_t i = quot.size(); i-- > 0;) {
    const Integer& top = rem[i + d.size() - 1];
    if (top % d.back() != 0) throw std::logic_error("exact_divide: non-integral quotient");
    quot[i] = top / d.back();
    if (quot[i] == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) rem[i + j] -= quot[i] * d[j];
  }
  if (std::any_of(rem.begin(), rem.end(), [](const Integer& c) { return c != 0; })) {
    throw std::logic_error("exact_divide: nonzero remainder");
  }
  return LaurentSeries(num.valuation() - den.valuation(), std::move(quot));
}

LaurentSeries qint(int n) {
  if (n < 0) throw std::invalid_argument("qint: n must be nonnegative");
  std::vector<Integer> c(n == 0 ? 0 : static_cast<std::size_t>(2 * n - 1));
  for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(2 * k)] = 1;
  return LaurentSeries(0, std::move(c));
}

LaurentSeries qfactorial(int n) {
  LaurentSeries out = LaurentSeries::constant(1);
  for (int k = 2; k <= n; ++k) out *= qint(k);
  return out;
}

LaurentSeries qmultinomial(int n, std::span<const int> parts) {
  if (n < 0) throw InvalidParts("n must be nonnegative");
  long sum = 0;
  for (int p : parts) {
    if (p < 0) throw InvalidParts("parts must be nonnegative");
    sum += p;
  }
  if (sum > n) {
    throw InvalidParts("parts sum to " + std::to_string(sum) + " > n = " + std::to_string(n));
  }
  LaurentSeries den = qfactorial(n - static_cast<int>(sum));
  for (int p : parts) den *= qfactorial(p);
  return exact_divide(qfactorial(n), den);
}

LaurentSeries balanced_qint(int n) {
  if (n == 0) return {};
  if (n < 0) return -balanced_qint(-n);
  return qint(n).shifted(1 - n);
}

SeriesMatrix SeriesMatrix::identity(std::size_t n) {
  SeriesMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = LaurentSeries::constant(1);
  return m;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.cols_ != b.rows_) throw ShapeMismatch("series matrix product: inner dimensions differ");
  SeriesMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      LaurentSeries acc;
      for (std::size_t k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ShapeMismatch("series matrix sum: shapes differ");
  SeriesMatrix out(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = a.data_[k] + b.data_[k];
  return out;
}

SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) {
  return a + b.scaled(LaurentSeries::constant(-1));
}

SeriesMatrix SeriesMatrix::scaled(const LaurentSeries& s) const {
  SeriesMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * s;
  return out;
}

SeriesMatrix SeriesMatrix::truncated(Precision n) const {
  SeriesMatrix out(rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k].truncated(n);
  return out;
}

bool SeriesMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const LaurentSeries& s) { return s.is_zero(); });
}

namespace {

using IntMatrix = std::vector<std::vector<Integer>>;

// Inverse over Z of a square integer matrix, via rational elimination.
IntMatrix integer_inverse(const IntMatrix& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    a[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw NotInvertible("constant-term matrix is singular");
    std::swap(a[piv], a[col]);
    const Rational inv = 1 / a[col][col];
    for (auto& x : a[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  IntMatrix out(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& x = a[i][n + j];
      if (x.get_den() != 1) throw NotInvertible("constant-term matrix is not unimodular");
      out[i][j] = x.get_num();
    }
  }
  return out;
}

}  // namespace

SeriesMatrix SeriesMatrix::inverse(int precision) const {
  if (rows_ != cols_) throw ShapeMismatch("inverse of a non-square series matrix");
  const std::size_t n = rows_;
  if (precision <= 0) {
    SeriesMatrix out(n, n);
    for (auto& e : out.data_) e = LaurentSeries::big_o(precision);
    return out;
  }
  for (const auto& e : data_) {
    if (!e.is_zero() && e.valuation() < 0) {
      throw NotInvertible("matrix entry has negative valuation");
    }
    if (e.precision() && *e.precision() < precision) {
      throw InsufficientPrecision("matrix entry known only to O(q^" +
                                  std::to_string(*e.precision()) + ")");
    }
  }
  const auto terms = static_cast<std::size_t>(precision);
  // coefficient matrices C_k of q^k
  std::vector<IntMatrix> c(terms, IntMatrix(n, std::vector<Integer>(n)));
  for (std::size_t k = 0; k < terms; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) c[k][i][j] = (*this)(i, j).coeff(static_cast<int>(k));
    }
  }
  const IntMatrix c0inv = integer_inverse(c[0]);
  std::vector<IntMatrix> x(terms, IntMatrix(n, std::vector<Integer>(n)));
  x[0] = c0inv;
  for (std::size_t k = 1; k < terms; ++k) {
    IntMatrix acc(n, std::vector<Integer>(n));
    for (std::size_t j = 1; j <= k; ++j) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t t = 0; t < n; ++t) {
          if (c[j][r][t] == 0) continue;
          for (std::size_t s = 0; s < n; ++s) acc[r][s] += c[j][r][t] * x[k - j][t][s];
        }
      }
    }
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t s = 0; s < n; ++s) {
        Integer v = 0;
        for (std::size_t t = 0; t < n; ++t) v += c0inv[r][t] * acc[t][s];
        x[k][r][s] = -v;
      }
    }
  }
  SeriesMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Integer> coeffs(terms);
      for (std::size_t k = 0; k < terms; ++k) coeffs[k] = x[k][i][j];
      out(i, j) = LaurentSeries(0, std::move(coeffs), precision);
    }
  }
  return out;
}

}  // namespace qgroth
