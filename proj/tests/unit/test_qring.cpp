#include "doctest.h"

#include <numeric>

#include "qgroth/errors.hpp"
#include "qgroth/qring.hpp"
#include "../support/generators.hpp"
#include "../support/oracles.hpp"

using namespace qgroth;
using qgroth::testing::Rng;

namespace {

LaurentSeries poly(int v, std::vector<int> c) {
  std::vector<Integer> z(c.begin(), c.end());
  return LaurentSeries(v, std::move(z));
}

bool agrees(const LaurentSeries& a, const LaurentSeries& b) {
  const Comparison c = compare(a, b);
  return c == Comparison::Equal || c == Comparison::EqualSoFar || c == Comparison::Incomparable;
}

bool respects_window(const LaurentSeries& s) {
  return s.is_exact() || s.is_zero() || s.top_exponent() < *s.precision();
}

}  // namespace

TEST_CASE("rendering") {
  CHECK(poly(0, {1, 0, -1, 0, 1}).truncated(6).to_string() == "1 - q^2 + q^4 + O(q^6)");
  CHECK(LaurentSeries().to_string() == "0");
  CHECK(LaurentSeries::big_o(3).to_string() == "O(q^3)");
  CHECK(poly(-2, {2, 0, 0, 1}).to_string() == "2q^-2 + q");
}

TEST_CASE("canonical form strips zeros") {
  const LaurentSeries s(-1, {0, 0, 3, 0});
  CHECK(s.valuation() == 1);
  CHECK(s.coeffs().size() == 1);
  CHECK(LaurentSeries(4, {0, 0}).is_exact_zero());
}

TEST_CASE("product precision") {
  const LaurentSeries a = poly(0, {1, 1}).truncated(5);
  const LaurentSeries b = poly(2, {1}).truncated(4);
  CHECK((a * b).precision() == 4);
  CHECK((a * poly(3, {1})).precision() == 8);
  CHECK((a + b).precision() == 4);
}

TEST_CASE("three-valued comparison") {
  const LaurentSeries a = poly(0, {1, 0, -1}).truncated(4);
  CHECK(compare(a, a) == Comparison::Equal);
  CHECK(compare(a, a.truncated(2)) == Comparison::EqualSoFar);
  CHECK(compare(a, poly(0, {1, 0, 1})) == Comparison::Unequal);
  CHECK(compare(LaurentSeries::big_o(0), poly(1, {1})) == Comparison::Incomparable);
}

TEST_CASE("series_invert examples") {
  const LaurentSeries inv = series_invert(qint(2), 20);
  for (int e = 0; e < 20; ++e) CHECK(inv.coeff(e) == (e % 2 ? 0 : (e % 4 ? -1 : 1)));
  CHECK(inv.precision() == 20);
  CHECK(series_invert(LaurentSeries::constant(1), 10) == LaurentSeries::constant(1));

  const LaurentSeries shifted = series_invert(poly(2, {1, 0, 1}), 10);
  CHECK(shifted.valuation() == -2);
  CHECK(shifted.to_string() == "q^-2 - 1 + q^2 - q^4 + q^6 - q^8 + O(q^10)");
  CHECK(compare(shifted * poly(2, {1, 0, 1}), LaurentSeries::constant(1)) == Comparison::EqualSoFar);

  CHECK_THROWS_AS(series_invert(LaurentSeries::constant(2), 10), NotInvertible);
  CHECK_THROWS_AS(series_invert(LaurentSeries::big_o(5), 10), NotInvertible);
  CHECK_THROWS_AS(series_invert(poly(0, {1, 1}).truncated(3), 10), InsufficientPrecision);
}

TEST_CASE("inverse matches the geometric series oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Integer> c(static_cast<std::size_t>(rng.between(1, 6)));
    for (auto& x : c) x = rng.between(-3, 3);
    c.front() = rng.coin() ? 1 : -1;
    const std::size_t len = static_cast<std::size_t>(rng.between(1, 25));
    const LaurentSeries a(0, c);
    const LaurentSeries inv = series_invert(a, static_cast<int>(len));
    CHECK(oracle::to_dense(inv, len) == oracle::geometric_inverse(c, len));
  }
}

TEST_CASE("inversion residual property") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const bool exact = rng.coin();
    const LaurentSeries a = qgroth::testing::random_unit(rng, exact);
    const int v = a.valuation();
    const int n = exact ? rng.between(-v - 2, 40) : rng.between(-v - 2, *a.precision() - 2 * v);
    const LaurentSeries b = series_invert(a, n);
    if (n + v > 0) CHECK(b.valuation() == -v);
    const LaurentSeries r = a * b;
    CHECK(respects_window(b));
    // a b = 1 + O(q^(n + v))
    CHECK(agrees(r, LaurentSeries::constant(1).truncated(n + v)));
    CHECK(r.precision().value_or(n + v) >= n + v);
  }
}

TEST_CASE("ring axioms on random series") {
  Rng rng(1);
  const LaurentSeries one = LaurentSeries::constant(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const LaurentSeries a = qgroth::testing::random_series(rng);
    const LaurentSeries b = qgroth::testing::random_series(rng);
    const LaurentSeries c = qgroth::testing::random_series(rng);
    const bool exact = a.is_exact() && b.is_exact() && c.is_exact();
    CAPTURE(a.to_string());
    CAPTURE(b.to_string());
    CAPTURE(c.to_string());

    CHECK((a + b) == (b + a));
    CHECK((a * b) == (b * a));
    CHECK(((a + b) + c) == (a + (b + c)));
    CHECK((a - a).is_zero());
    CHECK((a + LaurentSeries()) == a);
    CHECK((a * one) == a);
    for (const LaurentSeries& r : {a + b, a * b, a * (b + c), a * b + a * c}) CHECK(respects_window(r));
    if (exact) {
      CHECK(((a * b) * c) == (a * (b * c)));
      CHECK((a * (b + c)) == (a * b + a * c));
    } else {
      CHECK(agrees((a * b) * c, a * (b * c)));
      CHECK(agrees(a * (b + c), a * b + a * c));
    }
  }
}

TEST_CASE("qint and balanced_qint") {
  CHECK(qint(0).is_exact_zero());
  CHECK(qint(1) == poly(0, {1}));
  CHECK(qint(2) == poly(0, {1, 0, 1}));
  CHECK(qint(3) == poly(0, {1, 0, 1, 0, 1}));
  CHECK(balanced_qint(0).is_exact_zero());
  CHECK(balanced_qint(2) == poly(-1, {1, 0, 1}));
  CHECK(balanced_qint(-1) == poly(0, {-1}));
  for (int n = 0; n <= 12; ++n) {
    CHECK(qint(n).evaluate_at_one() == n);
    CHECK(balanced_qint(n) == qint(n).shifted(1 - n));
    CHECK(balanced_qint(-n) == -balanced_qint(n));
  }
}

TEST_CASE("qmultinomial examples and errors") {
  const std::vector<int> p11{1, 1};
  const std::vector<int> p22{2, 2};
  CHECK(qmultinomial(2, p11) == poly(0, {1, 0, 1}));
  CHECK(qmultinomial(4, p22) == poly(0, {1, 0, 1, 0, 2, 0, 1, 0, 1}));
  for (int n = 0; n <= 6; ++n) {
    const std::vector<int> all{n};
    CHECK(qmultinomial(n, all) == LaurentSeries::constant(1));
  }
  const std::vector<int> bad{3, 2};
  CHECK_THROWS_AS(qmultinomial(4, bad), InvalidParts);
}

TEST_CASE("qmultinomial agrees with q-Pascal and is palindromic") {
  Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = rng.between(0, 9);
    std::vector<int> parts;
    int left = n;
    for (int k = rng.between(0, 3); k > 0 && left >= 0; --k) {
      parts.push_back(rng.between(0, left));
      left -= parts.back();
    }
    const LaurentSeries m = qmultinomial(n, parts);
    REQUIRE(m.is_exact());
    REQUIRE(m.valuation() == 0);
    const oracle::Dense expected = oracle::gaussian_multinomial(n, parts);
    CHECK(oracle::to_dense(m, expected.size()) == expected);
    CHECK(static_cast<std::size_t>(m.top_exponent() + 1) == expected.size());

    Integer ordinary = 1;
    int rest = n;
    for (int d : parts) {
      Integer b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(rest), static_cast<unsigned long>(d));
      ordinary *= b;
      rest -= d;
    }
    CHECK(m.evaluate_at_one() == ordinary);
    const auto& c = m.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(c[i] >= 0);
      CHECK(c[i] == c[c.size() - 1 - i]);
    }
  }
}

TEST_CASE("series matrix inverse") {
  SeriesMatrix c(2, 2);
  c(0, 0) = LaurentSeries::constant(1);
  c(1, 0) = LaurentSeries::monomial(1);
  c(1, 1) = LaurentSeries::constant(1);
  const SeriesMatrix inv = c.inverse(10);
  CHECK(inv(1, 0).to_string() == "-q + O(q^10)");
  CHECK((c * inv - SeriesMatrix::identity(2)).is_zero());
  CHECK_THROWS_AS(SeriesMatrix(2, 3).inverse(5), ShapeMismatch);
}
