#include "doctest.h"

#include "qgroth/errors.hpp"
#include "qgroth/fixtures.hpp"
#include "qgroth/galgebra.hpp"
#include "../support/generators.hpp"

using namespace qgroth;

namespace {

LaurentSeries poly(int v, std::vector<int> c) {
  std::vector<Integer> z(c.begin(), c.end());
  return LaurentSeries(v, std::move(z));
}

AlgebraTable dual_table() { return build_truncated_poly(2, 2)->table(); }

}  // namespace

TEST_CASE("builders validate") {
  for (const auto& a : qgroth::testing::fixture_algebras()) {
    CAPTURE(a->name());
    CHECK(validate_algebra(a->table()).ok());
  }
  for (int n = 1; n <= 6; ++n)
    for (int g = 1; g <= 4; ++g) CHECK(validate_algebra(build_truncated_poly(n, g)->table()).ok());
}

TEST_CASE("truncated polynomial algebras") {
  const auto p1 = build_truncated_poly(2, 2);
  CHECK(p1->dim() == 2);
  CHECK(p1->degree_component(0).size() == 1);
  CHECK(p1->degree_component(1).empty());
  CHECK(p1->degree_component(2).size() == 1);
  CHECK(poincare_series(*p1) == poly(0, {1, 0, 1}));
  CHECK(poincare_series(*build_truncated_poly(1, 2)) == LaurentSeries::constant(1));
  CHECK(poincare_series(*build_truncated_poly(3, 2)) == qint(3));
}

TEST_CASE("grading violation") {
  AlgebraTable t = dual_table();
  t.products[{1, 1}] = {{0, Rational(1)}};
  const ValidationReport r = validate_algebra(t);
  CHECK_FALSE(r.ok());
  CHECK(r.has("grading"));
}

TEST_CASE("non-orthogonal idempotents") {
  AlgebraTable t;
  t.name = "bad";
  t.basis = {{"e1", 0}, {"e2", 0}};
  t.idempotents = {0, 1};
  t.products[{0, 0}] = {{0, Rational(1)}};
  t.products[{1, 1}] = {{1, Rational(1)}};
  t.products[{0, 1}] = {{0, Rational(1)}};
  const ValidationReport r = validate_algebra(t);
  CHECK_FALSE(r.ok());
  CHECK((r.has("orthogonality") || r.has("unit")));
}

TEST_CASE("non-basic degree zero is rejected") {
  AlgebraTable t = dual_table();
  t.basis.push_back({"y", 0});
  CHECK(validate_algebra(t).has("basic"));
}

TEST_CASE("build_from_table") {
  const auto a2 = fixtures::a2_quiver();
  CHECK(a2->dim() == 3);
  CHECK(a2->num_simples() == 2);
  CHECK(poincare_series(*a2) == poly(0, {2, 1}));

  AlgebraDescription empty;
  empty.name = "empty";
  CHECK_THROWS_AS(build_from_table(empty), ValidationError);

  AlgebraDescription dup = describe(*a2);
  dup.basis.push_back({"a", 1});
  CHECK_THROWS_AS(build_from_table(dup), ParseError);

  AlgebraDescription unknown = describe(*a2);
  unknown.products.push_back({"a", "zz", {}});
  CHECK_THROWS_AS(build_from_table(unknown), ParseError);

  CHECK(describe(*build_from_table(describe(*a2))) == describe(*a2));
}

TEST_CASE("corner algebras") {
  const auto a2 = fixtures::a2_quiver();
  const CornerAlgebra c1 = corner_algebra(a2, {SimpleIndex{0}});
  CHECK(c1.algebra->dim() == 1);
  CHECK(c1.kept == std::vector<SimpleIndex>{SimpleIndex{0}});

  const CornerAlgebra all = corner_algebra(a2, {SimpleIndex{0}, SimpleIndex{1}});
  CHECK(all.algebra->dim() == a2->dim());
  CHECK(poincare_series(*all.algebra) == poincare_series(*a2));

  const auto dual = fixtures::dual_numbers();
  CHECK(corner_algebra(dual, {SimpleIndex{0}}).algebra->dim() == 2);
  CHECK_THROWS(corner_algebra(dual, {}));
}

TEST_CASE("corner embeddings are multiplicative") {
  qgroth::testing::Rng rng(21);
  for (const auto& a : qgroth::testing::fixture_algebras()) {
    for (int trial = 0; trial < 4; ++trial) {
      std::set<SimpleIndex> kept;
      for (std::size_t s = 0; s < a->num_simples(); ++s)
        if (rng.coin()) kept.insert(SimpleIndex{s});
      if (kept.empty()) kept.insert(SimpleIndex{0});
      const CornerAlgebra c = corner_algebra(a, kept);
      CHECK(validate_algebra(c.algebra->table()).ok());
      for (std::size_t i = 0; i < c.algebra->dim(); ++i) {
        for (std::size_t j = 0; j < c.algebra->dim(); ++j) {
          const Vector& prod = c.algebra->product(i, j);
          Vector pushed(a->dim());
          for (std::size_t k = 0; k < prod.size(); ++k)
            for (std::size_t l = 0; l < a->dim(); ++l) pushed[l] += prod[k] * c.embedding[k][l];
          CHECK(pushed == a->multiply(c.embedding[i], c.embedding[j]));
        }
      }
      const LaurentSeries pc = poincare_series(*c.algebra);
      const LaurentSeries pa = poincare_series(*a);
      for (int d = 0; d <= a->max_degree(); ++d) CHECK(pc.coeff(d) <= pa.coeff(d));
    }
  }
}
