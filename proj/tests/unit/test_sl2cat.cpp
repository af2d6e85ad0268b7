#include "doctest.h"

#include "qgroth/sl2cat.hpp"
#include "../support/oracles.hpp"

using namespace qgroth;

namespace {

LaurentSeries q(int k) { return LaurentSeries::monomial(k); }

}  // namespace

TEST_CASE("module matrices") {
  const QSl2Module m = build_module(1, Sl2Convention::AsPrinted);
  CHECK(m.E(1, 0) == q(-1));
  CHECK(m.K(0, 0) == q(-1));
  CHECK(m.K(1, 1) == q(1));
  CHECK(m.Kinv(0, 0) == q(1));

  for (auto conv : {Sl2Convention::AsPrinted, Sl2Convention::Balanced}) {
    const QSl2Module z = build_module(0, conv);
    CHECK(z.E.is_zero());
    CHECK(z.F.is_zero());
    CHECK(z.K == SeriesMatrix::identity(1));
    CHECK(check_relations(z).all_pass());
  }
  CHECK_THROWS_AS(build_module(-1, Sl2Convention::Balanced), std::invalid_argument);
}

TEST_CASE("shape of the operators") {
  for (int n = 0; n <= 6; ++n) {
    for (auto conv : {Sl2Convention::AsPrinted, Sl2Convention::Balanced}) {
      const QSl2Module m = build_module(n, conv);
      for (int r = 0; r <= n; ++r) {
        for (int c = 0; c <= n; ++c) {
          if (r != c + 1) CHECK(m.E(r, c).is_exact_zero());
          if (r + 1 != c) CHECK(m.F(r, c).is_exact_zero());
          if (r != c) CHECK(m.K(r, c).is_exact_zero());
        }
      }
    }
  }
}

TEST_CASE("relations") {
  for (int n = 0; n <= 8; ++n) {
    CAPTURE(n);
    const RelationReport b = check_relations(build_module(n, Sl2Convention::Balanced));
    CHECK(b.all_pass());
    REQUIRE(b.relations.size() == 4);
    CHECK(b.relations[0].name == kRelKInverse);
    CHECK(b.relations[3].name == kRelEF);

    const QSl2Module printed = build_module(n, Sl2Convention::AsPrinted);
    const RelationReport p = check_relations(printed);
    CHECK(p.relation(kRelKInverse).pass);
    CHECK(p.relation(kRelKE).pass);
    CHECK(p.relation(kRelKF).pass);
    CHECK(nilpotent_raising_lowering(printed));
    CHECK(nilpotent_raising_lowering(build_module(n, Sl2Convention::Balanced)));
  }
}

TEST_CASE("the printed commutator fails at n = 1") {
  const RelationReport p = check_relations(build_module(1, Sl2Convention::AsPrinted));
  const RelationResult& ef = p.relation(kRelEF);
  CHECK_FALSE(ef.pass);
  CHECK(ef.residual(0, 0) == q(-1) * LaurentSeries::constant(-1) + LaurentSeries::constant(1));
  CHECK(p.to_string().find("FAIL " + std::string(kRelEF)) != std::string::npos);
}

TEST_CASE("bridge between the conventions") {
  for (int n = 0; n <= 8; ++n) {
    const QSl2Module p = build_module(n, Sl2Convention::AsPrinted);
    const QSl2Module b = build_module(n, Sl2Convention::Balanced);
    for (int i = 0; i < n; ++i) CHECK(p.E(i + 1, i) == b.E(i + 1, i) * q(-1));
    for (int i = 1; i <= n; ++i) CHECK(p.F(i - 1, i) == b.F(i - 1, i) * q(n - 2 * i + 1));
  }
}

TEST_CASE("dual canonical transform") {
  const BasisTransform one = dual_canonical_transform(1, 20);
  CHECK(one.matrix(0, 0).truncated(20) == LaurentSeries::constant(1).truncated(20));
  CHECK(one.matrix(1, 1).truncated(20) == LaurentSeries::constant(1).truncated(20));

  const BasisTransform two = dual_canonical_transform(2, 10);
  CHECK(two.matrix(1, 1).to_string() == "q^-1 - q + q^3 - q^5 + q^7 - q^9 + O(q^10)");

  for (int n = 0; n <= 8; ++n) {
    const int prec = 30;
    const BasisTransform t = dual_canonical_transform(n, prec);
    CHECK((t.matrix * t.inverse - SeriesMatrix::identity(n + 1)).truncated(prec).is_zero());
    for (int i = 0; i <= n; ++i) {
      const int shift = i * (n - i);
      const auto len = static_cast<std::size_t>(prec + shift);
      const oracle::Dense inv = oracle::geometric_inverse(oracle::gaussian_binomial(n, i), len);
      const LaurentSeries entry = t.matrix(i, i).shifted(shift);
      CHECK(oracle::to_dense(entry, len) == inv);
      CHECK(t.inverse(i, i).is_exact());
    }
  }
}

TEST_CASE("Grothendieck realization") {
  for (int n = 0; n <= 8; ++n) {
    const RealizationReport r = groth_realization(n, 40);
    CAPTURE(n);
    CHECK(r.pass());
    REQUIRE(r.entries.size() == static_cast<std::size_t>(n + 1));
    for (const auto& e : r.entries) {
      CHECK(e.pass);
      const std::vector<int> parts{e.i, n - e.i};
      CHECK(e.graded_rank == qmultinomial(n, parts));
      const bool end = e.i == 0 || e.i == n || e.i == 1 || e.i == n - 1;
      CHECK(e.cartan_check.has_value() == end);
      if (e.cartan_check) CHECK(*e.cartan_check);
    }
  }
  const RealizationReport two = groth_realization(2, 10);
  CHECK(two.entries[1].image.truncated(10) == LaurentSeries::constant(1).truncated(10));
  CHECK(two.to_string().find("PASS v^1") != std::string::npos);
}
