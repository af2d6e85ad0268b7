#include "qgroth/sl2cat.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

#include "qgroth/galgebra.hpp"
#include "qgroth/kgroup.hpp"

namespace qgroth {

std::string to_string(Sl2Convention c) { return c == Sl2Convention::AsPrinted ? "printed" : "balanced"; }

QSl2Module build_module(int n, Sl2Convention convention) {
  if (n < 0) throw std::invalid_argument("highest weight must be nonnegative");
  const auto dim = static_cast<std::size_t>(n) + 1;
  QSl2Module m;
  m.n = n;
  m.convention = convention;
  m.E = SeriesMatrix(dim, dim);
  m.F = SeriesMatrix(dim, dim);
  m.K = SeriesMatrix(dim, dim);
  m.Kinv = SeriesMatrix(dim, dim);
  for (int i = 0; i <= n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    m.K(u, u) = LaurentSeries::monomial(2 * i - n);
    m.Kinv(u, u) = LaurentSeries::monomial(n - 2 * i);
    if (i < n) {
      m.E(u + 1, u) = convention == Sl2Convention::AsPrinted ? qint(i + 1) * LaurentSeries::monomial(-i - 1)
                                                             : balanced_qint(i + 1);
    }
    if (i > 0) {
      m.F(u - 1, u) = convention == Sl2Convention::AsPrinted ? qint(n - i + 1) * LaurentSeries::monomial(1 - i)
                                                             : balanced_qint(n - i + 1);
    }
  }
  return m;
}

bool RelationReport::all_pass() const {
  for (const auto& r : relations) {
    if (!r.pass) return false;
  }
  return true;
}

const RelationResult& RelationReport::relation(const std::string& name) const {
  for (const auto& r : relations) {
    if (r.name == name) return r;
  }
  throw std::out_of_range("no relation named " + name);
}

namespace {

std::string render(const SeriesMatrix& m) {
  std::ostringstream out;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << "  [";
    for (std::size_t c = 0; c < m.cols(); ++c) out << (c ? ", " : "") << m(r, c).to_string();
    out << "]\n";
  }
  return out.str();
}

}  // namespace

std::string RelationReport::to_string() const {
  std::ostringstream out;
  for (const auto& r : relations) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << '\n';
    if (!r.pass) out << render(r.residual);
  }
  return out.str();
}

RelationReport check_relations(const QSl2Module& m) {
  RelationReport rep;
  rep.n = m.n;
  rep.convention = m.convention;
  const std::size_t dim = m.K.rows();
  auto add = [&](const char* name, const SeriesMatrix& lhs, const SeriesMatrix& rhs) {
    RelationResult r;
    r.name = name;
    r.residual = lhs - rhs;
    r.pass = r.residual.is_zero();
    rep.relations.push_back(std::move(r));
  };
  add(kRelKInverse, m.K * m.Kinv, SeriesMatrix::identity(dim));
  add(kRelKE, m.K * m.E, (m.E * m.K).scaled(LaurentSeries::monomial(2)));
  add(kRelKF, m.K * m.F, (m.F * m.K).scaled(LaurentSeries::monomial(-2)));
  SeriesMatrix bracket(dim, dim);
  for (int i = 0; i <= m.n; ++i) bracket(i, i) = balanced_qint(2 * i - m.n);
  add(kRelEF, m.E * m.F - m.F * m.E, bracket);
  return rep;
}

bool nilpotent_raising_lowering(const QSl2Module& m) {
  SeriesMatrix e = SeriesMatrix::identity(m.E.rows());
  SeriesMatrix f = e;
  for (int k = 0; k <= m.n; ++k) {
    e = e * m.E;
    f = f * m.F;
  }
  return e.is_zero() && f.is_zero();
}

BasisTransform dual_canonical_transform(int n, int precision) {
  if (n < 0) throw std::invalid_argument("highest weight must be nonnegative");
  const auto dim = static_cast<std::size_t>(n) + 1;
  BasisTransform t;
  t.n = n;
  t.precision = precision;
  t.matrix = SeriesMatrix(dim, dim);
  t.inverse = SeriesMatrix(dim, dim);
  for (int i = 0; i <= n; ++i) {
    const std::array<int, 1> parts{i};
    const LaurentSeries binom = qmultinomial(n, parts);
    const int shift = i * (n - i);
    const auto u = static_cast<std::size_t>(i);
    t.matrix(u, u) = series_invert(binom, precision + shift).shifted(-shift);
    t.inverse(u, u) = binom.shifted(shift);
  }
  return t;
}

bool RealizationReport::pass() const {
  for (const auto& e : entries) {
    if (!e.pass || (e.cartan_check && !*e.cartan_check)) return false;
  }
  return true;
}

std::string RealizationReport::to_string() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << (e.pass ? "PASS" : "FAIL") << " v^" << e.i << " -> (" << e.image.to_string() << ") [L_" << e.i << "]";
    if (e.cartan_check) out << (*e.cartan_check ? "; cartan agrees" : "; cartan DISAGREES");
    out << '\n';
  }
  return out.str();
}

RealizationReport groth_realization(int n, int precision) {
  const BasisTransform t = dual_canonical_transform(n, precision);
  RealizationReport rep;
  rep.n = n;
  rep.precision = precision;
  for (int i = 0; i <= n; ++i) {
    RealizationEntry e;
    e.i = i;
    const std::array<int, 2> parts{i, n - i};
    e.graded_rank = qmultinomial(n, parts);
    const auto u = static_cast<std::size_t>(i);
    // v_i -> q^(i(n-i)) [H_i]
    e.image = t.matrix(u, u) * LaurentSeries::monomial(i * (n - i)) * e.graded_rank;
    e.pass = e.image.precision().value_or(precision) >= precision &&
             e.image.truncated(precision) == LaurentSeries::constant(1).truncated(precision);
    if (i == 0 || i == n) {
      const SeriesMatrix c = cartan_matrix(build_truncated_poly(1, 2));
      e.cartan_check = c(0, 0) == e.graded_rank;
    } else if (i == 1 || i == n - 1) {
      const SeriesMatrix c = cartan_matrix(build_truncated_poly(n, 2));
      e.cartan_check = c(0, 0) == e.graded_rank;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace qgroth
