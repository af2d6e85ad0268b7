#include "qgroth/galgebra.hpp"

#include <algorithm>
#include <sstream>

#include "qgroth/errors.hpp"

namespace qgroth {

namespace {

constexpr std::size_t kMaxReported = 64;

std::vector<Vector> dense_products(const AlgebraTable& t) {
  const std::size_t n = t.basis.size();
  std::vector<Vector> out(n * n, Vector(n));
  for (const auto& [key, terms] : t.products) {
    for (const auto& [k, c] : terms) out[key.first * n + key.second][k] += c;
  }
  return out;
}

Vector mul_dense(const std::vector<Vector>& prods, std::size_t n, const Vector& u, const Vector& v) {
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j] == 0) continue;
      const Rational f = u[i] * v[j];
      const Vector& p = prods[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        if (p[k] != 0) out[k] += f * p[k];
      }
    }
  }
  return out;
}

Vector unit(std::size_t n, std::size_t i) {
  Vector v(n);
  v[i] = 1;
  return v;
}

std::string label_list(const AlgebraTable& t, const std::vector<std::size_t>& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ", ";
    s += t.basis[w[i]].label;
  }
  return s;
}

}  // namespace

bool ValidationReport::has(const std::string& kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::to_string() const {
  if (ok()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "\n";
    os << violations[i].kind << ": " << violations[i].message;
  }
  return os.str();
}

ValidationReport validate_algebra(const AlgebraTable& t) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string msg, std::vector<std::size_t> w = {}) {
    if (report.violations.size() < kMaxReported) {
      report.violations.push_back({std::move(kind), std::move(msg), std::move(w)});
    }
  };
  const std::size_t n = t.basis.size();
  if (n == 0) {
    add("unit", "empty basis: the algebra has no unit");
    return report;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (t.basis[i].degree < 0) add("grading", "negative degree on " + t.basis[i].label, {i});
  }
  bool range_ok = true;
  for (auto e : t.idempotents) {
    if (e >= n) {
      add("range", "idempotent index out of range");
      range_ok = false;
    }
  }
  for (const auto& [key, terms] : t.products) {
    if (key.first >= n || key.second >= n) {
      add("range", "product index out of range");
      range_ok = false;
      continue;
    }
    for (const auto& term : terms) {
      if (term.first >= n) {
        add("range", "product result index out of range");
        range_ok = false;
      }
    }
  }
  if (!range_ok) return report;

  std::set<std::size_t> idem(t.idempotents.begin(), t.idempotents.end());
  if (idem.size() != t.idempotents.size()) add("basic", "repeated idempotent");
  if (t.idempotents.empty()) add("unit", "no idempotents: the algebra has no unit");
  for (std::size_t i = 0; i < n; ++i) {
    const bool is_idem = idem.contains(i);
    if (is_idem && t.basis[i].degree != 0) {
      add("basic", "idempotent " + t.basis[i].label + " is not in degree 0", {i});
    }
    if (!is_idem && t.basis[i].degree == 0) {
      add("basic", "degree-0 element " + t.basis[i].label + " is not one of the idempotents", {i});
    }
  }

  for (const auto& [key, terms] : t.products) {
    const int want = t.basis[key.first].degree + t.basis[key.second].degree;
    for (const auto& [k, c] : terms) {
      if (c != 0 && t.basis[k].degree != want) {
        add("grading",
            t.basis[key.first].label + "*" + t.basis[key.second].label + " has a term " +
                t.basis[k].label + " of degree " + std::to_string(t.basis[k].degree) +
                " (expected " + std::to_string(want) + ")",
            {key.first, key.second, k});
      }
    }
  }

  const auto prods = dense_products(t);
  for (auto i : t.idempotents) {
    for (auto j : t.idempotents) {
      const Vector expect = i == j ? unit(n, i) : Vector(n);
      if (prods[i * n + j] != expect) {
        std::vector<std::size_t> w{i, j};
        add("orthogonality",
            i == j ? t.basis[i].label + " is not idempotent"
                   : label_list(t, w) + " are not orthogonal",
            w);
      }
    }
  }

  Vector one(n);
  for (auto e : t.idempotents) one[e] += 1;
  for (std::size_t b = 0; b < n; ++b) {
    const Vector eb = unit(n, b);
    if (mul_dense(prods, n, one, eb) != eb || mul_dense(prods, n, eb, one) != eb) {
      add("unit", "sum of idempotents does not act as identity on " + t.basis[b].label, {b});
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vector& ij = prods[i * n + j];
      for (std::size_t k = 0; k < n; ++k) {
        const Vector left = mul_dense(prods, n, ij, unit(n, k));
        const Vector right = mul_dense(prods, n, unit(n, i), prods[j * n + k]);
        if (left != right) {
          std::vector<std::size_t> w{i, j, k};
          add("associativity", "(ab)c != a(bc) for (" + label_list(t, w) + ")", w);
        }
      }
    }
  }
  return report;
}

GradedAlgebra::GradedAlgebra(AlgebraTable table) : table_(std::move(table)) {
  const std::size_t n = dim();
  products_ = dense_products(table_);
  left_mult_.assign(n, Matrix(n, n));
  for (std::size_t i = 0; i < n; ++i) {
    max_degree_ = std::max(max_degree_, table_.basis[i].degree);
    by_degree_[table_.basis[i].degree].push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) left_mult_[i](k, j) = products_[i * n + j][k];
    }
  }
}

AlgebraPtr GradedAlgebra::create(AlgebraTable table) {
  const ValidationReport report = validate_algebra(table);
  if (!report.ok()) {
    throw ValidationError("algebra '" + table.name + "' is invalid:\n" + report.to_string());
  }
  return AlgebraPtr(new GradedAlgebra(std::move(table)));
}

std::optional<std::size_t> GradedAlgebra::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (table_.basis[i].label == label) return i;
  }
  return std::nullopt;
}

std::optional<SimpleIndex> GradedAlgebra::simple_of_label(const std::string& label) const {
  for (std::size_t s = 0; s < num_simples(); ++s) {
    if (basis(table_.idempotents[s]).label == label) return SimpleIndex{s};
  }
  return std::nullopt;
}

const std::vector<std::size_t>& GradedAlgebra::degree_component(int d) const {
  static const std::vector<std::size_t> empty;
  auto it = by_degree_.find(d);
  return it == by_degree_.end() ? empty : it->second;
}

Vector GradedAlgebra::unit_vector(std::size_t i) const { return unit(dim(), i); }

Vector GradedAlgebra::multiply(const Vector& u, const Vector& v) const {
  return mul_dense(products_, dim(), u, v);
}

AlgebraPtr build_truncated_poly(int n, int g) {
  if (n < 1 || g < 1) throw std::invalid_argument("build_truncated_poly: need n >= 1 and g >= 1");
  AlgebraTable t;
  t.name = "k[x]/(x^" + std::to_string(n) + "), deg x = " + std::to_string(g);
  for (int i = 0; i < n; ++i) {
    const std::string label = i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i));
    t.basis.push_back({label, i * g});
  }
  t.idempotents = {0};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n; ++j) {
      t.products[{static_cast<std::size_t>(i), static_cast<std::size_t>(j)}] = {
          {static_cast<std::size_t>(i + j), Rational(1)}};
    }
  }
  return GradedAlgebra::create(std::move(t));
}

AlgebraTable table_from_description(const AlgebraDescription& d) {
  AlgebraTable t;
  t.name = d.name;
  t.basis = d.basis;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < d.basis.size(); ++i) {
    if (!index.emplace(d.basis[i].label, i).second) {
      throw ParseError("duplicate basis label '" + d.basis[i].label + "' in algebra '" + d.name + "'");
    }
  }
  auto lookup = [&](const std::string& label) {
    auto it = index.find(label);
    if (it == index.end()) {
      throw ParseError("unknown basis label '" + label + "' in algebra '" + d.name + "'");
    }
    return it->second;
  };
  for (const auto& e : d.idempotents) t.idempotents.push_back(lookup(e));
  for (const auto& p : d.products) {
    const auto key = std::make_pair(lookup(p.left), lookup(p.right));
    if (t.products.contains(key)) {
      throw ParseError("product " + p.left + "*" + p.right + " given twice in algebra '" + d.name + "'");
    }
    SparseVector terms;
    for (const auto& term : p.result) terms.emplace_back(lookup(term.label), term.coeff);
    t.products.emplace(key, std::move(terms));
  }
  return t;
}

AlgebraPtr build_from_table(const AlgebraDescription& description) {
  return GradedAlgebra::create(table_from_description(description));
}

AlgebraDescription describe(const GradedAlgebra& a) {
  const auto& t = a.table();
  AlgebraDescription d;
  d.name = t.name;
  d.basis = t.basis;
  for (auto e : t.idempotents) d.idempotents.push_back(t.basis[e].label);
  for (const auto& [key, terms] : t.products) {
    AlgebraDescription::Product p{t.basis[key.first].label, t.basis[key.second].label, {}};
    for (const auto& [k, c] : terms) {
      if (c != 0) p.result.push_back({t.basis[k].label, c});
    }
    if (!p.result.empty()) d.products.push_back(std::move(p));
  }
  return d;
}

CornerAlgebra corner_algebra(const AlgebraPtr& a, const std::set<SimpleIndex>& kept) {
  if (kept.empty()) throw std::invalid_argument("corner_algebra: kept set is empty");
  const std::size_t n = a->dim();
  Vector e(n);
  for (auto s : kept) {
    if (s.pos >= a->num_simples()) throw std::out_of_range("corner_algebra: simple out of range");
    e[a->idempotent(s)] = 1;
  }

  CornerAlgebra out;
  out.kept.assign(kept.begin(), kept.end());
  // Per degree: subspace e A_d e of A and the corner index of its first element.
  std::map<int, std::pair<Subspace, std::size_t>> pieces;
  for (int d = 0; d <= a->max_degree(); ++d) {
    std::vector<Vector> images;
    for (auto b : a->degree_component(d)) {
      Vector v = a->multiply(a->multiply(e, a->unit_vector(b)), e);
      if (!is_zero(v)) images.push_back(std::move(v));
    }
    Subspace sub = Subspace::span(n, images);
    if (sub.dim() == 0) continue;
    pieces.emplace(d, std::make_pair(sub, out.embedding.size()));
    for (const auto& v : sub.basis()) out.embedding.push_back(v);
  }

  AlgebraTable t;
  t.name = "corner(" + a->name() + ")";
  std::set<std::string> used;
  for (const auto& [d, piece] : pieces) {
    for (const auto& v : piece.first.basis()) {
      std::optional<std::size_t> amb;
      std::size_t nonzero = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (v[i] != 0) {
          ++nonzero;
          amb = i;
        }
      }
      if (nonzero != 1 || v[*amb] != 1) amb.reset();
      std::string label = amb ? a->basis(*amb).label : "c" + std::to_string(t.basis.size());
      while (!used.insert(label).second) label += "'";
      t.basis.push_back({label, d});
      out.ambient_index.push_back(amb);
    }
  }
  for (auto s : out.kept) {
    const auto& deg0 = pieces.at(0).first;
    const Vector coords = deg0.coordinates(a->unit_vector(a->idempotent(s)));
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (coords[j] != 0) t.idempotents.push_back(pieces.at(0).second + j);
    }
  }
  const std::size_t m = out.embedding.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Vector prod = a->multiply(out.embedding[i], out.embedding[j]);
      if (is_zero(prod)) continue;
      const int d = t.basis[i].degree + t.basis[j].degree;
      const auto& [sub, offset] = pieces.at(d);
      const Vector coords = sub.coordinates(prod);
      SparseVector terms;
      for (std::size_t k = 0; k < coords.size(); ++k) {
        if (coords[k] != 0) terms.emplace_back(offset + k, coords[k]);
      }
      t.products.emplace(std::make_pair(i, j), std::move(terms));
    }
  }
  out.algebra = GradedAlgebra::create(std::move(t));
  return out;
}

LaurentSeries poincare_series(const GradedAlgebra& a) {
  std::vector<Integer> c(static_cast<std::size_t>(a.max_degree()) + 1);
  for (std::size_t i = 0; i < a.dim(); ++i) c[static_cast<std::size_t>(a.degree(i))] += 1;
  return LaurentSeries(0, std::move(c));
}

}  // namespace qgroth
