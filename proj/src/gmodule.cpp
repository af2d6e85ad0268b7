#include "qgroth/gmodule.hpp"

#include <algorithm>
#include <stdexcept>

#include "qgroth/errors.hpp"

namespace qgroth {

void add_to(FormalSum& sum, ShiftedIndex key, long mult) {
  if (mult == 0) return;
  auto& slot = sum[key];
  slot += mult;
  if (slot == 0) sum.erase(key);
}

GradedModule::GradedModule(AlgebraPtr algebra, std::map<int, std::size_t> components,
                           ActionTable action)
    : algebra_(std::move(algebra)) {
  for (const auto& [d, n] : components) {
    if (n > 0) components_.emplace(d, n);
  }
  for (auto& [key, mat] : action) {
    const int target = key.second + algebra_->degree(key.first);
    if (!components_.contains(key.second) || !components_.contains(target)) continue;
    if (mat.is_zero()) continue;
    action_.emplace(key, std::move(mat));
  }
}

GradedModule GradedModule::unchecked(AlgebraPtr algebra, std::map<int, std::size_t> components,
                                     ActionTable action) {
  return GradedModule(std::move(algebra), std::move(components), std::move(action));
}

GradedModule GradedModule::create(AlgebraPtr algebra, std::map<int, std::size_t> components,
                                  ActionTable action) {
  if (!algebra) throw ValidationError("module has no algebra");
  for (const auto& [key, mat] : action) {
    if (key.first >= algebra->dim()) throw ValidationError("action names an unknown basis element");
    const auto src = components.find(key.second);
    const auto dst = components.find(key.second + algebra->degree(key.first));
    const std::size_t rows = dst == components.end() ? 0 : dst->second;
    const std::size_t cols = src == components.end() ? 0 : src->second;
    if (mat.rows() != rows || mat.cols() != cols) {
      throw ValidationError("action of " + algebra->basis(key.first).label + " from degree " +
                            std::to_string(key.second) + " has shape " +
                            std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()) +
                            ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  GradedModule m(std::move(algebra), std::move(components), std::move(action));
  const auto problems = m.check();
  if (!problems.empty()) {
    std::string msg = "module is invalid:";
    for (const auto& p : problems) msg += "\n" + p;
    throw ValidationError(msg);
  }
  return m;
}

std::size_t GradedModule::dim(int degree) const {
  auto it = components_.find(degree);
  return it == components_.end() ? 0 : it->second;
}

std::size_t GradedModule::total_dim() const {
  std::size_t n = 0;
  for (const auto& [d, k] : components_) n += k;
  return n;
}

std::optional<int> GradedModule::min_degree() const {
  if (components_.empty()) return std::nullopt;
  return components_.begin()->first;
}

std::optional<int> GradedModule::max_degree() const {
  if (components_.empty()) return std::nullopt;
  return components_.rbegin()->first;
}

Matrix GradedModule::action(std::size_t basis, int degree) const {
  auto it = action_.find({basis, degree});
  if (it != action_.end()) return it->second;
  return Matrix(dim(degree + algebra_->degree(basis)), dim(degree));
}

Vector GradedModule::act(const Vector& a, int deg_a, int degree, const Vector& v) const {
  Vector out(dim(degree + deg_a));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    auto it = action_.find({i, degree});
    if (it == action_.end()) continue;
    const Vector w = it->second * v;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += a[i] * w[k];
  }
  return out;
}

std::vector<std::string> GradedModule::check() const {
  std::vector<std::string> problems;
  const auto& alg = *algebra_;
  for (const auto& [d, n] : components_) {
    Matrix sum(n, n);
    for (std::size_t s = 0; s < alg.num_simples(); ++s) {
      sum = sum + action(alg.idempotent(SimpleIndex{s}), d);
    }
    if (!sum.is_identity()) {
      problems.push_back("sum of idempotents is not the identity in degree " + std::to_string(d));
    }
  }
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    for (std::size_t j = 0; j < alg.dim(); ++j) {
      const Vector& prod = alg.product(i, j);
      for (const auto& [d, n] : components_) {
        const Matrix lhs = action(i, d + alg.degree(j)) * action(j, d);
        Matrix rhs(lhs.rows(), lhs.cols());
        for (std::size_t k = 0; k < prod.size(); ++k) {
          if (prod[k] != 0) rhs = rhs + action(k, d).scaled(prod[k]);
        }
        if (lhs != rhs) {
          problems.push_back("action does not respect " + alg.basis(i).label + "*" +
                             alg.basis(j).label + " on degree " + std::to_string(d));
        }
      }
    }
  }
  return problems;
}

ModulePtr make_module(GradedModule m) { return std::make_shared<const GradedModule>(std::move(m)); }

Matrix ModuleMap::block(int degree) const {
  auto it = blocks.find(degree);
  if (it != blocks.end()) return it->second;
  return Matrix(target->dim(degree), source->dim(degree));
}

void check_module_map(const ModuleMap& f) {
  if (!f.source || !f.target) throw NotAModuleMap("map is missing its source or target");
  if (f.source->algebra() != f.target->algebra()) {
    throw NotAModuleMap("source and target are modules over different algebras");
  }
  for (const auto& [d, mat] : f.blocks) {
    if (mat.rows() != f.target->dim(d) || mat.cols() != f.source->dim(d)) {
      throw NotAModuleMap("block in degree " + std::to_string(d) + " has the wrong shape");
    }
  }
  const auto& alg = *f.source->algebra();
  for (std::size_t b = 0; b < alg.dim(); ++b) {
    for (const auto& [d, n] : f.source->components()) {
      const int e = d + alg.degree(b);
      const Matrix lhs = f.block(e) * f.source->action(b, d);
      const Matrix rhs = f.target->action(b, d) * f.block(d);
      if (lhs != rhs) {
        throw NotAModuleMap("map does not commute with " + alg.basis(b).label + " on degree " +
                            std::to_string(d));
      }
    }
  }
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  ModuleMap out{f.source, g.target, {}};
  for (const auto& [d, n] : f.source->components()) {
    Matrix m = g.block(d) * f.block(d);
    if (!m.is_zero()) out.blocks.emplace(d, std::move(m));
  }
  return out;
}

ModuleMap identity_map(const ModulePtr& m) {
  ModuleMap out{m, m, {}};
  for (const auto& [d, n] : m->components()) out.blocks.emplace(d, Matrix::identity(n));
  return out;
}

ModuleMap zero_map(const ModulePtr& source, const ModulePtr& target) {
  return ModuleMap{source, target, {}};
}

bool is_injective(const ModuleMap& f) {
  return std::all_of(f.source->components().begin(), f.source->components().end(),
                     [&](const auto& c) { return rank(f.block(c.first)) == c.second; });
}

bool is_surjective(const ModuleMap& f) {
  return std::all_of(f.target->components().begin(), f.target->components().end(),
                     [&](const auto& c) { return rank(f.block(c.first)) == c.second; });
}

bool is_short_exact(const ModuleMap& i, const ModuleMap& p) {
  if (i.target->components() != p.source->components()) return false;
  if (!is_injective(i) || !is_surjective(p)) return false;
  for (const auto& [d, n] : i.target->components()) {
    if (!(p.block(d) * i.block(d)).is_zero()) return false;
    if (i.source->dim(d) + p.target->dim(d) != n) return false;
  }
  return true;
}

GradedModule simple_module(const AlgebraPtr& a, SimpleIndex s, int shift) {
  ActionTable action;
  Matrix one(1, 1);
  one(0, 0) = 1;
  action.emplace(ActionKey{a->idempotent(s), shift}, one);
  return GradedModule::unchecked(a, {{shift, 1}}, std::move(action));
}

DegreeSubspaces projective_basis(const GradedAlgebra& a, SimpleIndex s) {
  DegreeSubspaces out;
  const std::size_t e = a.idempotent(s);
  for (int d = 0; d <= a.max_degree(); ++d) {
    std::vector<Vector> vs;
    for (auto b : a.degree_component(d)) {
      Vector v = a.product(b, e);
      if (!is_zero(v)) vs.push_back(std::move(v));
    }
    Subspace sub = Subspace::span(a.dim(), vs);
    if (sub.dim() > 0) out.emplace(d, std::move(sub));
  }
  return out;
}

GradedModule projective_module(const AlgebraPtr& a, SimpleIndex s, int shift) {
  const DegreeSubspaces basis = projective_basis(*a, s);
  std::map<int, std::size_t> components;
  for (const auto& [d, sub] : basis) components.emplace(d + shift, sub.dim());
  ActionTable action;
  for (std::size_t b = 0; b < a->dim(); ++b) {
    const int db = a->degree(b);
    for (const auto& [d, sub] : basis) {
      auto tgt = basis.find(d + db);
      if (tgt == basis.end()) continue;
      Matrix m(tgt->second.dim(), sub.dim());
      for (std::size_t j = 0; j < sub.dim(); ++j) {
        const Vector w = a->multiply(a->unit_vector(b), sub.basis()[j]);
        const Vector c = tgt->second.coordinates(w);
        for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
      }
      action.emplace(ActionKey{b, d + shift}, std::move(m));
    }
  }
  return GradedModule::unchecked(a, std::move(components), std::move(action));
}

GradedModule shifted(const GradedModule& m, int k) {
  std::map<int, std::size_t> components;
  for (const auto& [d, n] : m.components()) components.emplace(d + k, n);
  ActionTable action;
  for (const auto& [key, mat] : m.action_table()) action.emplace(ActionKey{key.first, key.second + k}, mat);
  return GradedModule::unchecked(m.algebra(), std::move(components), std::move(action));
}

namespace {

// Offset of each part within the direct sum, per degree.
std::vector<std::map<int, std::size_t>> sum_offsets(const std::vector<ModulePtr>& parts,
                                                    std::map<int, std::size_t>& totals) {
  std::vector<std::map<int, std::size_t>> offsets(parts.size());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (const auto& [d, n] : parts[p]->components()) {
      offsets[p][d] = totals[d];
      totals[d] += n;
    }
  }
  return offsets;
}

}  // namespace

GradedModule direct_sum(const std::vector<ModulePtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum of no modules");
  const AlgebraPtr& a = parts.front()->algebra();
  std::map<int, std::size_t> totals;
  const auto offsets = sum_offsets(parts, totals);
  ActionTable action;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (const auto& [key, mat] : parts[p]->action_table()) {
      const int src = key.second;
      const int dst = src + a->degree(key.first);
      auto [it, fresh] = action.try_emplace(key, totals[dst], totals[src]);
      const std::size_t r0 = offsets[p].at(dst);
      const std::size_t c0 = offsets[p].at(src);
      for (std::size_t i = 0; i < mat.rows(); ++i) {
        for (std::size_t j = 0; j < mat.cols(); ++j) it->second(r0 + i, c0 + j) = mat(i, j);
      }
    }
  }
  return GradedModule::unchecked(a, std::move(totals), std::move(action));
}

GradedModule projective_sum(const AlgebraPtr& a, const FormalSum& terms) {
  std::vector<ModulePtr> parts;
  for (const auto& [key, mult] : terms) {
    if (mult < 0) throw std::invalid_argument("projective_sum: negative multiplicity");
    if (mult == 0) continue;
    auto p = make_module(projective_module(a, key.simple, key.shift));
    for (long k = 0; k < mult; ++k) parts.push_back(p);
  }
  if (parts.empty()) return GradedModule::unchecked(a, {}, {});
  return direct_sum(parts);
}

Submodule submodule(const ModulePtr& m, const DegreeSubspaces& subspaces) {
  const auto& alg = *m->algebra();
  std::map<int, std::size_t> components;
  for (const auto& [d, sub] : subspaces) {
    if (sub.ambient() != m->dim(d)) throw std::invalid_argument("submodule: subspace has wrong ambient");
    if (sub.dim() > 0) components.emplace(d, sub.dim());
  }
  ActionTable action;
  for (const auto& [d, sub] : subspaces) {
    if (sub.dim() == 0) continue;
    for (std::size_t b = 0; b < alg.dim(); ++b) {
      const int e = d + alg.degree(b);
      const Matrix act = m->action(b, d);
      if (act.rows() == 0) continue;
      auto tgt = subspaces.find(e);
      Matrix mat(tgt == subspaces.end() ? 0 : tgt->second.dim(), sub.dim());
      for (std::size_t j = 0; j < sub.dim(); ++j) {
        const Vector w = act * sub.basis()[j];
        if (tgt == subspaces.end()) {
          if (!is_zero(w)) throw std::invalid_argument("submodule: subspaces are not A-stable");
          continue;
        }
        if (!tgt->second.contains(w)) throw std::invalid_argument("submodule: subspaces are not A-stable");
        const Vector c = tgt->second.coordinates(w);
        for (std::size_t i = 0; i < c.size(); ++i) mat(i, j) = c[i];
      }
      if (mat.rows() > 0) action.emplace(ActionKey{b, d}, std::move(mat));
    }
  }
  auto sub_module = make_module(GradedModule::unchecked(m->algebra(), std::move(components), std::move(action)));
  ModuleMap inc{sub_module, m, {}};
  for (const auto& [d, sub] : subspaces) {
    if (sub.dim() > 0) inc.blocks.emplace(d, sub.basis_matrix());
  }
  return Submodule{sub_module, std::move(inc)};
}

Submodule generated_submodule(const ModulePtr& m, const std::vector<std::pair<int, Vector>>& elements) {
  const auto& alg = *m->algebra();
  std::map<int, std::vector<Vector>> spans;
  for (const auto& [d, v] : elements) {
    for (std::size_t b = 0; b < alg.dim(); ++b) {
      Vector w = m->action(b, d) * v;
      if (!is_zero(w)) spans[d + alg.degree(b)].push_back(std::move(w));
    }
  }
  DegreeSubspaces subs;
  for (const auto& [d, vs] : spans) subs.emplace(d, Subspace::span(m->dim(d), vs));
  return submodule(m, subs);
}

QuotientModule quotient(const ModulePtr& m, const DegreeSubspaces& subspaces) {
  const auto& alg = *m->algebra();
  auto sub_at = [&](int d) {
    auto it = subspaces.find(d);
    return it == subspaces.end() ? Subspace(m->dim(d)) : it->second;
  };
  std::map<int, Matrix> proj;
  std::map<int, std::vector<std::size_t>> comp;
  std::map<int, std::size_t> components;
  for (const auto& [d, n] : m->components()) {
    const Subspace s = sub_at(d);
    proj.emplace(d, s.quotient_map());
    comp.emplace(d, s.complement_cols());
    if (n > s.dim()) components.emplace(d, n - s.dim());
  }
  ActionTable action;
  for (const auto& [d, cols] : comp) {
    if (cols.empty()) continue;
    for (std::size_t b = 0; b < alg.dim(); ++b) {
      const int e = d + alg.degree(b);
      auto pe = proj.find(e);
      if (pe == proj.end() || pe->second.rows() == 0) continue;
      const Matrix act = m->action(b, d);
      Matrix mat(pe->second.rows(), cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const Vector c = pe->second * act.column(cols[j]);
        for (std::size_t i = 0; i < c.size(); ++i) mat(i, j) = c[i];
      }
      action.emplace(ActionKey{b, d}, std::move(mat));
    }
  }
  auto q = make_module(GradedModule::unchecked(m->algebra(), std::move(components), std::move(action)));
  ModuleMap p{m, q, {}};
  for (auto& [d, mat] : proj) {
    if (mat.rows() > 0) p.blocks.emplace(d, std::move(mat));
  }
  return QuotientModule{q, std::move(p)};
}

Submodule kernel(const ModuleMap& f) {
  check_module_map(f);
  DegreeSubspaces subs;
  for (const auto& [d, n] : f.source->components()) subs.emplace(d, Subspace::null_space(f.block(d)));
  return submodule(f.source, subs);
}

Submodule image(const ModuleMap& f) {
  check_module_map(f);
  DegreeSubspaces subs;
  for (const auto& [d, n] : f.target->components()) subs.emplace(d, Subspace::column_space(f.block(d)));
  return submodule(f.target, subs);
}

namespace {

DegreeSubspaces radical_subspaces(const GradedModule& m) {
  const auto& alg = *m.algebra();
  std::map<int, std::vector<Vector>> spans;
  for (const auto& [key, mat] : m.action_table()) {
    const int db = alg.degree(key.first);
    if (db == 0) continue;
    for (std::size_t c = 0; c < mat.cols(); ++c) {
      Vector v = mat.column(c);
      if (!is_zero(v)) spans[key.second + db].push_back(std::move(v));
    }
  }
  DegreeSubspaces out;
  for (const auto& [d, n] : m.components()) {
    auto it = spans.find(d);
    out.emplace(d, it == spans.end() ? Subspace(n) : Subspace::span(n, it->second));
  }
  return out;
}

struct TopGenerator {
  ShiftedIndex key;
  Vector vector;  // element of M_{key.shift} lying in e_s M
};

// Lifts of a basis of M / rad M adapted to the idempotent decomposition,
// ordered by degree, then simple.
std::vector<TopGenerator> top_generators(const GradedModule& m, const DegreeSubspaces& rad) {
  const auto& alg = *m.algebra();
  std::vector<TopGenerator> out;
  for (const auto& [d, n] : m.components()) {
    const Subspace& r = rad.at(d);
    for (std::size_t s = 0; s < alg.num_simples(); ++s) {
      const SimpleIndex si{s};
      const Matrix es = m.action(alg.idempotent(si), d);
      const Subspace piece = Subspace::column_space(es);
      std::vector<Vector> current;
      for (const auto& v : r.basis()) {
        Vector w = es * v;
        if (!is_zero(w)) current.push_back(std::move(w));
      }
      std::size_t have = Subspace::span(n, current).dim();
      for (const auto& v : piece.basis()) {
        current.push_back(v);
        const std::size_t next = Subspace::span(n, current).dim();
        if (next > have) {
          out.push_back({ShiftedIndex{si, d}, v});
          have = next;
        } else {
          current.pop_back();
        }
      }
    }
  }
  return out;
}

}  // namespace

RadicalTop radical_and_top(const ModulePtr& m) {
  const DegreeSubspaces rad = radical_subspaces(*m);
  RadicalTop out{submodule(m, rad), {}};
  for (const auto& g : top_generators(*m, rad)) add_to(out.top, g.key, 1);
  return out;
}

ProjectiveCover projective_cover(const ModulePtr& m) {
  if (m->is_zero()) throw ZeroModule("projective cover of the zero module");
  const AlgebraPtr& a = m->algebra();
  const auto gens = top_generators(*m, radical_subspaces(*m));

  std::map<SimpleIndex, DegreeSubspaces> pbasis;
  std::vector<ModulePtr> parts;
  ProjectiveCover out;
  for (const auto& g : gens) {
    if (!pbasis.contains(g.key.simple)) pbasis.emplace(g.key.simple, projective_basis(*a, g.key.simple));
    parts.push_back(make_module(projective_module(a, g.key.simple, g.key.shift)));
    out.summands.push_back(g.key);
  }
  out.cover = make_module(direct_sum(parts));

  // Columns of the surjection: summand by summand, basis order within each.
  std::map<int, std::vector<Vector>> columns;
  for (const auto& g : gens) {
    for (const auto& [k, sub] : pbasis.at(g.key.simple)) {
      for (const auto& v : sub.basis()) columns[k + g.key.shift].push_back(m->act(v, k, g.key.shift, g.vector));
    }
  }
  out.surjection = ModuleMap{out.cover, m, {}};
  for (const auto& [d, cols] : columns) {
    out.surjection.blocks.emplace(d, Matrix::from_columns(m->dim(d), cols));
  }
  return out;
}

WeightData weight_data(const GradedModule& m) {
  WeightData w;
  for (const auto& [d, n] : m.components()) w.weights_present.insert(weight_of_degree(d));
  if (!w.weights_present.empty()) w.degree = *w.weights_present.rbegin();
  return w;
}

namespace {

// Subspaces of the components of weight <= n, i.e. internal degree >= -n.
DegreeSubspaces weight_window(const GradedModule& m, int n) {
  DegreeSubspaces subs;
  for (const auto& [d, k] : m.components()) {
    subs.emplace(d, weight_of_degree(d) <= n ? Subspace::whole(k) : Subspace(k));
  }
  return subs;
}

}  // namespace

std::vector<FiltrationStep> weight_filtration(const ModulePtr& m) {
  std::vector<FiltrationStep> out;
  for (int w : weight_data(*m).weights_present) out.push_back({w, submodule(m, weight_window(*m, w))});
  return out;
}

BaricSplit baric_truncate(const ModulePtr& m, int n) {
  const DegreeSubspaces subs = weight_window(*m, n);
  return BaricSplit{submodule(m, subs), quotient(m, subs)};
}

}  // namespace qgroth
