#include "qgroth/kgroup.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "qgroth/errors.hpp"

namespace qgroth {

std::string to_string(BasisMode m) { return m == BasisMode::Simple ? "simple" : "projective"; }

KClass::KClass(AlgebraPtr algebra, BasisMode mode, std::vector<LaurentSeries> coords, Precision precision)
    : algebra_(std::move(algebra)), mode_(mode), coords_(std::move(coords)), precision_(precision) {
  if (algebra_ && coords_.size() != algebra_->num_simples()) {
    throw ShapeMismatch("class has " + std::to_string(coords_.size()) + " coordinates, algebra has " +
                        std::to_string(algebra_->num_simples()) + " simples");
  }
  for (const auto& c : coords_) precision_ = min_precision(precision_, c.precision());
  for (auto& c : coords_) c = c.truncated(precision_);
}

KClass KClass::zero(AlgebraPtr algebra, BasisMode mode, Precision precision) {
  const std::size_t n = algebra ? algebra->num_simples() : 0;
  return KClass(std::move(algebra), mode, std::vector<LaurentSeries>(n), precision);
}

KClass KClass::generator(AlgebraPtr algebra, BasisMode mode, SimpleIndex s, int shift) {
  std::vector<LaurentSeries> coords(algebra->num_simples());
  coords.at(s.pos) = LaurentSeries::monomial(shift);
  return KClass(std::move(algebra), mode, std::move(coords));
}

bool KClass::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const LaurentSeries& c) { return c.is_zero(); });
}

KClass KClass::truncated(Precision n) const { return KClass(algebra_, mode_, coords_, min_precision(n, precision_)); }

KClass KClass::times(const LaurentSeries& s) const {
  std::vector<LaurentSeries> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c * s);
  return KClass(algebra_, mode_, std::move(out));
}

namespace {

void require_compatible(const KClass& a, const KClass& b, const char* what) {
  if (a.mode() != b.mode()) {
    throw BasisMismatch(std::string(what) + ": classes in " + to_string(a.mode()) + " and " + to_string(b.mode()) +
                        " bases");
  }
  if (a.algebra() != b.algebra() && (a.algebra() && b.algebra()) &&
      describe(*a.algebra()) != describe(*b.algebra())) {
    throw BasisMismatch(std::string(what) + ": classes over different algebras");
  }
  if (a.rank() != b.rank()) throw BasisMismatch(std::string(what) + ": ranks differ");
}

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return describe(*a) == describe(*b);
}

}  // namespace

KClass operator+(const KClass& a, const KClass& b) {
  require_compatible(a, b, "add");
  std::vector<LaurentSeries> out;
  for (std::size_t i = 0; i < a.rank(); ++i) out.push_back(a.coords_[i] + b.coords_[i]);
  return KClass(a.algebra_, a.mode_, std::move(out), min_precision(a.precision_, b.precision_));
}

KClass operator-(const KClass& a, const KClass& b) { return a + (-b); }

KClass KClass::operator-() const {
  std::vector<LaurentSeries> out;
  for (const auto& c : coords_) out.push_back(-c);
  return KClass(algebra_, mode_, std::move(out), precision_);
}

bool operator==(const KClass& a, const KClass& b) {
  return a.mode_ == b.mode_ && same_algebra(a.algebra_, b.algebra_) && a.precision_ == b.precision_ &&
         a.coords_ == b.coords_;
}

std::string generator_name(const GradedAlgebra& a, BasisMode mode, SimpleIndex s) {
  const std::string base = mode == BasisMode::Simple ? "L" : "P";
  if (a.num_simples() == 1) return base;
  return base + "_" + a.simple_label(s);
}

std::string KClass::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out << '\n';
    out << '[' << generator_name(*algebra_, mode_, SimpleIndex{i}) << "]: " << coords_[i].to_string();
  }
  return out.str();
}

Comparison compare(const KClass& a, const KClass& b) {
  if (a.mode() != b.mode() || !same_algebra(a.algebra(), b.algebra()) || a.rank() != b.rank()) {
    return Comparison::Unequal;
  }
  bool all_equal = true;
  bool all_incomparable = a.rank() > 0;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    const Comparison c = compare(a.coords()[i], b.coords()[i]);
    if (c == Comparison::Unequal) return Comparison::Unequal;
    if (c != Comparison::Equal) all_equal = false;
    if (c != Comparison::Incomparable) all_incomparable = false;
  }
  if (all_equal) return Comparison::Equal;
  return all_incomparable ? Comparison::Incomparable : Comparison::EqualSoFar;
}

KClass class_of_module(const GradedModule& m) {
  const AlgebraPtr& a = m.algebra();
  std::vector<LaurentSeries> coords(a->num_simples());
  for (const auto& [d, n] : m.components()) {
    for (std::size_t s = 0; s < a->num_simples(); ++s) {
      const std::size_t mult = rank(m.action(a->idempotent(SimpleIndex{s}), d));
      if (mult) coords[s] += LaurentSeries::monomial(d, static_cast<long>(mult));
    }
  }
  return KClass(a, BasisMode::Simple, std::move(coords));
}

KClass class_of_sum(const AlgebraPtr& a, BasisMode mode, const FormalSum& terms) {
  std::vector<LaurentSeries> coords(a->num_simples());
  for (const auto& [key, mult] : terms) {
    if (mult) coords.at(key.simple.pos) += LaurentSeries::monomial(key.shift, mult);
  }
  return KClass(a, mode, std::move(coords));
}

SeriesMatrix cartan_matrix(const AlgebraPtr& a) {
  const std::size_t r = a->num_simples();
  SeriesMatrix c(r, r);
  for (std::size_t s = 0; s < r; ++s) {
    const KClass col = class_of_module(projective_module(a, SimpleIndex{s}, 0));
    for (std::size_t t = 0; t < r; ++t) c(t, s) = col.coords()[t];
  }
  return c;
}

namespace {

std::vector<LaurentSeries> apply_matrix(const SeriesMatrix& m, const std::vector<LaurentSeries>& v) {
  if (m.cols() != v.size()) throw ShapeMismatch("matrix does not match the class rank");
  std::vector<LaurentSeries> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  }
  return out;
}

}  // namespace

KClass change_basis(const KClass& x, BasisMode to, int precision) {
  if (x.precision() && *x.precision() < precision) {
    throw PrecisionUnderflow("class is known to O(q^" + std::to_string(*x.precision()) + "), requested O(q^" +
                             std::to_string(precision) + ")");
  }
  if (x.mode() == to) return x.truncated(x.is_exact() ? Precision{} : Precision{precision});
  const SeriesMatrix c = cartan_matrix(x.algebra());
  if (to == BasisMode::Simple) {
    KClass out(x.algebra(), to, apply_matrix(c, x.coords()), x.precision());
    return out.truncated(x.precision() ? Precision{precision} : Precision{});
  }
  std::optional<int> vmin;
  for (const auto& s : x.coords()) {
    if (!s.is_zero()) vmin = vmin ? std::min(*vmin, s.valuation()) : s.valuation();
  }
  if (!vmin) return KClass(x.algebra(), to, x.coords(), x.precision()).truncated(precision);
  const SeriesMatrix inv = c.inverse(std::max(1, precision - *vmin));
  return KClass(x.algebra(), to, apply_matrix(inv, x.coords())).truncated(precision);
}

KClass euler_characteristic(const ProjComplex& c, int precision) {
  if (c.stop == StopReason::NonDecreasingWeights) {
    throw NotAsymptoticallyDecreasing("resolution weights stopped decreasing; no certificate for O(q^" +
                                      std::to_string(precision) + ")");
  }
  const Precision achieved = c.kclass_precision();
  if (achieved && *achieved < precision) {
    throw NotAsymptoticallyDecreasing("certificate only reaches O(q^" + std::to_string(*achieved) +
                                      "), requested O(q^" + std::to_string(precision) + ") (stopped: " +
                                      to_string(c.stop) + ")");
  }
  if (!c.algebra) throw std::invalid_argument("euler_characteristic: complex has no algebra");
  KClass sum = KClass::zero(c.algebra, BasisMode::Projective);
  for (const auto& [i, term] : c.terms) {
    const KClass t = class_of_sum(c.algebra, BasisMode::Projective, term);
    sum = (i % 2 == 0) ? sum + t : sum - t;
  }
  return achieved ? sum.truncated(precision) : sum;
}

KClass euler_characteristic(const AlgebraPtr& a, const std::map<int, ModulePtr>& cohomologies) {
  KClass sum = KClass::zero(a, BasisMode::Simple);
  for (const auto& [i, h] : cohomologies) {
    if (!h) continue;
    const KClass t = class_of_module(*h);
    sum = (i % 2 == 0) ? sum + t : sum - t;
  }
  return sum;
}

KClass euler_characteristic(const ModuleComplex& c) { return euler_characteristic(c.algebra, c.cohomologies()); }

BetaSplit beta_map(const KClass& x, int m) {
  if (x.mode() != BasisMode::Simple) throw BasisMismatch("beta_map needs a class in the simple basis");
  if (x.precision() && *x.precision() <= -m) {
    throw PrecisionUnderflow("class known to O(q^" + std::to_string(*x.precision()) + ") does not reach weight " +
                             std::to_string(m));
  }
  std::vector<LaurentSeries> exact;
  for (const auto& s : x.coords()) {
    // weight -i >= m  <=>  i <= -m
    const LaurentSeries low = s.truncated(-m + 1);
    exact.emplace_back(low.valuation(), low.coeffs());
  }
  KClass at_least(x.algebra(), BasisMode::Simple, std::move(exact));
  KClass below = x - at_least;
  return {std::move(at_least), std::move(below)};
}

ModuleComplex SimpleComplex::to_module_complex() const {
  ModuleComplex out;
  out.algebra = algebra;
  for (const auto& [i, term] : terms) {
    std::vector<ModulePtr> parts;
    for (const auto& [key, mult] : term) {
      for (long k = 0; k < mult; ++k) parts.push_back(make_module(simple_module(algebra, key.simple, key.shift)));
    }
    if (!parts.empty()) out.terms.emplace(i, make_module(direct_sum(parts)));
  }
  return out;
}

KClass euler_characteristic(const SimpleComplex& c) {
  KClass sum = KClass::zero(c.algebra, BasisMode::Simple);
  for (const auto& [i, term] : c.terms) {
    const KClass t = class_of_sum(c.algebra, BasisMode::Simple, term);
    sum = (i % 2 == 0) ? sum + t : sum - t;
  }
  return sum;
}

SimpleComplex realize_class(const KClass& target, int n, int depth) {
  if (target.mode() != BasisMode::Simple) throw BasisMismatch("realize_class needs a class in the simple basis");
  if (depth < 0) throw std::invalid_argument("realize_class: depth must be nonnegative");
  std::optional<int> lowest;
  for (const auto& s : target.coords()) {
    if (!s.is_zero()) lowest = lowest ? std::min(*lowest, s.valuation()) : s.valuation();
  }
  if (lowest && weight_of_degree(*lowest) > n) {
    throw WeightTooHigh("target has weight " + std::to_string(weight_of_degree(*lowest)) + " above " +
                        std::to_string(n));
  }
  SimpleComplex out;
  out.algebra = target.algebra();
  int layers = depth;
  // layer i covers exponent i - n - 1
  if (target.precision()) layers = std::max(0, std::min(layers, *target.precision() + n));
  for (int i = 1; i <= layers; ++i) {
    const int e = i - n - 1;
    for (std::size_t s = 0; s < target.rank(); ++s) {
      const Integer c = target.coords()[s].coeff(e);
      if (c > 0) add_to(out.terms[-2 * i], {SimpleIndex{s}, e}, c.get_si());
      if (c < 0) add_to(out.terms[-2 * i + 1], {SimpleIndex{s}, e}, -c.get_si());
    }
  }
  std::erase_if(out.terms, [](const auto& kv) { return kv.second.empty(); });
  std::optional<int> highest;
  for (const auto& s : target.coords()) {
    if (!s.is_zero()) highest = highest ? std::max(*highest, s.top_exponent()) : s.top_exponent();
  }
  const int covered = layers - n;  // first exponent not covered
  if (target.is_exact() && (!highest || *highest < covered)) {
    out.precision = std::nullopt;
  } else {
    out.precision = min_precision(target.precision(), covered);
  }
  return out;
}

std::size_t GradedBimodule::dim(int d) const {
  auto it = components.find(d);
  return it == components.end() ? 0 : it->second;
}

Matrix GradedBimodule::left_matrix(std::size_t b, int d) const {
  auto it = left_action.find({b, d});
  if (it != left_action.end()) return it->second;
  return Matrix(dim(d + left->degree(b)), dim(d));
}

Matrix GradedBimodule::right_matrix(std::size_t a, int d) const {
  auto it = right_action.find({a, d});
  if (it != right_action.end()) return it->second;
  return Matrix(dim(d + right->degree(a)), dim(d));
}

namespace {

Matrix combine(const Vector& coeffs, const std::function<Matrix(std::size_t)>& part, std::size_t rows,
               std::size_t cols) {
  Matrix out(rows, cols);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0) out = out + part(k).scaled(coeffs[k]);
  }
  return out;
}

Matrix unit_action(const AlgebraPtr& alg, const std::function<Matrix(std::size_t)>& act, std::size_t n) {
  Matrix out(n, n);
  for (std::size_t s = 0; s < alg->num_simples(); ++s) out = out + act(alg->idempotent(SimpleIndex{s}));
  return out;
}

}  // namespace

std::vector<std::string> GradedBimodule::check() const {
  std::vector<std::string> problems;
  if (!left || !right) {
    problems.push_back("bimodule needs both algebras");
    return problems;
  }
  auto shape_ok = [&](const ActionTable& t, const AlgebraPtr& alg, const char* side) {
    for (const auto& [key, m] : t) {
      if (key.first >= alg->dim()) {
        problems.push_back(std::string(side) + " action names basis element " + std::to_string(key.first) +
                           " out of range");
        continue;
      }
      const int d = key.second;
      if (m.rows() != dim(d + alg->degree(key.first)) || m.cols() != dim(d)) {
        problems.push_back(std::string(side) + " action of " + alg->basis(key.first).label + " on degree " +
                           std::to_string(d) + " has the wrong shape");
      }
    }
  };
  shape_ok(left_action, left, "left");
  shape_ok(right_action, right, "right");
  if (!problems.empty()) return problems;

  for (const auto& [d, n] : components) {
    if (!unit_action(left, [&](std::size_t b) { return left_matrix(b, d); }, n).is_identity()) {
      problems.push_back("left unit does not act as the identity on degree " + std::to_string(d));
    }
    if (!unit_action(right, [&](std::size_t a) { return right_matrix(a, d); }, n).is_identity()) {
      problems.push_back("right unit does not act as the identity on degree " + std::to_string(d));
    }
    for (std::size_t i = 0; i < left->dim(); ++i) {
      for (std::size_t j = 0; j < left->dim(); ++j) {
        const int dj = left->degree(j);
        const int dij = left->degree(i) + dj;
        const Matrix lhs = left_matrix(i, d + dj) * left_matrix(j, d);
        const Matrix rhs =
            combine(left->product(i, j), [&](std::size_t k) { return left_matrix(k, d); }, dim(d + dij), n);
        if (lhs != rhs) {
          problems.push_back("left action not associative for " + left->basis(i).label + ", " +
                             left->basis(j).label + " on degree " + std::to_string(d));
        }
      }
    }
    for (std::size_t i = 0; i < right->dim(); ++i) {
      for (std::size_t j = 0; j < right->dim(); ++j) {
        // (m a_i) a_j = m (a_i a_j)
        const int di = right->degree(i);
        const int dij = di + right->degree(j);
        const Matrix lhs = right_matrix(j, d + di) * right_matrix(i, d);
        const Matrix rhs =
            combine(right->product(i, j), [&](std::size_t k) { return right_matrix(k, d); }, dim(d + dij), n);
        if (lhs != rhs) {
          problems.push_back("right action not associative for " + right->basis(i).label + ", " +
                             right->basis(j).label + " on degree " + std::to_string(d));
        }
      }
    }
    for (std::size_t b = 0; b < left->dim(); ++b) {
      for (std::size_t a = 0; a < right->dim(); ++a) {
        const Matrix lr = left_matrix(b, d + right->degree(a)) * right_matrix(a, d);
        const Matrix rl = right_matrix(a, d + left->degree(b)) * left_matrix(b, d);
        if (lr != rl) {
          problems.push_back("actions of " + left->basis(b).label + " and " + right->basis(a).label +
                             " do not commute on degree " + std::to_string(d));
        }
      }
    }
  }
  return problems;
}

GradedBimodule regular_bimodule(const AlgebraPtr& a) {
  GradedBimodule m;
  m.left = a;
  m.right = a;
  // degree d component = span of basis elements of degree d, in ascending order
  std::map<int, std::vector<std::size_t>> pos;
  for (int d = 0; d <= a->max_degree(); ++d) {
    const auto& comp = a->degree_component(d);
    if (!comp.empty()) {
      m.components.emplace(d, comp.size());
      pos.emplace(d, comp);
    }
  }
  auto local = [&](int d, std::size_t global) {
    const auto& v = pos.at(d);
    return static_cast<std::size_t>(std::find(v.begin(), v.end(), global) - v.begin());
  };
  for (std::size_t b = 0; b < a->dim(); ++b) {
    const int db = a->degree(b);
    for (const auto& [d, basis] : pos) {
      if (!pos.count(d + db)) continue;
      Matrix l(pos.at(d + db).size(), basis.size());
      Matrix r(pos.at(d + db).size(), basis.size());
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const Vector& lp = a->product(b, basis[j]);
        const Vector& rp = a->product(basis[j], b);
        for (std::size_t k = 0; k < a->dim(); ++k) {
          if (lp[k] != 0) l(local(d + db, k), j) = lp[k];
          if (rp[k] != 0) r(local(d + db, k), j) = rp[k];
        }
      }
      if (!l.is_zero()) m.left_action.emplace(ActionKey{b, d}, std::move(l));
      if (!r.is_zero()) m.right_action.emplace(ActionKey{b, d}, std::move(r));
    }
  }
  return m;
}

KClass KLinearMap::apply(const KClass& x) const {
  if (x.mode() != BasisMode::Simple) throw BasisMismatch("K-maps act on classes in the simple basis");
  if (x.rank() != source_rank || (source && x.algebra() && !same_algebra(source, x.algebra()))) {
    throw ShapeMismatch("class does not belong to the source of the map");
  }
  return KClass(target, BasisMode::Simple, apply_matrix(matrix, x.coords()), min_precision(precision, x.precision()));
}

KLinearMap compose(const KLinearMap& g, const KLinearMap& f) {
  if (g.source_rank != f.target_rank || !(g.source_rank == 0 || same_algebra(g.source, f.target))) {
    throw ShapeMismatch("maps are not composable");
  }
  KLinearMap out;
  out.source = f.source;
  out.target = g.target;
  out.source_rank = f.source_rank;
  out.target_rank = g.target_rank;
  out.matrix = g.matrix * f.matrix;
  out.precision = min_precision(g.precision, f.precision);
  if (g.observed_amplitude && f.observed_amplitude) out.observed_amplitude = *g.observed_amplitude + *f.observed_amplitude;
  return out;
}

GradedModule corner_restriction(const GradedModule& m, const CornerAlgebra& corner) {
  const AlgebraPtr& a = m.algebra();
  Vector e(a->dim());
  for (auto s : corner.kept) e[a->idempotent(s)] = 1;
  std::map<int, Subspace> pieces;
  std::map<int, std::size_t> components;
  for (const auto& [d, n] : m.components()) {
    Matrix ed(n, n);
    for (auto s : corner.kept) ed = ed + m.action(a->idempotent(s), d);
    Subspace sub = Subspace::column_space(ed);
    if (sub.dim() == 0) continue;
    components.emplace(d, sub.dim());
    pieces.emplace(d, std::move(sub));
  }
  ActionTable action;
  const AlgebraPtr& b = corner.algebra;
  for (std::size_t j = 0; j < b->dim(); ++j) {
    const int dj = b->degree(j);
    for (const auto& [d, sub] : pieces) {
      auto tgt = pieces.find(d + dj);
      if (tgt == pieces.end()) continue;
      Matrix mat(tgt->second.dim(), sub.dim());
      for (std::size_t k = 0; k < sub.dim(); ++k) {
        const Vector w = m.act(corner.embedding[j], dj, d, sub.basis()[k]);
        const Vector c = tgt->second.coordinates(w);
        for (std::size_t i = 0; i < c.size(); ++i) mat(i, k) = c[i];
      }
      if (!mat.is_zero()) action.emplace(ActionKey{j, d}, std::move(mat));
    }
  }
  return GradedModule::unchecked(b, std::move(components), std::move(action));
}

namespace {

std::optional<int> max_weight(const LaurentSeries& s) {
  if (s.is_zero()) return std::nullopt;
  return weight_of_degree(s.valuation());
}

void absorb(std::optional<int>& acc, std::optional<int> w) {
  if (w) acc = acc ? std::max(*acc, *w) : *w;
}

std::optional<int> amplitude_of(const SeriesMatrix& m) {
  std::optional<int> amp;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) absorb(amp, max_weight(m(i, j)));
  }
  return amp;
}

// Resolve m far enough that classes of F applied termwise are known to
// `precision`, given that F raises valuations by at least `min_val`.
ProjComplex resolve_for(const ModulePtr& m, int precision, int min_val, int depth_cap) {
  const int floor = min_val - precision + 1;
  ProjComplex res = minimal_resolution(m, floor, depth_cap);
  if (res.stop == StopReason::NonDecreasingWeights) {
    throw NotAsymptoticallyDecreasing("resolution weights stopped decreasing");
  }
  const Precision achieved = res.kclass_precision();
  if (achieved && *achieved + min_val < precision) {
    throw NotAsymptoticallyDecreasing("resolution stopped (" + to_string(res.stop) + ") before O(q^" +
                                      std::to_string(precision) + ") was certified");
  }
  return res;
}

// Weight gain of each resolution step under a functor whose value on P_j has
// top weight gains[j]; throws AmplitudeUnbounded on sustained growth.
void watch_gains(const ProjComplex& res, const std::vector<std::optional<int>>& gains, std::size_t window) {
  std::vector<int> seq;
  for (auto it = res.terms.rbegin(); it != res.terms.rend(); ++it) {
    std::optional<int> image;
    for (const auto& [key, mult] : it->second) {
      if (mult == 0 || !gains[key.simple.pos]) continue;
      absorb(image, weight_of_degree(key.shift) + *gains[key.simple.pos]);
    }
    const auto deg = degree_of(it->second);
    if (!image || !deg) continue;
    seq.push_back(*image - *deg);
    if (seq.size() > window) {
      bool growing = true;
      for (std::size_t k = seq.size() - window; k < seq.size(); ++k) {
        if (seq[k] <= seq[k - 1]) growing = false;
      }
      if (growing) {
        throw AmplitudeUnbounded("weight gain grew over " + std::to_string(window) +
                                 " consecutive resolution steps, reaching " + std::to_string(seq.back()));
      }
    }
  }
}

KLinearMap finish(KLinearMap out, int precision) {
  bool exact = true;
  for (std::size_t i = 0; i < out.matrix.rows(); ++i) {
    for (std::size_t j = 0; j < out.matrix.cols(); ++j) {
      if (!out.matrix(i, j).is_exact()) exact = false;
    }
  }
  if (!exact) {
    out.matrix = out.matrix.truncated(precision);
    out.precision = precision;
  }
  out.observed_amplitude = amplitude_of(out.matrix);
  return out;
}

KLinearMap identity_kmap(const IdentityFunctor& f, int precision) {
  KLinearMap out;
  out.source = out.target = f.algebra;
  out.source_rank = out.target_rank = f.algebra->num_simples();
  out.matrix = SeriesMatrix::identity(out.source_rank);
  return finish(std::move(out), precision);
}

std::set<SimpleIndex> kept_simples(const AlgebraPtr& a, const std::set<SimpleIndex>& killed) {
  std::set<SimpleIndex> kept;
  for (std::size_t s = 0; s < a->num_simples(); ++s) {
    if (!killed.count(SimpleIndex{s})) kept.insert(SimpleIndex{s});
  }
  for (auto s : killed) {
    if (s.pos >= a->num_simples()) throw std::out_of_range("killed simple out of range");
  }
  return kept;
}

KLinearMap quotient_kmap(const ExactQuotient& f, int precision) {
  const std::set<SimpleIndex> kept = kept_simples(f.algebra, f.killed);
  KLinearMap out;
  out.source = f.algebra;
  out.source_rank = f.algebra->num_simples();
  if (kept.empty()) {
    out.matrix = SeriesMatrix(0, out.source_rank);
    return finish(std::move(out), precision);
  }
  const CornerAlgebra corner = corner_algebra(f.algebra, kept);
  out.target = corner.algebra;
  out.target_rank = corner.algebra->num_simples();
  out.matrix = SeriesMatrix(out.target_rank, out.source_rank);
  for (std::size_t s = 0; s < out.source_rank; ++s) {
    const KClass col = class_of_module(corner_restriction(simple_module(f.algebra, SimpleIndex{s}, 0), corner));
    for (std::size_t t = 0; t < out.target_rank; ++t) out.matrix(t, s) = col.coords()[t];
  }
  return finish(std::move(out), precision);
}

KLinearMap corner_adjoint_kmap(const DerivedCornerAdjoint& f, int precision, int depth_cap) {
  const std::set<SimpleIndex> kept = kept_simples(f.algebra, f.killed);
  KLinearMap out;
  out.target = f.algebra;
  out.target_rank = f.algebra->num_simples();
  if (kept.empty()) {
    out.matrix = SeriesMatrix(out.target_rank, 0);
    return finish(std::move(out), precision);
  }
  const CornerAlgebra corner = corner_algebra(f.algebra, kept);
  const AlgebraPtr& b = corner.algebra;
  out.source = b;
  out.source_rank = b->num_simples();
  const SeriesMatrix ca = cartan_matrix(f.algebra);
  // Q'(B e_t) = A e_{kept[t]}: its class is column kept[t] of the Cartan matrix
  std::vector<std::optional<int>> gains(out.source_rank);
  for (std::size_t t = 0; t < out.source_rank; ++t) {
    for (std::size_t r = 0; r < out.target_rank; ++r) absorb(gains[t], max_weight(ca(r, corner.kept[t].pos)));
  }
  out.matrix = SeriesMatrix(out.target_rank, out.source_rank);
  for (std::size_t j = 0; j < out.source_rank; ++j) {
    const ProjComplex res = resolve_for(make_module(simple_module(b, SimpleIndex{j}, 0)), precision, 0, depth_cap);
    watch_gains(res, gains, b->num_simples() + 1);
    std::vector<LaurentSeries> col(out.target_rank);
    for (const auto& [i, term] : res.terms) {
      for (const auto& [key, mult] : term) {
        const LaurentSeries factor = LaurentSeries::monomial(key.shift, (i % 2 == 0) ? mult : -mult);
        for (std::size_t r = 0; r < out.target_rank; ++r) col[r] += factor * ca(r, corner.kept[key.simple.pos].pos);
      }
    }
    const Precision p = res.kclass_precision();
    for (std::size_t r = 0; r < out.target_rank; ++r) out.matrix(r, j) = col[r].truncated(p);
  }
  return finish(std::move(out), precision);
}

KLinearMap tensor_kmap(const TensorBimodule& f, int precision, int depth_cap) {
  const GradedBimodule& m = f.bimodule;
  const auto problems = m.check();
  if (!problems.empty()) throw ValidationError("invalid bimodule: " + problems.front());
  const AlgebraPtr& a = m.right;
  const AlgebraPtr& b = m.left;
  KLinearMap out;
  out.source = a;
  out.target = b;
  out.source_rank = a->num_simples();
  out.target_rank = b->num_simples();
  out.matrix = SeriesMatrix(out.target_rank, out.source_rank);

  // class of M e_j over B
  std::vector<std::vector<LaurentSeries>> image(out.source_rank, std::vector<LaurentSeries>(out.target_rank));
  std::optional<int> min_val;
  std::vector<std::optional<int>> gains(out.source_rank);
  for (std::size_t j = 0; j < out.source_rank; ++j) {
    for (const auto& [d, n] : m.components) {
      const Matrix rj = m.right_matrix(a->idempotent(SimpleIndex{j}), d);
      for (std::size_t t = 0; t < out.target_rank; ++t) {
        const std::size_t mult = rank(m.left_matrix(b->idempotent(SimpleIndex{t}), d) * rj);
        if (mult) image[j][t] += LaurentSeries::monomial(d, static_cast<long>(mult));
      }
    }
    for (const auto& s : image[j]) {
      if (!s.is_zero()) {
        min_val = min_val ? std::min(*min_val, s.valuation()) : s.valuation();
        absorb(gains[j], max_weight(s));
      }
    }
  }
  if (!min_val) return finish(std::move(out), precision);

  for (std::size_t s = 0; s < out.source_rank; ++s) {
    const ProjComplex res =
        resolve_for(make_module(simple_module(a, SimpleIndex{s}, 0)), precision, *min_val, depth_cap);
    watch_gains(res, gains, a->num_simples() + 1);
    std::vector<LaurentSeries> col(out.target_rank);
    for (const auto& [i, term] : res.terms) {
      for (const auto& [key, mult] : term) {
        const LaurentSeries factor = LaurentSeries::monomial(key.shift, (i % 2 == 0) ? mult : -mult);
        for (std::size_t t = 0; t < out.target_rank; ++t) col[t] += factor * image[key.simple.pos][t];
      }
    }
    const Precision p = res.kclass_precision();
    for (std::size_t t = 0; t < out.target_rank; ++t) {
      out.matrix(t, s) = col[t].truncated(p ? Precision{*p + *min_val} : Precision{});
    }
  }
  return finish(std::move(out), precision);
}

bool zero_to(const SeriesMatrix& m, int precision) {
  const SeriesMatrix t = m.truncated(precision);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      const auto& e = t(i, j);
      if (!e.is_zero()) return false;
      if (e.precision() && *e.precision() < precision) return false;
    }
  }
  return true;
}

}  // namespace

KLinearMap functor_kmap(const FunctorDescriptor& f, int precision, int depth_cap) {
  return std::visit(
      [&](const auto& d) -> KLinearMap {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, IdentityFunctor>) {
          return identity_kmap(d, precision);
        } else if constexpr (std::is_same_v<T, ExactQuotient>) {
          return quotient_kmap(d, precision);
        } else if constexpr (std::is_same_v<T, DerivedCornerAdjoint>) {
          return corner_adjoint_kmap(d, precision, depth_cap);
        } else {
          return tensor_kmap(d, precision, depth_cap);
        }
      },
      f);
}

ProjectorReport check_projector_laws(const KLinearMap& q_map, const KLinearMap& q_prime_map, int precision) {
  if (q_map.source_rank != q_prime_map.target_rank || q_map.target_rank != q_prime_map.source_rank) {
    throw ShapeMismatch("projector maps have incompatible shapes: [Q] is " + std::to_string(q_map.target_rank) +
                        "x" + std::to_string(q_map.source_rank) + ", [LQ'] is " +
                        std::to_string(q_prime_map.target_rank) + "x" + std::to_string(q_prime_map.source_rank));
  }
  ProjectorReport r;
  const SeriesMatrix section = q_map.matrix * q_prime_map.matrix;
  r.section_residual = (section - SeriesMatrix::identity(section.rows())).truncated(precision);
  r.section_identity = zero_to(r.section_residual, precision);
  const SeriesMatrix p = q_prime_map.matrix * q_map.matrix;
  r.idempotent_residual = (p * p - p).truncated(precision);
  r.idempotent = zero_to(r.idempotent_residual, precision);
  return r;
}

ContinuityReport check_continuity(const KLinearMap& map, int alpha) {
  ContinuityReport r;
  r.alpha = alpha;
  for (std::size_t s = 0; s < map.matrix.cols(); ++s) {
    ContinuityReport::Column col;
    col.source_simple = s;
    for (std::size_t t = 0; t < map.matrix.rows(); ++t) absorb(col.max_weight, max_weight(map.matrix(t, s)));
    col.pass = !col.max_weight || *col.max_weight <= alpha;
    r.pass = r.pass && col.pass;
    r.columns.push_back(col);
  }
  return r;
}

}  // namespace qgroth
