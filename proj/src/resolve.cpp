#include "qgroth/resolve.hpp"

#include <algorithm>

#include "qgroth/errors.hpp"

namespace qgroth {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Complete: return "complete";
    case StopReason::FloorReached: return "floor_reached";
    case StopReason::DepthCap: return "depth_cap";
    case StopReason::NonDecreasingWeights: return "non_decreasing_weights";
  }
  return "unknown";
}

std::optional<int> degree_of(const FormalSum& term) {
  std::optional<int> deg;
  for (const auto& [key, mult] : term) {
    if (mult == 0) continue;
    const int w = weight_of_degree(key.shift);
    deg = deg ? std::max(*deg, w) : w;
  }
  return deg;
}

std::optional<int> ProjComplex::top_index() const {
  if (terms.empty()) return std::nullopt;
  return terms.rbegin()->first;
}

std::optional<int> ProjComplex::bottom_index() const {
  if (terms.empty()) return std::nullopt;
  return terms.begin()->first;
}

Precision ProjComplex::kclass_precision() const {
  if (!tail_degree) return std::nullopt;
  return degree_of_weight(*tail_degree);
}

ProjComplex minimal_resolution(const ModulePtr& m, int weight_floor, int depth_cap) {
  if (m->is_zero()) throw ZeroModule("cannot resolve the zero module");
  if (depth_cap < 0) throw std::invalid_argument("depth_cap must be nonnegative");

  ProjComplex res;
  res.algebra = m->algebra();
  res.truncation_floor = weight_floor;
  res.minimal = true;

  const std::size_t window = res.algebra->num_simples() + 1;
  std::vector<int> syzygy_degrees;
  ModulePtr current = m;
  std::optional<ModuleMap> into_previous;  // current -> P^{-(k-1)}

  for (int k = 0;; ++k) {
    if (k > 0) {
      if (current->is_zero()) {
        res.stop = StopReason::Complete;
        break;
      }
      const int deg = *weight_data(*current).degree;
      syzygy_degrees.push_back(deg);
      if (deg < weight_floor) {
        res.stop = StopReason::FloorReached;
        res.tail_degree = deg;
        break;
      }
      if (k > depth_cap) {
        res.stop = StopReason::DepthCap;
        res.tail_degree = deg;
        break;
      }
      if (syzygy_degrees.size() > window) {
        bool flat = true;
        for (std::size_t j = syzygy_degrees.size() - window; j < syzygy_degrees.size(); ++j) {
          if (syzygy_degrees[j] < syzygy_degrees[j - 1]) flat = false;
        }
        if (flat) {
          res.stop = StopReason::NonDecreasingWeights;
          res.tail_degree = deg;
          break;
        }
      }
    }
    ProjectiveCover cover = projective_cover(current);
    const int index = -k;
    FormalSum term;
    for (const auto& key : cover.summands) add_to(term, key, 1);
    res.weight_certificate[index] = *degree_of(term);
    res.terms.emplace(index, std::move(term));
    res.modules.emplace(index, cover.cover);
    if (k == 0) {
      res.augmentation = cover.surjection;
    } else {
      res.differentials.emplace(index, compose(*into_previous, cover.surjection));
    }
    Submodule syzygy = kernel(cover.surjection);
    into_previous = syzygy.inclusion;
    current = syzygy.module;
  }
  return res;
}

WeightBoundReport check_weight_bound(const ProjComplex& res, int d) {
  WeightBoundReport report;
  for (auto it = res.terms.rbegin(); it != res.terms.rend(); ++it) {
    const int i = it->first;
    if (i > 0) continue;
    const auto deg = degree_of(it->second);
    if (deg && *deg > d + i) {
      report.pass = false;
      report.first_violation = i;
      break;
    }
  }
  return report;
}

namespace {

bool column_space_inside(const Matrix& m, const Subspace& s) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!s.contains(m.column(c))) return false;
  }
  return true;
}

// Per degree, the radical of a module as a subspace of each component.
std::map<int, Subspace> radical_of(const ModulePtr& m) {
  const RadicalTop rt = radical_and_top(m);
  std::map<int, Subspace> out;
  for (const auto& [d, n] : m->components()) {
    out.emplace(d, Subspace::column_space(rt.radical.inclusion.block(d)));
  }
  return out;
}

}  // namespace

ResolutionCheck check_resolution(const ProjComplex& res) {
  ResolutionCheck out;
  if (res.modules.empty() || !res.augmentation) {
    out.problems.push_back("resolution is not realized");
    out.exact = false;
    return out;
  }
  const int bottom = res.modules.begin()->first;
  const ModuleMap& aug = *res.augmentation;
  if (!is_surjective(aug)) {
    out.augmentation_onto = false;
    out.problems.push_back("augmentation is not onto");
  }
  auto diff = [&](int i) -> std::optional<ModuleMap> {
    auto it = res.differentials.find(i);
    if (it == res.differentials.end()) return std::nullopt;
    return it->second;
  };
  for (int i = bottom; i <= 0; ++i) {
    const ModulePtr& p = res.modules.at(i);
    // outgoing map from P^i
    const ModuleMap out_map = i == 0 ? aug : *diff(i);
    if (i < 0) {
      const ModuleMap next = i + 1 == 0 ? aug : *diff(i + 1);
      if (!compose(next, out_map).blocks.empty()) {
        out.d_squared_zero = false;
        out.problems.push_back("d o d != 0 at index " + std::to_string(i));
      }
    }
    // exactness at P^i: ker(out_map) == im(d^{i-1}); at the bottom only if complete
    const auto incoming = diff(i - 1);
    const bool expect = incoming.has_value() || res.stop == StopReason::Complete;
    if (expect) {
      for (const auto& [d, n] : p->components()) {
        const std::size_t ker = n - rank(out_map.block(d));
        const std::size_t img = incoming ? rank(incoming->block(d)) : 0;
        if (ker != img) {
          out.exact = false;
          out.problems.push_back("not exact at index " + std::to_string(i) + ", degree " +
                                 std::to_string(d));
        }
      }
    }
    if (incoming) {
      const auto rad = radical_of(p);
      for (const auto& [d, n] : p->components()) {
        if (!column_space_inside(incoming->block(d), rad.at(d))) {
          out.minimal = false;
          out.problems.push_back("image of d is not in the radical at index " + std::to_string(i));
          break;
        }
      }
    }
  }
  return out;
}

ProjComplex assemble_complex_resolution(const std::map<int, ModulePtr>& cohomologies, int weight_floor,
                                        int depth_cap) {
  ProjComplex out;
  out.truncation_floor = weight_floor;
  out.terms_only = true;
  out.stop = StopReason::Complete;
  auto rank_of = [](StopReason r) {
    switch (r) {
      case StopReason::Complete: return 0;
      case StopReason::FloorReached: return 1;
      case StopReason::DepthCap: return 2;
      case StopReason::NonDecreasingWeights: return 3;
    }
    return 3;
  };
  for (const auto& [j, h] : cohomologies) {
    if (!h || h->is_zero()) continue;
    if (!out.algebra) out.algebra = h->algebra();
    const ProjComplex q = minimal_resolution(h, weight_floor, depth_cap);
    for (const auto& [idx, term] : q.terms) {
      // Q_j^{-k} sits in P^{j-k}; idx = -k
      auto& target = out.terms[j + idx];
      for (const auto& [key, mult] : term) add_to(target, key, mult);
    }
    if (q.tail_degree) {
      out.tail_degree = out.tail_degree ? std::max(*out.tail_degree, *q.tail_degree) : *q.tail_degree;
    }
    if (rank_of(q.stop) > rank_of(out.stop)) out.stop = q.stop;
  }
  for (const auto& [i, term] : out.terms) {
    if (auto deg = degree_of(term)) out.weight_certificate[i] = *deg;
  }
  return out;
}

DegreeProfile weight_bound_profile(const DegreeProfile& d, int N, int lowest) {
  DegreeProfile a;
  std::optional<int> running;
  for (int i = N; i >= lowest; --i) {
    if (running) running = *running - 1;
    auto it = d.find(i);
    if (it != d.end() && it->second) running = running ? std::max(*running, *it->second) : *it->second;
    a[i] = running;
  }
  return a;
}

int profile_threshold(const DegreeProfile& d, int N, int m) {
  // k0: every d_i with i <= k0 is <= m
  int k0 = N;
  for (const auto& [i, di] : d) {
    if (i > N) continue;
    if (di && *di > m) {
      k0 = i - 1;
      break;
    }
  }
  std::optional<int> k;
  for (const auto& [i, di] : d) {
    if (i < k0 || i > N || !di) continue;
    const int cand = i - *di + m;
    k = k ? std::min(*k, cand) : cand;
  }
  return k ? *k : N;
}

ModulePtr ModuleComplex::term(int i) const {
  auto it = terms.find(i);
  if (it != terms.end()) return it->second;
  return make_module(GradedModule::unchecked(algebra, {}, {}));
}

ModuleMap ModuleComplex::differential(int i) const {
  auto it = differentials.find(i);
  if (it != differentials.end()) return it->second;
  return zero_map(term(i), term(i + 1));
}

void ModuleComplex::check() const {
  for (const auto& [i, d] : differentials) {
    check_module_map(d);
    if (d.source->components() != term(i)->components() ||
        d.target->components() != term(i + 1)->components()) {
      throw NotAModuleMap("differential " + std::to_string(i) + " does not match the terms");
    }
    if (!compose(differential(i + 1), d).blocks.empty()) {
      throw NotAModuleMap("d o d != 0 at index " + std::to_string(i));
    }
  }
}

namespace {

// Coordinates, in the basis of a submodule, of the image of f (which must land
// inside it).
DegreeSubspaces image_in(const Submodule& sub, const ModuleMap& f) {
  DegreeSubspaces out;
  for (const auto& [d, n] : sub.module->components()) {
    const Matrix img = f.block(d);
    const Matrix coords = solve(sub.inclusion.block(d), img);
    out.emplace(d, Subspace::column_space(coords));
  }
  return out;
}

}  // namespace

ModulePtr ModuleComplex::cohomology(int i) const {
  const Submodule z = kernel(differential(i));
  return quotient(z.module, image_in(z, differential(i - 1))).module;
}

std::map<int, ModulePtr> ModuleComplex::cohomologies() const {
  std::map<int, ModulePtr> out;
  for (const auto& [i, t] : terms) {
    auto h = cohomology(i);
    if (!h->is_zero()) out.emplace(i, std::move(h));
  }
  return out;
}

std::pair<ModuleComplex, ModuleComplex> truncate_complex(const ModuleComplex& c, int k) {
  ModuleComplex lower{c.algebra, {}, {}};
  ModuleComplex upper{c.algebra, {}, {}};

  const Submodule z = kernel(c.differential(k));
  for (const auto& [i, t] : c.terms) {
    if (i < k) lower.terms.emplace(i, t);
    if (i > k + 1) upper.terms.emplace(i, t);
  }
  if (!z.module->is_zero()) lower.terms.emplace(k, z.module);
  for (const auto& [i, d] : c.differentials) {
    if (i < k - 1) lower.differentials.emplace(i, d);
    if (i > k + 1) upper.differentials.emplace(i, d);
  }
  // d^{k-1} corestricted to ker d^k
  const ModuleMap dk1 = c.differential(k - 1);
  ModuleMap into_z{lower.term(k - 1), lower.term(k), {}};
  for (const auto& [d, n] : z.module->components()) {
    Matrix m = solve(z.inclusion.block(d), dk1.block(d));
    if (!m.is_zero()) into_z.blocks.emplace(d, std::move(m));
  }
  if (!into_z.blocks.empty()) lower.differentials.emplace(k - 1, std::move(into_z));

  // coker d^k at k+1
  const ModuleMap dk = c.differential(k);
  DegreeSubspaces img;
  for (const auto& [d, n] : c.term(k + 1)->components()) img.emplace(d, Subspace::column_space(dk.block(d)));
  const QuotientModule coker = quotient(c.term(k + 1), img);
  if (!coker.module->is_zero()) upper.terms.emplace(k + 1, coker.module);
  const ModuleMap dk1up = c.differential(k + 1);
  ModuleMap from_coker{upper.term(k + 1), upper.term(k + 2), {}};
  for (const auto& [d, n] : coker.module->components()) {
    const auto cols = img.at(d).complement_cols();
    const Matrix full = dk1up.block(d);
    Matrix m(full.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      for (std::size_t r = 0; r < full.rows(); ++r) m(r, j) = full(r, cols[j]);
    }
    if (!m.is_zero()) from_coker.blocks.emplace(d, std::move(m));
  }
  if (!from_coker.blocks.empty()) upper.differentials.emplace(k + 1, std::move(from_coker));
  return {std::move(lower), std::move(upper)};
}

std::pair<ProjComplex, ProjComplex> truncate_complex(const ProjComplex& c, int k) {
  ProjComplex lower = c;
  ProjComplex upper;
  upper.algebra = c.algebra;
  upper.truncation_floor = c.truncation_floor;
  upper.terms_only = true;
  upper.stop = StopReason::Complete;
  lower.terms_only = true;
  lower.modules.clear();
  lower.differentials.clear();
  lower.augmentation.reset();
  for (auto it = lower.terms.upper_bound(k); it != lower.terms.end();) {
    upper.terms.emplace(it->first, it->second);
    if (auto deg = degree_of(it->second)) upper.weight_certificate[it->first] = *deg;
    lower.weight_certificate.erase(it->first);
    it = lower.terms.erase(it);
  }
  return {std::move(lower), std::move(upper)};
}

ExtTable ext_dimensions(const ModulePtr& m, SimpleIndex s, int weight_floor, int depth_cap) {
  const ProjComplex res = minimal_resolution(m, weight_floor, depth_cap);
  ExtTable out;
  for (const auto& [i, term] : res.terms) {
    for (const auto& [key, mult] : term) {
      if (key.simple == s && mult != 0) out[{-i, key.shift}] = mult;
    }
  }
  return out;
}

}  // namespace qgroth
