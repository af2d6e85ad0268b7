#pragma once

// Seeded random inputs for the property suites.

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "qgroth/fixtures.hpp"
#include "qgroth/galgebra.hpp"
#include "qgroth/gmodule.hpp"
#include "qgroth/kgroup.hpp"
#include "qgroth/qring.hpp"

namespace qgroth::testing {

class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  int between(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng_); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(between(0, static_cast<int>(v.size()) - 1))];
  }

private:
  std::mt19937_64 eng_;
};

inline LaurentSeries random_polynomial(Rng& rng, int lo = -4, int hi = 4, int max_len = 7, int bound = 5) {
  const int v = rng.between(lo, hi);
  std::vector<Integer> coeffs(static_cast<std::size_t>(rng.between(0, max_len)));
  for (auto& c : coeffs) c = rng.between(-bound, bound);
  return LaurentSeries(v, std::move(coeffs));
}

// Exact about a third of the time, otherwise truncated a little past its support.
inline LaurentSeries random_series(Rng& rng) {
  LaurentSeries p = random_polynomial(rng);
  if (rng.coin(0.33)) return p;
  const int top = p.is_zero() ? rng.between(-4, 4) : p.top_exponent() + 1;
  return p.truncated(top + rng.between(-2, 4));
}

// Lowest coefficient +-1.
inline LaurentSeries random_unit(Rng& rng, bool exact) {
  const int v = rng.between(-3, 3);
  std::vector<Integer> coeffs(static_cast<std::size_t>(rng.between(1, 6)));
  for (auto& c : coeffs) c = rng.between(-4, 4);
  coeffs.front() = rng.coin() ? 1 : -1;
  LaurentSeries s(v, std::move(coeffs));
  return exact ? s : s.truncated(v + rng.between(4, 12));
}

inline std::vector<AlgebraPtr> fixture_algebras() {
  return {fixtures::dual_numbers(), fixtures::a2_quiver(), fixtures::three_cycle(), build_truncated_poly(3, 2),
          build_truncated_poly(4, 1), build_truncated_poly(1, 2)};
}

inline FormalSum random_projective_sum(Rng& rng, const AlgebraPtr& a, int max_summands = 3, int max_shift = 3) {
  FormalSum sum;
  const int k = rng.between(1, max_summands);
  for (int i = 0; i < k; ++i) {
    const SimpleIndex s{static_cast<std::size_t>(rng.between(0, static_cast<int>(a->num_simples()) - 1))};
    add_to(sum, {s, rng.between(0, max_shift)}, 1);
  }
  return sum;
}

inline Vector random_vector(Rng& rng, std::size_t n, int bound = 2) {
  Vector v(n);
  for (auto& x : v) x = rng.between(-bound, bound);
  return v;
}

// A quotient of a sum of shifted projectives by the submodule generated by a
// few random elements of its radical; never zero.
inline ModulePtr random_module(Rng& rng, const AlgebraPtr& a) {
  const ModulePtr p = make_module(projective_sum(a, random_projective_sum(rng, a)));
  const RadicalTop rt = radical_and_top(p);
  const ModulePtr rad = rt.radical.module;
  const ModuleMap& incl = rt.radical.inclusion;
  if (rad->is_zero() || rng.coin(0.2)) return p;
  std::vector<std::pair<int, Vector>> gens;
  const int k = rng.between(1, 2);
  std::vector<int> degrees;
  for (const auto& [d, n] : rad->components()) degrees.push_back(d);
  for (int i = 0; i < k; ++i) {
    const int d = rng.pick(degrees);
    const Vector local = random_vector(rng, rad->dim(d));
    gens.emplace_back(d, incl.block(d) * local);
  }
  const Submodule sub = generated_submodule(p, gens);
  DegreeSubspaces spaces;
  for (const auto& [d, n] : p->components()) {
    std::vector<Vector> cols;
    const Matrix inc = sub.inclusion.block(d);
    for (std::size_t c = 0; c < inc.cols(); ++c) cols.push_back(inc.column(c));
    spaces.emplace(d, Subspace::span(n, cols));
  }
  return quotient(p, spaces).module;
}

// The map P -> target sending the generator of each summand P_s<k> to a random
// element of e_s target_k.  P is the projective sum of `sum`.
inline ModuleMap map_from_projectives(Rng& rng, const AlgebraPtr& a, const FormalSum& sum, const ModulePtr& target) {
  std::vector<ModulePtr> parts;
  std::vector<std::pair<ShiftedIndex, Vector>> images;
  for (const auto& [key, mult] : sum) {
    for (long c = 0; c < mult; ++c) {
      parts.push_back(make_module(projective_module(a, key.simple, key.shift)));
      const std::size_t n = target->dim(key.shift);
      Vector v = random_vector(rng, n);
      if (n) v = target->action(a->idempotent(key.simple), key.shift) * v;
      images.emplace_back(key, std::move(v));
    }
  }
  const ModulePtr source = make_module(direct_sum(parts));
  ModuleMap f{source, target, {}};
  std::map<int, std::size_t> offset;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& [key, v] = images[p];
    const DegreeSubspaces basis = projective_basis(*a, key.simple);
    for (const auto& [j, sub] : basis) {
      const int d = j + key.shift;
      auto it = f.blocks.find(d);
      if (it == f.blocks.end()) it = f.blocks.emplace(d, Matrix(target->dim(d), source->dim(d))).first;
      for (std::size_t b = 0; b < sub.dim(); ++b) {
        const Vector w = target->dim(key.shift) ? target->act(sub.basis()[b], j, key.shift, v) : Vector(target->dim(d));
        for (std::size_t r = 0; r < w.size(); ++r) it->second(r, offset[d] + b) = w[r];
      }
      offset[d] += sub.dim();
    }
  }
  return f;
}

inline KClass random_class(Rng& rng, const AlgebraPtr& a, int max_weight, int precision) {
  std::vector<LaurentSeries> coords;
  for (std::size_t s = 0; s < a->num_simples(); ++s) {
    std::vector<Integer> c(static_cast<std::size_t>(rng.between(0, 8)));
    for (auto& x : c) x = rng.between(-3, 3);
    coords.push_back(LaurentSeries(-max_weight + rng.between(0, 3), std::move(c)));
  }
  KClass x(a, BasisMode::Simple, std::move(coords));
  return rng.coin(0.3) ? x : x.truncated(precision);
}

}  // namespace qgroth::testing
