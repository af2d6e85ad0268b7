#include "doctest.h"

#include "qgroth/errors.hpp"
#include "qgroth/fixtures.hpp"
#include "qgroth/gmodule.hpp"
#include "qgroth/kgroup.hpp"
#include "qgroth/resolve.hpp"
#include "../support/generators.hpp"

using namespace qgroth;
using qgroth::testing::Rng;

namespace {

constexpr SimpleIndex S0{0};
constexpr SimpleIndex S1{1};

std::map<int, std::size_t> dims(const GradedModule& m) { return m.components(); }

// Subspace of target degree d spanned by f applied to the given columns.
Subspace image_of(const ModuleMap& f, int d, const Matrix& cols) {
  const Matrix img = f.block(d) * cols;
  std::vector<Vector> v;
  for (std::size_t c = 0; c < img.cols(); ++c) v.push_back(img.column(c));
  return Subspace::span(f.target->dim(d), v);
}

// Largest filtration step of weight <= w, as an inclusion; nullopt if none.
const FiltrationStep* step_at(const std::vector<FiltrationStep>& steps, int w) {
  const FiltrationStep* best = nullptr;
  for (const auto& s : steps)
    if (s.weight <= w) best = &s;
  return best;
}

}  // namespace

TEST_CASE("simple modules") {
  const auto a = fixtures::dual_numbers();
  const GradedModule l0 = simple_module(a, S0, 0);
  CHECK(dims(l0) == std::map<int, std::size_t>{{0, 1}});
  CHECK(weight_data(l0).degree == 0);
  const GradedModule l1 = simple_module(a, S0, 1);
  CHECK(weight_data(l1).degree == -1);
  CHECK(l1.components() == shifted(l0, 1).components());
  for (int k = -3; k <= 3; ++k) CHECK(simple_module(a, S0, k).total_dim() == 1);
}

TEST_CASE("projective modules") {
  const auto dual = fixtures::dual_numbers();
  CHECK(dims(projective_module(dual, S0, 0)) == std::map<int, std::size_t>{{0, 1}, {2, 1}});
  const auto field = build_truncated_poly(1, 2);
  CHECK(dims(projective_module(field, S0, 0)) == dims(simple_module(field, S0, 0)));
  const auto a2 = fixtures::a2_quiver();
  CHECK(dims(projective_module(a2, S0, 0)) == std::map<int, std::size_t>{{0, 1}, {1, 1}});
  CHECK(dims(projective_module(a2, S1, 0)) == std::map<int, std::size_t>{{0, 1}});
  for (const auto& alg : qgroth::testing::fixture_algebras())
    for (std::size_t s = 0; s < alg->num_simples(); ++s)
      CHECK(projective_module(alg, SimpleIndex{s}, 2).check().empty());
}

TEST_CASE("radical and top") {
  const auto dual = fixtures::dual_numbers();
  const RadicalTop p = radical_and_top(make_module(projective_module(dual, S0, 0)));
  CHECK(dims(*p.radical.module) == std::map<int, std::size_t>{{2, 1}});
  CHECK(p.top == FormalSum{{{S0, 0}, 1}});
  CHECK(radical_and_top(make_module(simple_module(dual, S0, 0))).radical.module->is_zero());

  const auto a2 = fixtures::a2_quiver();
  const RadicalTop q = radical_and_top(make_module(projective_module(a2, S0, 0)));
  CHECK(class_of_module(*q.radical.module) == class_of_module(simple_module(a2, S1, 1)));
  CHECK(q.top == FormalSum{{{S0, 0}, 1}});
}

TEST_CASE("projective covers") {
  const auto a2 = fixtures::a2_quiver();
  const ProjectiveCover c = projective_cover(make_module(simple_module(a2, S0, 0)));
  CHECK(c.summands == std::vector<ShiftedIndex>{{S0, 0}});
  CHECK(is_surjective(c.surjection));

  const ModulePtr p = make_module(projective_module(a2, S0, 0));
  const ProjectiveCover cp = projective_cover(p);
  CHECK(cp.cover->components() == p->components());
  CHECK(is_injective(cp.surjection));

  const ModulePtr sum = make_module(direct_sum(
      {make_module(simple_module(a2, S0, 0)), make_module(simple_module(a2, S1, 3))}));
  CHECK(projective_cover(sum).summands == std::vector<ShiftedIndex>{{S0, 0}, {S1, 3}});

  const ModulePtr zero = make_module(GradedModule::create(a2, {}, {}));
  CHECK_THROWS_AS(projective_cover(zero), ZeroModule);
}

TEST_CASE("kernels") {
  const auto dual = fixtures::dual_numbers();
  const ModulePtr p = make_module(projective_module(dual, S0, 0));
  CHECK(kernel(identity_map(p)).module->is_zero());
  CHECK(kernel(zero_map(p, p)).module->components() == p->components());
  const ProjectiveCover c = projective_cover(make_module(simple_module(dual, S0, 0)));
  CHECK(dims(*kernel(c.surjection).module) == std::map<int, std::size_t>{{2, 1}});

  ModuleMap bad = identity_map(p);
  bad.blocks[2] = Matrix(1, 1);
  CHECK_THROWS_AS(check_module_map(bad), NotAModuleMap);
}

TEST_CASE("weight filtration and baric truncation examples") {
  const auto dual = fixtures::dual_numbers();
  const ModulePtr p = make_module(projective_module(dual, S0, 0));
  const auto steps = weight_filtration(p);
  REQUIRE(steps.size() == 2);
  CHECK(steps[0].weight == -2);
  CHECK(dims(*steps[0].sub.module) == std::map<int, std::size_t>{{2, 1}});
  CHECK(steps[1].weight == 0);
  CHECK(steps[1].sub.module->total_dim() == 2);
  CHECK(weight_filtration(make_module(simple_module(dual, S0, 4))).size() == 1);

  const BaricSplit split = baric_truncate(p, -1);
  CHECK(dims(*split.below.module) == std::map<int, std::size_t>{{2, 1}});
  CHECK(dims(*split.above.module) == std::map<int, std::size_t>{{0, 1}});
  const BaricSplit all = baric_truncate(p, 0);
  CHECK(all.below.module->total_dim() == 2);
  CHECK(all.above.module->is_zero());
}

TEST_CASE("every projective has degree equal to the weight of its top") {
  for (const auto& a : qgroth::testing::fixture_algebras()) {
    for (std::size_t s = 0; s < a->num_simples(); ++s) {
      for (int shift = -2; shift <= 2; ++shift) {
        const GradedModule p = projective_module(a, SimpleIndex{s}, shift);
        const WeightData w = weight_data(p);
        CHECK(w.degree == -shift);
        CHECK(*w.weights_present.rbegin() == *w.degree);
      }
    }
  }
}

TEST_CASE("random modules are valid and covers are minimal") {
  Rng rng(31);
  for (const auto& a : qgroth::testing::fixture_algebras()) {
    for (int trial = 0; trial < 12; ++trial) {
      const ModulePtr m = qgroth::testing::random_module(rng, a);
      CHECK(m->check().empty());
      const ProjectiveCover c = projective_cover(m);
      CHECK(is_surjective(c.surjection));
      const Submodule k = kernel(c.surjection);
      const RadicalTop rt = radical_and_top(c.cover);
      for (const auto& [d, n] : k.module->components()) {
        const Subspace rad = Subspace::column_space(rt.radical.inclusion.block(d));
        const Matrix inc = k.inclusion.block(d);
        for (std::size_t col = 0; col < inc.cols(); ++col) CHECK(rad.contains(inc.column(col)));
      }
    }
  }
}

TEST_CASE("baric truncation is short exact and additive on classes") {
  Rng rng(32);
  for (const auto& a : qgroth::testing::fixture_algebras()) {
    for (int trial = 0; trial < 15; ++trial) {
      const ModulePtr m = qgroth::testing::random_module(rng, a);
      const int n = rng.between(-6, 2);
      const BaricSplit b = baric_truncate(m, n);
      CHECK(is_short_exact(b.below.inclusion, b.above.projection));
      CHECK(b.below.module->total_dim() + b.above.module->total_dim() == m->total_dim());
      CHECK(class_of_module(*m) == class_of_module(*b.below.module) + class_of_module(*b.above.module));
      for (int w : weight_data(*b.below.module).weights_present) CHECK(w <= n);
      for (int w : weight_data(*b.above.module).weights_present) CHECK(w >= n + 1);
    }
  }
}

TEST_CASE("module maps are strictly compatible with weight filtrations") {
  Rng rng(33);
  for (const auto& a : qgroth::testing::fixture_algebras()) {
    for (int trial = 0; trial < 10; ++trial) {
      const ModulePtr n = qgroth::testing::random_module(rng, a);
      const FormalSum src = qgroth::testing::random_projective_sum(rng, a, 3, 2);
      ModuleMap f = qgroth::testing::map_from_projectives(rng, a, src, n);
      if (rng.coin()) {
        const BaricSplit cut = baric_truncate(n, rng.between(-3, 0));
        f = compose(cut.above.projection, f);
      }
      REQUIRE_NOTHROW(check_module_map(f));
      const auto src_steps = weight_filtration(f.source);
      const auto tgt_steps = weight_filtration(f.target);
      const Submodule img = image(f);
      for (const auto& step : src_steps) {
        const FiltrationStep* t = step_at(tgt_steps, step.weight);
        for (const auto& [d, dim] : f.target->components()) {
          const Subspace fw = image_of(f, d, step.sub.inclusion.block(d));
          const Subspace w_n = t ? Subspace::column_space(t->sub.inclusion.block(d)) : Subspace(dim);
          CHECK(w_n.contains(fw));
          // f(W_i M) = f(M) ∩ W_i N: here W_i is a union of whole degrees
          const bool degree_in_window = d >= -step.weight;
          const Subspace fm = Subspace::column_space(img.inclusion.block(d));
          CHECK(fw.dim() == (degree_in_window ? fm.dim() : 0));
        }
      }
    }
  }
}
