#include "qgroth/fixtures.hpp"

#include <charconv>

namespace qgroth::fixtures {

namespace {

AlgebraPtr named(AlgebraDescription d) { return build_from_table(d); }

using P = AlgebraDescription::Product;

P unit_product(std::string left, std::string right, std::string result) {
  return P{std::move(left), std::move(right), {{std::move(result), Rational(1)}}};
}

}  // namespace

AlgebraPtr dual_numbers() {
  AlgebraDescription d;
  d.name = "dual_numbers";
  d.basis = {{"1", 0}, {"x", 2}};
  d.idempotents = {"1"};
  d.products = {unit_product("1", "1", "1"), unit_product("1", "x", "x"),
                unit_product("x", "1", "x")};
  return named(std::move(d));
}

AlgebraPtr a2_quiver() {
  AlgebraDescription d;
  d.name = "a2_quiver";
  d.basis = {{"e1", 0}, {"e2", 0}, {"a", 1}};
  d.idempotents = {"e1", "e2"};
  d.products = {unit_product("e1", "e1", "e1"), unit_product("e2", "e2", "e2"),
                unit_product("e2", "a", "a"), unit_product("a", "e1", "a")};
  return named(std::move(d));
}

AlgebraPtr three_cycle() {
  AlgebraDescription d;
  d.name = "three_cycle";
  d.basis = {{"e1", 0}, {"e2", 0}, {"e3", 0}, {"a", 1}, {"b", 1}, {"c", 1}};
  d.idempotents = {"e1", "e2", "e3"};
  d.products = {unit_product("e1", "e1", "e1"), unit_product("e2", "e2", "e2"),
                unit_product("e3", "e3", "e3"),
                // a: 1 -> 2, b: 2 -> 3, c: 3 -> 1
                unit_product("e2", "a", "a"), unit_product("a", "e1", "a"),
                unit_product("e3", "b", "b"), unit_product("b", "e2", "b"),
                unit_product("e1", "c", "c"), unit_product("c", "e3", "c")};
  return named(std::move(d));
}

std::optional<AlgebraPtr> builtin_algebra(const std::string& name) {
  if (name == "dual_numbers") return dual_numbers();
  if (name == "a2_quiver") return a2_quiver();
  if (name == "three_cycle") return three_cycle();
  constexpr std::string_view prefix = "trunc_poly_";
  if (name.starts_with(prefix)) {
    int n = 0;
    const char* first = name.data() + prefix.size();
    const char* last = name.data() + name.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec == std::errc() && ptr == last && n >= 1 && n <= 64) {
      auto a = build_truncated_poly(n, 2);
      AlgebraTable t = a->table();
      t.name = name;
      return GradedAlgebra::create(std::move(t));
    }
  }
  return std::nullopt;
}

std::vector<std::string> builtin_algebra_names() {
  return {"dual_numbers", "a2_quiver", "three_cycle", "trunc_poly_<n>"};
}

}  // namespace qgroth::fixtures
