#include "doctest.h"

#include <filesystem>

#include "qgroth/errors.hpp"
#include "qgroth/fixtures.hpp"
#include "qgroth/kgroup.hpp"
#include "qgroth/workspace.hpp"
#include "../support/generators.hpp"

using namespace qgroth;

namespace {

const std::filesystem::path kFixtures = QGROTH_FIXTURE_DIR;

std::string message_of(const std::string& text) {
  try {
    parse_workspace_text(text, "ws.json");
  } catch (const Error& e) {
    return e.kind() + ": " + e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("bundled fixtures parse") {
  const Workspace dual = parse_workspace(kFixtures / "dual_numbers.json");
  CHECK(dual.algebras.size() == 1);
  CHECK(dual.modules.size() == 1);
  CHECK(dual.modules[0].name == "H");
  const Library lib(dual);
  const ModulePtr h = lib.module("H");
  CHECK(h->components() == projective_module(lib.algebra("dual_numbers"), SimpleIndex{0}, 0).components());
  CHECK(class_of_module(*h) == class_of_module(projective_module(fixtures::dual_numbers(), SimpleIndex{0}, 0)));

  const Workspace a2 = parse_workspace(kFixtures / "a2_quiver.json");
  CHECK(a2.complexes.size() == 2);
  const Library lib2(a2);
  CHECK(lib2.complex("radical_inclusion").cohomologies().size() == 1);
  CHECK(euler_characteristic(lib2.complex("cancelling_pair")).is_zero());
  CHECK_THROWS_AS(lib2.complex("nope"), DanglingReference);
  CHECK_THROWS_AS(lib2.module("nope"), DanglingReference);

  const Workspace three = parse_workspace(kFixtures / "three_cycle.json");
  CHECK(Library(three).module("uniserial_12")->check().empty());
}

TEST_CASE("round trip") {
  for (const char* name : {"dual_numbers.json", "a2_quiver.json", "three_cycle.json"}) {
    const Workspace ws = parse_workspace(kFixtures / name);
    const std::string text = serialize_workspace(ws);
    const Workspace again = parse_workspace_text(text);
    CHECK(again == ws);
    CHECK(serialize_workspace(again) == text);
  }
}

TEST_CASE("random modules survive serialization") {
  qgroth::testing::Rng rng(61);
  for (const auto& a : qgroth::testing::fixture_algebras()) {
    Workspace ws;
    ws.algebras.push_back(describe(*a));
    std::vector<ModulePtr> mods;
    for (int i = 0; i < 4; ++i) {
      mods.push_back(qgroth::testing::random_module(rng, a));
      ws.modules.push_back(describe_module(*mods.back(), "m" + std::to_string(i)));
      ws.modules.back().algebra = a->name();
    }
    const Workspace back = parse_workspace_text(serialize_workspace(ws));
    CHECK(back == ws);
    const Library lib(back);
    for (int i = 0; i < 4; ++i) {
      const ModulePtr m = lib.module("m" + std::to_string(i));
      CHECK(m->components() == mods[i]->components());
      CHECK(m->action_table() == mods[i]->action_table());
    }
  }
}

TEST_CASE("rationals") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-1/2") == Rational(-1, 2));
  CHECK(parse_rational("4/2") == 2);
  CHECK(format_rational(Rational(-1, 2)) == "-1/2");
  CHECK(format_rational(Rational(6, 3)) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
}

TEST_CASE("dangling references") {
  const std::string text = R"({"algebras": [], "modules": [
    {"name": "M", "algebra": "missing_algebra", "components": [], "action": []}]})";
  const std::string msg = message_of(text);
  CHECK(msg.starts_with("DanglingReference"));
  CHECK(msg.find("missing_algebra") != std::string::npos);

  const std::string complex_text = R"({"algebras": [], "modules": [], "complexes": [
    {"name": "C", "algebra": "dual_numbers", "terms": [{"index": 0, "module": "ghost"}], "differentials": []}]})";
  CHECK(message_of(complex_text).find("ghost") != std::string::npos);

  const std::string builtin = R"({"algebras": [], "modules": [
    {"name": "M", "algebra": "trunc_poly_3", "components": [{"degree": 0, "dim": 1}],
     "action": [{"element": "1", "from_degree": 0, "matrix": [["1"]]}]}]})";
  CHECK(Library(parse_workspace_text(builtin)).module("M")->total_dim() == 1);
}

TEST_CASE("parse errors carry line and column") {
  CHECK(message_of("{\n  \"algebras\": [,]\n}").starts_with("ParseError: ws.json:2:"));

  const std::string wrong_type = "{\n  \"algebras\": [\n    {\"name\": 5}\n  ]\n}";
  const std::string m1 = message_of(wrong_type);
  CHECK(m1.starts_with("ParseError: ws.json:3:"));

  const std::string bad_degree =
      "{\"algebras\": [{\"name\": \"a\", \"idempotents\": [], \"products\": [],\n"
      "  \"basis\": [{\"label\": \"e\", \"degree\": \"zero\"}]}]}";
  CHECK(message_of(bad_degree).starts_with("ParseError: ws.json:2:"));

  const std::string dup = R"({"algebras": [], "modules": [
    {"name": "M", "algebra": "dual_numbers", "components": [], "action": []},
    {"name": "M", "algebra": "dual_numbers", "components": [], "action": []}]})";
  const std::string m2 = message_of(dup);
  CHECK(m2.starts_with("ParseError: ws.json:3:"));
  CHECK(m2.find("duplicate") != std::string::npos);

  const std::string bad_rational = R"({"algebras": [], "modules": [
    {"name": "M", "algebra": "dual_numbers", "components": [{"degree": 0, "dim": 1}],
     "action": [{"element": "1", "from_degree": 0, "matrix": [["1/0"]]}]}]})";
  CHECK(message_of(bad_rational).starts_with("ParseError: ws.json:3:"));

  CHECK_THROWS_AS(parse_workspace(kFixtures / "does_not_exist.json"), ParseError);
}

TEST_CASE("semantic validation") {
  const std::string bad_action = R"({"algebras": [], "modules": [
    {"name": "M", "algebra": "dual_numbers", "components": [{"degree": 0, "dim": 1}],
     "action": [{"element": "1", "from_degree": 0, "matrix": [["2"]]}]}]})";
  CHECK_THROWS_AS(Library(parse_workspace_text(bad_action)).module("M"), ValidationError);

  const std::string unknown_element = R"({"algebras": [], "modules": [
    {"name": "M", "algebra": "dual_numbers", "components": [{"degree": 0, "dim": 1}],
     "action": [{"element": "y", "from_degree": 0, "matrix": [["1"]]}]}]})";
  CHECK_THROWS_AS(Library(parse_workspace_text(unknown_element)).module("M"), ValidationError);

  const std::string bad_differential = R"({"algebras": [], "modules": [
    {"name": "L", "algebra": "dual_numbers", "components": [{"degree": 0, "dim": 1}],
     "action": [{"element": "1", "from_degree": 0, "matrix": [["1"]]}]},
    {"name": "H", "algebra": "dual_numbers", "components": [{"degree": 0, "dim": 1}, {"degree": 2, "dim": 1}],
     "action": [{"element": "1", "from_degree": 0, "matrix": [["1"]]}, {"element": "1", "from_degree": 2, "matrix": [["1"]]},
                {"element": "x", "from_degree": 0, "matrix": [["1"]]}]}],
    "complexes": [{"name": "C", "algebra": "dual_numbers",
      "terms": [{"index": 0, "module": "L"}, {"index": 1, "module": "H"}],
      "differentials": [{"index": 0, "blocks": [{"degree": 0, "matrix": [["1"]]}]}]}]})";
  CHECK_THROWS_AS(Library(parse_workspace_text(bad_differential)).complex("C"), ValidationError);
}
