#pragma once

// JSON workspace files: algebras, modules over them, and explicit complexes,
// cross-referenced by name.

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qgroth/galgebra.hpp"
#include "qgroth/gmodule.hpp"
#include "qgroth/linalg.hpp"
#include "qgroth/resolve.hpp"

namespace qgroth {

struct ModuleDescription {
  struct Component {
    int degree = 0;
    std::size_t dim = 0;
    friend bool operator==(const Component&, const Component&) = default;
  };
  struct Action {
    std::string element;
    int from_degree = 0;
    Matrix matrix;
    friend bool operator==(const Action&, const Action&) = default;
  };

  std::string name;
  std::string algebra;
  std::vector<Component> components;
  std::vector<Action> action;

  friend bool operator==(const ModuleDescription&, const ModuleDescription&) = default;
};

struct ComplexDescription {
  struct Term {
    int index = 0;
    std::string module;
    friend bool operator==(const Term&, const Term&) = default;
  };
  struct Block {
    int degree = 0;
    Matrix matrix;
    friend bool operator==(const Block&, const Block&) = default;
  };
  // d^index : C^index -> C^(index+1)
  struct Differential {
    int index = 0;
    std::vector<Block> blocks;
    friend bool operator==(const Differential&, const Differential&) = default;
  };

  std::string name;
  std::string algebra;
  std::vector<Term> terms;
  std::vector<Differential> differentials;

  friend bool operator==(const ComplexDescription&, const ComplexDescription&) = default;
};

struct Workspace {
  std::vector<AlgebraDescription> algebras;
  std::vector<ModuleDescription> modules;
  std::vector<ComplexDescription> complexes;

  friend bool operator==(const Workspace&, const Workspace&) = default;
};

// ParseError messages carry "source:line:column"; DanglingReference names the
// missing algebra or module.  Algebra references may also name a built-in
// fixture.
Workspace parse_workspace_text(const std::string& text, const std::string& source = "<input>");
Workspace parse_workspace(const std::filesystem::path& path);

std::string serialize_workspace(const Workspace& ws);

// "3", "-1/2"; ParseError otherwise.
Rational parse_rational(const std::string& s);
std::string format_rational(const Rational& r);

// Builds referenced objects on demand.  Invalid algebras, modules or
// complexes throw ValidationError.
class Library {
public:
  explicit Library(const Workspace& ws);

  AlgebraPtr algebra(const std::string& name) const;
  ModulePtr module(const std::string& name) const;
  ModuleComplex complex(const std::string& name) const;

  const Workspace& workspace() const noexcept { return ws_; }

private:
  Workspace ws_;
  // built on first use
  mutable std::map<std::string, AlgebraPtr> algebras_;
  mutable std::map<std::string, ModulePtr> modules_;
};

GradedModule module_from_description(const AlgebraPtr& a, const ModuleDescription& d);
ModuleDescription describe_module(const GradedModule& m, const std::string& name);

}  // namespace qgroth
