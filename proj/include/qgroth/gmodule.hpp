#pragma once

// Finite-dimensional graded modules over a GradedAlgebra.
//
// Weight convention: a simple concentrated in internal degree d has weight -d,
// and the Tate twist (1) is the shift <1>.  All weight windows go through
// weight_of_degree / degree_of_weight.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "qgroth/galgebra.hpp"
#include "qgroth/linalg.hpp"

namespace qgroth {

constexpr int weight_of_degree(int internal_degree) noexcept { return -internal_degree; }
constexpr int degree_of_weight(int weight) noexcept { return -weight; }

// P_s<shift> or L_s<shift>.
struct ShiftedIndex {
  SimpleIndex simple;
  int shift = 0;
  friend auto operator<=>(const ShiftedIndex&, const ShiftedIndex&) = default;
};

// Formal sum of shifted generators with multiplicities.
using FormalSum = std::map<ShiftedIndex, long>;

void add_to(FormalSum& sum, ShiftedIndex key, long mult);

class GradedModule;
using ModulePtr = std::shared_ptr<const GradedModule>;

// Keyed by (algebra basis position, source degree).
using ActionKey = std::pair<std::size_t, int>;
using ActionTable = std::map<ActionKey, Matrix>;

class GradedModule {
public:
  // Validates shapes, unit action and compatibility with products; throws
  // ValidationError.
  static GradedModule create(AlgebraPtr algebra, std::map<int, std::size_t> components,
                             ActionTable action);
  // For results of module operations, which are correct by construction.
  static GradedModule unchecked(AlgebraPtr algebra, std::map<int, std::size_t> components,
                                ActionTable action);

  const AlgebraPtr& algebra() const noexcept { return algebra_; }
  const std::map<int, std::size_t>& components() const noexcept { return components_; }
  const ActionTable& action_table() const noexcept { return action_; }

  std::size_t dim(int degree) const;
  std::size_t total_dim() const;
  bool is_zero() const noexcept { return components_.empty(); }
  std::optional<int> min_degree() const;
  std::optional<int> max_degree() const;

  // Matrix of b acting M_d -> M_{d+deg b}; zero if not stored.
  Matrix action(std::size_t basis, int degree) const;
  // a . v for a homogeneous algebra element a of degree deg_a and v in M_d.
  Vector act(const Vector& a, int deg_a, int degree, const Vector& v) const;

  // Invariant violations; empty when the module is valid.
  std::vector<std::string> check() const;

private:
  GradedModule(AlgebraPtr algebra, std::map<int, std::size_t> components, ActionTable action);

  AlgebraPtr algebra_;
  std::map<int, std::size_t> components_;
  ActionTable action_;
};

// Degree-preserving A-linear map, stored degreewise.
struct ModuleMap {
  ModulePtr source;
  ModulePtr target;
  std::map<int, Matrix> blocks;

  // target.dim(d) x source.dim(d); zero if not stored.
  Matrix block(int degree) const;
};

// Throws NotAModuleMap naming a witnessing basis element and degree.
void check_module_map(const ModuleMap& f);
ModuleMap compose(const ModuleMap& g, const ModuleMap& f);  // g after f
ModuleMap identity_map(const ModulePtr& m);
ModuleMap zero_map(const ModulePtr& source, const ModulePtr& target);
bool is_injective(const ModuleMap& f);
bool is_surjective(const ModuleMap& f);
// 0 -> A -i-> B -p-> C -> 0 exact, verified by ranks.
bool is_short_exact(const ModuleMap& i, const ModuleMap& p);

struct Submodule {
  ModulePtr module;
  ModuleMap inclusion;
};

struct QuotientModule {
  ModulePtr module;
  ModuleMap projection;
};

using DegreeSubspaces = std::map<int, Subspace>;

ModulePtr make_module(GradedModule m);

GradedModule simple_module(const AlgebraPtr& a, SimpleIndex s, int shift);
GradedModule projective_module(const AlgebraPtr& a, SimpleIndex s, int shift);
// Direct sum of P_s<shift>^mult, in key order.
GradedModule projective_sum(const AlgebraPtr& a, const FormalSum& terms);
GradedModule shifted(const GradedModule& m, int k);
GradedModule direct_sum(const std::vector<ModulePtr>& parts);

// The per-degree subspaces of A spanning A e_s (degree of A, not of the module).
DegreeSubspaces projective_basis(const GradedAlgebra& a, SimpleIndex s);

// Throws std::invalid_argument if the subspaces are not A-stable.
Submodule submodule(const ModulePtr& m, const DegreeSubspaces& subspaces);
Submodule generated_submodule(const ModulePtr& m, const std::vector<std::pair<int, Vector>>& elements);
QuotientModule quotient(const ModulePtr& m, const DegreeSubspaces& subspaces);
Submodule kernel(const ModuleMap& f);
Submodule image(const ModuleMap& f);

struct RadicalTop {
  Submodule radical;
  FormalSum top;
};

RadicalTop radical_and_top(const ModulePtr& m);

struct ProjectiveCover {
  ModulePtr cover;
  ModuleMap surjection;
  // Summands of the cover in order; equal keys appear once per copy.
  std::vector<ShiftedIndex> summands;
};

// Throws ZeroModule.
ProjectiveCover projective_cover(const ModulePtr& m);

struct WeightData {
  std::set<int> weights_present;
  std::optional<int> degree;  // nullopt is minus infinity
};

WeightData weight_data(const GradedModule& m);

struct FiltrationStep {
  int weight = 0;  // W_weight; the subquotient W_weight / W_prev is pure of this weight
  Submodule sub;
};

std::vector<FiltrationStep> weight_filtration(const ModulePtr& m);

struct BaricSplit {
  Submodule below;       // weights <= n
  QuotientModule above;  // weights >= n + 1
};

BaricSplit baric_truncate(const ModulePtr& m, int n);

}  // namespace qgroth
