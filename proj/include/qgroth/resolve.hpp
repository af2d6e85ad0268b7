#pragma once

// Minimal projective resolutions computed down to a weight floor, the
// termwise assembly of resolutions of complexes, and cohomological
// truncation of explicit complexes.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgroth/gmodule.hpp"

namespace qgroth {

inline constexpr int kDefaultDepthCap = 200;

enum class StopReason {
  Complete,             // a syzygy vanished: the resolution is finite
  FloorReached,         // every remaining syzygy weight is below the floor
  DepthCap,             // depth_cap reached first
  NonDecreasingWeights  // syzygy degrees failed to drop over num_simples+1 steps
};

std::string to_string(StopReason r);

// Degree (maximal weight) of a formal sum of shifted projectives; nullopt is
// minus infinity.
std::optional<int> degree_of(const FormalSum& term);

// Bounded-above complex of shifted indecomposable projectives.
struct ProjComplex {
  AlgebraPtr algebra;
  std::map<int, FormalSum> terms;
  // Upper bound on degree(P^i) for every stored i.
  std::map<int, int> weight_certificate;
  int truncation_floor = 0;
  // Every term that was not computed has degree <= tail_degree; nullopt when
  // nothing is missing.
  std::optional<int> tail_degree;
  StopReason stop = StopReason::Complete;
  bool minimal = false;
  bool terms_only = false;

  // Realized terms and differentials d^i : P^i -> P^{i+1} (minimal
  // resolutions only), plus the augmentation P^0 -> M.
  std::map<int, ModulePtr> modules;
  std::map<int, ModuleMap> differentials;
  std::optional<ModuleMap> augmentation;

  std::optional<int> top_index() const;
  std::optional<int> bottom_index() const;
  // Window to which sum (-1)^i [P^i] is determined in projective coordinates.
  Precision kclass_precision() const;
};

ProjComplex minimal_resolution(const ModulePtr& m, int weight_floor, int depth_cap = kDefaultDepthCap);

struct WeightBoundReport {
  bool pass = true;
  std::optional<int> first_violation;  // cohomological index
};

// degree(Q^i) <= d + i for all stored i <= 0.
WeightBoundReport check_weight_bound(const ProjComplex& res, int d);

struct ResolutionCheck {
  bool d_squared_zero = true;
  bool exact = true;     // at every index where exactness is expected
  bool minimal = true;   // image(d) inside the radical of the target
  bool augmentation_onto = true;
  std::vector<std::string> problems;

  bool ok() const { return d_squared_zero && exact && minimal && augmentation_onto; }
};

ResolutionCheck check_resolution(const ProjComplex& res);

ProjComplex assemble_complex_resolution(const std::map<int, ModulePtr>& cohomologies, int weight_floor,
                                        int depth_cap = kDefaultDepthCap);

// d maps indices i <= N to a degree (nullopt or absent = minus infinity).
using DegreeProfile = std::map<int, std::optional<int>>;

// a_i = max{d_i, d_{i+1} - 1, ..., d_N - (N - i)} for lowest <= i <= N.
DegreeProfile weight_bound_profile(const DegreeProfile& d, int N, int lowest);
// An index k with a_i <= m for every i <= k.
int profile_threshold(const DegreeProfile& d, int N, int m);

// Explicit bounded complex of modules, differentials d^i : C^i -> C^{i+1}.
struct ModuleComplex {
  AlgebraPtr algebra;
  std::map<int, ModulePtr> terms;
  std::map<int, ModuleMap> differentials;

  ModulePtr term(int i) const;
  ModuleMap differential(int i) const;
  // Validates every differential and d o d = 0; throws NotAModuleMap.
  void check() const;
  ModulePtr cohomology(int i) const;
  // Nonzero cohomology modules.
  std::map<int, ModulePtr> cohomologies() const;
};

// Standard truncations tau^{<=k} and tau^{>=k+1}.
std::pair<ModuleComplex, ModuleComplex> truncate_complex(const ModuleComplex& c, int k);
// Termwise split of a projective complex at k (indices <= k, indices > k).
std::pair<ProjComplex, ProjComplex> truncate_complex(const ProjComplex& c, int k);

// (homological degree k, shift i) -> dim Ext^k(m, L_s<i>).
using ExtTable = std::map<std::pair<int, int>, long>;

ExtTable ext_dimensions(const ModulePtr& m, SimpleIndex s, int weight_floor,
                        int depth_cap = kDefaultDepthCap);

}  // namespace qgroth
