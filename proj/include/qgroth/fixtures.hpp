#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgroth/galgebra.hpp"

namespace qgroth::fixtures {

// k[x]/(x^2), deg x = 2: the cohomology ring of P^1.
AlgebraPtr dual_numbers();

// Two vertices and one degree-1 arrow a with e2 a = a = a e1.
AlgebraPtr a2_quiver();

// Cyclic quiver 1 -> 2 -> 3 -> 1 with degree-1 arrows and all paths of
// length two set to zero.  Infinite global dimension.
AlgebraPtr three_cycle();

// Bundled algebras by name: dual_numbers, a2_quiver, three_cycle, and
// trunc_poly_<n> for k[x]/(x^n) with deg x = 2.
std::optional<AlgebraPtr> builtin_algebra(const std::string& name);
std::vector<std::string> builtin_algebra_names();

}  // namespace qgroth::fixtures
