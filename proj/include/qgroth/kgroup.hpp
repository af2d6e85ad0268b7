#pragma once

// The completed Grothendieck group of A-gmod, represented canonically: a class
// is a vector of Laurent series indexed by simples (or by indecomposable
// projectives) and known modulo q^N.  The coefficient of q^i on generator s
// counts the generator shifted by <i>, i.e. weight -i relative to it.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qgroth/galgebra.hpp"
#include "qgroth/gmodule.hpp"
#include "qgroth/qring.hpp"
#include "qgroth/resolve.hpp"

namespace qgroth {

enum class BasisMode { Simple, Projective };

std::string to_string(BasisMode m);

class KClass {
public:
  // Coordinates are truncated to the common precision (the minimum of
  // `precision` and every coordinate's own window).
  KClass(AlgebraPtr algebra, BasisMode mode, std::vector<LaurentSeries> coords,
         Precision precision = std::nullopt);

  static KClass zero(AlgebraPtr algebra, BasisMode mode, Precision precision = std::nullopt);
  // q^shift [generator s]
  static KClass generator(AlgebraPtr algebra, BasisMode mode, SimpleIndex s, int shift = 0);

  const AlgebraPtr& algebra() const noexcept { return algebra_; }
  BasisMode mode() const noexcept { return mode_; }
  const std::vector<LaurentSeries>& coords() const noexcept { return coords_; }
  const LaurentSeries& coord(SimpleIndex s) const { return coords_.at(s.pos); }
  Precision precision() const noexcept { return precision_; }
  bool is_exact() const noexcept { return !precision_.has_value(); }
  std::size_t rank() const noexcept { return coords_.size(); }

  bool is_zero() const;
  KClass truncated(Precision n) const;
  // q-action
  KClass times(const LaurentSeries& s) const;
  KClass shifted(int k) const { return times(LaurentSeries::monomial(k)); }

  // Adding classes of different algebras or modes throws BasisMismatch.
  friend KClass operator+(const KClass& a, const KClass& b);
  friend KClass operator-(const KClass& a, const KClass& b);
  KClass operator-() const;
  friend bool operator==(const KClass& a, const KClass& b);

  // One line per generator: "[L_s]: 1 - q^2 + O(q^40)".
  std::string to_string() const;

private:
  AlgebraPtr algebra_;
  BasisMode mode_;
  std::vector<LaurentSeries> coords_;
  Precision precision_;
};

// Coordinatewise three-valued comparison; Unequal if modes or algebras differ.
Comparison compare(const KClass& a, const KClass& b);

// "L" / "P" for algebras with one simple, "L_<label>" otherwise.
std::string generator_name(const GradedAlgebra& a, BasisMode mode, SimpleIndex s);

KClass class_of_module(const GradedModule& m);
KClass class_of_sum(const AlgebraPtr& a, BasisMode mode, const FormalSum& terms);

// Column s is the class of P_s in the simple basis.
SeriesMatrix cartan_matrix(const AlgebraPtr& a);

// Throws PrecisionUnderflow if x is known to less than `precision`.
KClass change_basis(const KClass& x, BasisMode to, int precision);

// sum (-1)^i [P^i] in projective coordinates.  Throws
// NotAsymptoticallyDecreasing when the complex does not determine the class to
// the requested precision.  A finite complex yields an exact class.
KClass euler_characteristic(const ProjComplex& c, int precision);
// sum (-1)^i [H^i] in simple coordinates (exact).
KClass euler_characteristic(const AlgebraPtr& a, const std::map<int, ModulePtr>& cohomologies);
KClass euler_characteristic(const ModuleComplex& c);

struct BetaSplit {
  KClass at_least;  // [beta_{>=m}] x, exact
  KClass below;     // [beta_{<=m-1}] x
};

// Simple-mode classes only.  Throws PrecisionUnderflow unless x is known past
// the exponent -m.
BetaSplit beta_map(const KClass& x, int m);

// Complex of shifted simples with zero differentials.
struct SimpleComplex {
  AlgebraPtr algebra;
  std::map<int, FormalSum> terms;  // index -> sum of L_s<shift>
  Precision precision;             // its class agrees with the target to this window

  ModuleComplex to_module_complex() const;
};

KClass euler_characteristic(const SimpleComplex& c);

// Layer i >= 1 holds the weight n-i+1 part of the target; its positive part
// goes to index -2i and its negative part to index -2i+1.  Throws
// WeightTooHigh if the target has a weight above n.
SimpleComplex realize_class(const KClass& target, int n, int depth);

// Graded (B, A)-bimodule: left action of B, right action of A, commuting.
struct GradedBimodule {
  AlgebraPtr left;
  AlgebraPtr right;
  std::map<int, std::size_t> components;
  ActionTable left_action;   // (basis of B, degree) : M_d -> M_{d+deg}
  ActionTable right_action;  // (basis of A, degree) : m -> m a

  std::size_t dim(int d) const;
  Matrix left_matrix(std::size_t b, int d) const;
  Matrix right_matrix(std::size_t a, int d) const;
  std::vector<std::string> check() const;
};

// A as an (A, A)-bimodule.
GradedBimodule regular_bimodule(const AlgebraPtr& a);

struct IdentityFunctor {
  AlgebraPtr algebra;
};
// Q: A-gmod -> (A-gmod)/S_I, realized as e A e-modules with e the sum of the
// idempotents not in `killed`.
struct ExactQuotient {
  AlgebraPtr algebra;
  std::set<SimpleIndex> killed;
};
// LQ', the derived left adjoint of Q: N -> A e (x)_{eAe} N.
struct DerivedCornerAdjoint {
  AlgebraPtr algebra;
  std::set<SimpleIndex> killed;
};
// L(M (x)_A -).
struct TensorBimodule {
  GradedBimodule bimodule;
};

using FunctorDescriptor = std::variant<IdentityFunctor, ExactQuotient, DerivedCornerAdjoint, TensorBimodule>;

struct KLinearMap {
  AlgebraPtr source;
  AlgebraPtr target;  // null when the target category is zero
  std::size_t source_rank = 0;
  std::size_t target_rank = 0;
  SeriesMatrix matrix;  // (target simple, source simple), simple bases
  Precision precision;
  // Largest weight gain seen over the computed window; nullopt for the zero map.
  std::optional<int> observed_amplitude;

  KClass apply(const KClass& x) const;
};

KLinearMap compose(const KLinearMap& g, const KLinearMap& f);  // g after f

// Restriction of an A-module to the corner e A e (the functor Q).
GradedModule corner_restriction(const GradedModule& m, const CornerAlgebra& corner);

KLinearMap functor_kmap(const FunctorDescriptor& f, int precision, int depth_cap = kDefaultDepthCap);

struct ProjectorReport {
  bool section_identity = false;  // [Q][LQ'] = 1
  bool idempotent = false;        // ([LQ'][Q])^2 = [LQ'][Q]
  SeriesMatrix section_residual;
  SeriesMatrix idempotent_residual;
};

// Throws ShapeMismatch if the maps are not composable in both orders.
ProjectorReport check_projector_laws(const KLinearMap& q_map, const KLinearMap& q_prime_map, int precision);

struct ContinuityReport {
  struct Column {
    std::size_t source_simple = 0;
    bool pass = true;
    std::optional<int> max_weight;  // of the image of the weight-0 generator
  };
  bool pass = true;
  int alpha = 0;
  std::vector<Column> columns;
};

ContinuityReport check_continuity(const KLinearMap& map, int alpha);

}  // namespace qgroth
