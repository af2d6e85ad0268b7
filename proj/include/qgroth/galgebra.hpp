#pragma once

// Finite-dimensional positively graded algebras over Q whose degree-zero part
// is a product of copies of Q, one per primitive idempotent.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qgroth/linalg.hpp"
#include "qgroth/qring.hpp"

namespace qgroth {

struct BasisElement {
  std::string label;
  int degree = 0;

  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

// Raw multiplication table, indexed by basis position.  Omitted products are 0.
struct AlgebraTable {
  std::string name;
  std::vector<BasisElement> basis;
  std::vector<std::size_t> idempotents;
  std::map<std::pair<std::size_t, std::size_t>, SparseVector> products;
};

// The same data keyed by labels, as read from a description file.
struct AlgebraDescription {
  struct Term {
    std::string label;
    Rational coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };
  struct Product {
    std::string left;
    std::string right;
    std::vector<Term> result;
    friend bool operator==(const Product&, const Product&) = default;
  };

  std::string name;
  std::vector<BasisElement> basis;
  std::vector<std::string> idempotents;
  std::vector<Product> products;

  friend bool operator==(const AlgebraDescription&, const AlgebraDescription&) = default;
};

struct Violation {
  std::string kind;  // grading, associativity, unit, orthogonality, basic, range
  std::string message;
  std::vector<std::size_t> witness;  // basis positions
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(const std::string& kind) const;
  std::string to_string() const;
};

ValidationReport validate_algebra(const AlgebraTable& table);

// Position of a simple module (equivalently of its idempotent), 0-based.
struct SimpleIndex {
  std::size_t pos = 0;
  friend auto operator<=>(const SimpleIndex&, const SimpleIndex&) = default;
};

class GradedAlgebra;
using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

class GradedAlgebra {
public:
  // Throws ValidationError carrying the report if the table is invalid.
  static AlgebraPtr create(AlgebraTable table);

  const std::string& name() const noexcept { return table_.name; }
  const AlgebraTable& table() const noexcept { return table_; }
  std::size_t dim() const noexcept { return table_.basis.size(); }
  const BasisElement& basis(std::size_t i) const { return table_.basis.at(i); }
  int degree(std::size_t i) const { return table_.basis.at(i).degree; }
  int max_degree() const noexcept { return max_degree_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

  std::size_t num_simples() const noexcept { return table_.idempotents.size(); }
  std::size_t idempotent(SimpleIndex s) const { return table_.idempotents.at(s.pos); }
  const std::string& simple_label(SimpleIndex s) const { return basis(idempotent(s)).label; }
  std::optional<SimpleIndex> simple_of_label(const std::string& label) const;

  // Basis positions of the given degree, ascending.
  const std::vector<std::size_t>& degree_component(int d) const;

  Vector unit_vector(std::size_t i) const;
  const Vector& product(std::size_t i, std::size_t j) const { return products_[i * dim() + j]; }
  Vector multiply(const Vector& u, const Vector& v) const;
  // Matrix of x -> b_i x.
  const Matrix& left_mult(std::size_t i) const { return left_mult_[i]; }

private:
  explicit GradedAlgebra(AlgebraTable table);

  AlgebraTable table_;
  int max_degree_ = 0;
  std::vector<Vector> products_;
  std::vector<Matrix> left_mult_;
  std::map<int, std::vector<std::size_t>> by_degree_;
};

AlgebraPtr build_truncated_poly(int n, int g);
// Resolves labels; ParseError on duplicate or unknown labels, ValidationError
// if the resulting table is invalid.
AlgebraPtr build_from_table(const AlgebraDescription& description);
AlgebraTable table_from_description(const AlgebraDescription& description);
AlgebraDescription describe(const GradedAlgebra& algebra);

struct CornerAlgebra {
  AlgebraPtr algebra;
  // Ambient simple position of each corner simple, ascending.
  std::vector<SimpleIndex> kept;
  // Ambient coordinates of each corner basis element.
  std::vector<Vector> embedding;
  // Ambient basis position when the corner element is an ambient basis element.
  std::vector<std::optional<std::size_t>> ambient_index;
};

// e A e for e the sum of the kept idempotents.
CornerAlgebra corner_algebra(const AlgebraPtr& a, const std::set<SimpleIndex>& kept);

LaurentSeries poincare_series(const GradedAlgebra& a);

}  // namespace qgroth
