#pragma once

// The U_q(sl2) irreducible V_n on the basis v_0..v_n, its completion, and the
// realization of V_n through the rings H*(Gr(i, n)).

#include <optional>
#include <string>
#include <vector>

#include "qgroth/qring.hpp"

namespace qgroth {

enum class Sl2Convention {
  AsPrinted,  // E v_i = [i+1] q^(-i-1) v_(i+1), F v_i = [n-i+1] q^(1-i) v_(i-1)
  Balanced    // E v_i = [i+1]_b v_(i+1),        F v_i = [n-i+1]_b v_(i-1)
};

std::string to_string(Sl2Convention c);

// Entry (r, c) is the coefficient of v_r in X v_c.
struct QSl2Module {
  int n = 0;
  Sl2Convention convention = Sl2Convention::Balanced;
  SeriesMatrix E, F, K, Kinv;
};

// Throws std::invalid_argument for n < 0.
QSl2Module build_module(int n, Sl2Convention convention);

struct RelationResult {
  std::string name;
  bool pass = false;
  SeriesMatrix residual;  // lhs - rhs
};

struct RelationReport {
  int n = 0;
  Sl2Convention convention = Sl2Convention::Balanced;
  std::vector<RelationResult> relations;  // K Kinv, KE, KF, [E,F], in that order

  bool all_pass() const;
  const RelationResult& relation(const std::string& name) const;
  std::string to_string() const;
};

inline const char* const kRelKInverse = "K Kinv = 1";
inline const char* const kRelKE = "KE = q^2 EK";
inline const char* const kRelKF = "KF = q^-2 FK";
inline const char* const kRelEF = "EF - FE = (K - Kinv)/(q - q^-1)";

RelationReport check_relations(const QSl2Module& m);

// E^(n+1) = F^(n+1) = 0.
bool nilpotent_raising_lowering(const QSl2Module& m);

// Diagonal change of basis v^i = q^(-i(n-i)) binom(n, i)^(-1) v_i.
struct BasisTransform {
  int n = 0;
  int precision = 0;
  SeriesMatrix matrix;   // to O(q^precision)
  SeriesMatrix inverse;  // exact
};

BasisTransform dual_canonical_transform(int n, int precision);

struct RealizationEntry {
  int i = 0;
  LaurentSeries graded_rank;  // [H_i] = binom(n, i) [L_i]
  LaurentSeries image;        // coefficient of [L_i] in the image of v^i
  bool pass = false;
  // Cartan cross-check against H*(point) or H*(P^(n-1)); nullopt when not applicable.
  std::optional<bool> cartan_check;
};

struct RealizationReport {
  int n = 0;
  int precision = 0;
  std::vector<RealizationEntry> entries;

  bool pass() const;
  std::string to_string() const;
};

RealizationReport groth_realization(int n, int precision);

}  // namespace qgroth
