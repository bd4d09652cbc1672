#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gammatrace/cyclotomic.hpp"
#include "gammatrace/field_tower.hpp"
#include "gammatrace/matrix.hpp"

namespace gammatrace {

enum class Gl2ClassKind { kCentral, kCentralUnipotent, kSplit, kElliptic };

/// Conjugacy class of GL(2, F_q). Parameters are discrete logs: x I and
/// x [[1,1],[0,1]] use a = log x; diag(x, y) uses a < b; the elliptic class
/// of z in F_{q^2} - F_q uses a = min(log z, q log z) at level 2.
struct Gl2Class {
  Gl2ClassKind kind = Gl2ClassKind::kCentral;
  std::uint64_t a = 0, b = 0;
  std::uint64_t size = 1;
  Matrix rep;
  std::string label;
  bool regular() const { return kind != Gl2ClassKind::kCentral; }
};

enum class Gl2Family { kOneDim, kSteinbergTwist, kPrincipal, kCuspidal };

/// Irreducible character. alpha_a(x) = zeta_{q-1}^{a log x} on F_q^x and
/// phi_k(z) = zeta_{q^2-1}^{k log z} on F_{q^2}^x.
///   one-dim U_a: alpha_a(det)            steinberg-twist V_a: dim q
///   principal W_{a,b}, a < b: dim q+1     cuspidal X_k, k != kq: dim q-1
struct Gl2Irrep {
  Gl2Family family = Gl2Family::kOneDim;
  std::uint64_t a = 0, b = 0;
  std::uint64_t dim = 1;
  std::string label;
};

struct OrthogonalityReport {
  bool rows = false;
  bool columns = false;
  bool dimensions = false;   // sum of dim^2 = |G|
  bool class_sizes = false;  // sum of class sizes = |G|
  bool ok() const { return rows && columns && dimensions && class_sizes; }
};

class Gl2CharacterTable {
 public:
  /// Needs level 2 of the tower; q <= 11.
  explicit Gl2CharacterTable(const FieldTower& tower);

  const FieldTower& tower() const { return *tower_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t group_order() const { return (q_ * q_ - 1) * (q_ * q_ - q_); }
  const std::vector<Gl2Class>& classes() const { return classes_; }
  const std::vector<Gl2Irrep>& irreps() const { return irreps_; }
  const CycNum& value(std::size_t irrep, std::size_t cls) const { return values_[irrep][cls]; }
  /// Index of the class containing g.
  std::size_t class_of(const Matrix& g) const;
  /// Index of the class of g^{-1} for g in class c.
  std::size_t inverse_class(std::size_t c) const { return inverse_[c]; }

  /// Exact row and column orthogonality.
  OrthogonalityReport verify() const;

 private:
  const FieldTower* tower_;
  std::uint64_t q_;
  std::vector<Gl2Class> classes_;
  std::vector<Gl2Irrep> irreps_;
  std::vector<std::vector<CycNum>> values_;
  std::vector<std::size_t> inverse_;
  std::map<std::pair<Poly, bool>, std::size_t> lookup_;
};

}  // namespace gammatrace
