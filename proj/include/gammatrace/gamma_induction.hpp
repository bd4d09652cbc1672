#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gammatrace/matrix.hpp"
#include "gammatrace/torus_traces.hpp"

namespace gammatrace {

/// Full flag V_1 < ... < V_{n-1} in F_q^n. Each V_k is stored as the reduced
/// row echelon form of a k x n basis; `basis` has columns v_1, ..., v_n with
/// V_k = span(v_1..v_k).
struct FlagPoint {
  std::vector<Matrix> subspaces;
  Matrix basis;
  bool operator<(const FlagPoint& o) const { return subspaces < o.subspaces; }
  bool operator==(const FlagPoint& o) const { return subspaces == o.subspaces; }
};

/// Every full flag of F_q^n, sorted.
std::vector<FlagPoint> all_flags(const MatOps& ops, std::uint32_t n);
/// Flags with g V_k = V_k for all k.
std::vector<FlagPoint> flag_fixed_points(const MatOps& ops, const Matrix& g);

/// (-1)^{n^2-n} sum over g-stable flags h of hyper_trace(diag(h^{-1} g h)).
CycNum induced_trace(const FieldTower& tower, const WeightSystem& ws, const Matrix& g);

/// Orderings t of the roots of c (with multiplicity) with w(F(t)) = t.
std::vector<TwistedTorusPoint> steinberg_fiber(const FieldTower& tower, const Poly& c, const Permutation& w);

/// Minimal polynomial equals characteristic polynomial.
bool is_regular(const MatOps& ops, const Matrix& x);
/// Pairwise distinct eigenvalues over the algebraic closure.
bool is_rss(const MatOps& ops, const Matrix& x);

/// (1/|W|) sum over w and t in steinberg_fiber(c(x), w) of the twisted stalk
/// trace, evaluated point by point. Throws NotComputableLocus unless x is regular.
CycNum phi_regular(const FieldTower& tower, const WeightSystem& ws, const Matrix& x,
                   TwistMode mode = TwistMode::kSigned);

/// The same values for every characteristic polynomial at once, by sorting
/// the points of each twisted torus by characteristic polynomial.
class PhiTable {
 public:
  PhiTable(const FieldTower& tower, const WeightSystem& ws, TwistMode mode = TwistMode::kSigned);

  const FieldTower& tower() const { return *tower_; }
  const WeightSystem& weights() const { return ws_; }
  std::uint32_t n() const { return ws_.d; }
  std::uint64_t weyl_order() const { return weyl_order_; }
  TwistMode mode() const { return mode_; }

  /// |W| times the value at c (exact integer combination of zeta_p powers).
  const RootSum& scaled_value(const Poly& c) const;
  CycNum value(const Poly& c) const;
  /// Regular points only; throws NotComputableLocus otherwise.
  CycNum at(const Matrix& x) const;
  const RootSum& scaled_at(const Matrix& x) const;

 private:
  const FieldTower* tower_;
  WeightSystem ws_;
  TwistMode mode_;
  std::uint64_t weyl_order_ = 1;
  std::map<Poly, RootSum> table_;
  RootSum zero_;
};

struct CosetVanishing {
  CycNum coset_sum;   // sum over u in U_Q of phi(u x)
  CycNum fiber_sum;   // sum over c with c(0) = c(x)(0) of phi(c)
};
/// x in the top stratum (e_1 cyclic), n >= 2. Throws NotTopStratum otherwise.
CosetVanishing coset_vanishing_top(const PhiTable& phi, const Matrix& x);

/// Sum over upper unitriangular u of phi(u g); every u g must be regular.
CycNum unipotent_coset_sum(const PhiTable& phi, const Matrix& g);

}  // namespace gammatrace
