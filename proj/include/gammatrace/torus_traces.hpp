#pragma once

#include <cstdint>
#include <vector>

#include "gammatrace/cyclotomic.hpp"
#include "gammatrace/field_tower.hpp"
#include "gammatrace/permutation.hpp"
#include "gammatrace/weight_system.hpp"

namespace gammatrace {

/// A point t of the torus with w(F(t)) = t, where (w.s)_{w(i)} = s_i. One
/// value per w-cycle (i_0, w(i_0), ...) of length l, stored as its discrete
/// log in F_{q^l}; the other coordinates are t_{w^k(i_0)} = t_{i_0}^{q^k}.
struct TwistedTorusPoint {
  Permutation w;
  std::vector<std::uint64_t> cycle_logs;
};

/// T_w(F_q) for a coordinate permutation w.
class TwistedTorus {
 public:
  TwistedTorus(const FieldTower& tower, Permutation w);

  const Permutation& w() const { return w_; }
  std::size_t size() const { return size_; }
  const std::vector<std::vector<std::uint32_t>>& cycles() const { return cycles_; }
  std::uint32_t cycle_level(std::size_t c) const { return static_cast<std::uint32_t>(cycles_[c].size()); }
  /// Smallest level containing every coordinate.
  std::uint32_t splitting_level() const { return splitting_level_; }

  /// Mixed-radix enumeration order, first cycle fastest.
  TwistedTorusPoint point(std::size_t index) const;
  std::size_t index_of(const std::vector<std::uint64_t>& cycle_logs) const;
  std::size_t index_of(const TwistedTorusPoint& pt) const { return index_of(pt.cycle_logs); }

  /// Discrete logs of all d coordinates at level L (a multiple of every cycle length).
  std::vector<std::uint64_t> expand_logs(const TwistedTorusPoint& pt, std::uint32_t level) const;
  std::vector<Code> expand_codes(const TwistedTorusPoint& pt, std::uint32_t level) const;
  /// Checks w(F(t)) = t coordinatewise on the expanded tuple.
  bool satisfies_fixed_point_equation(const TwistedTorusPoint& pt) const;
  /// Product of the coordinates listed, as a level-1 discrete log.
  std::uint64_t product_log(const TwistedTorusPoint& pt, const std::vector<std::uint32_t>& coords) const;
  /// Characteristic polynomial prod_j (X - t_j) as level-1 codes, low degree first, monic.
  std::vector<Code> charpoly(const TwistedTorusPoint& pt) const;

 private:
  const FieldTower* tower_;
  Permutation w_;
  std::vector<std::vector<std::uint32_t>> cycles_;
  std::vector<std::uint32_t> cycle_of_coord_;
  std::vector<std::uint32_t> pos_in_cycle_;
  std::vector<std::uint64_t> radix_;
  std::size_t size_ = 1;
  std::uint32_t splitting_level_ = 1;
};

/// For each xi-cycle of slots, the contribution of its free value (log 1 at
/// the cycle level) to the level-L log of every torus coordinate.
struct SlotCycles {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::vector<std::vector<std::uint64_t>> coef;  // [cycle][coord]
  std::vector<std::uint64_t> radix;
};
SlotCycles slot_cycles(const FieldTower& tower, const WeightSystem& ws, const Permutation& xi, std::uint32_t level);

/// (-1)^r sum over x in (F_q^x)^r with p(x) = t of psi(x_1 + ... + x_r), by
/// direct enumeration of slot values. t is given by level-1 codes.
RootSum hyper_trace_roots(const FieldTower& tower, const WeightSystem& ws, const std::vector<Code>& t);
CycNum hyper_trace(const FieldTower& tower, const WeightSystem& ws, const std::vector<Code>& t);

/// The same fiber sum over points x with xi(F(x)) = x lying over the twisted
/// point t, without any sign prefactor besides (-1)^r. xi must be a lift of w.
RootSum raw_twisted_trace_roots(const FieldTower& tower, const WeightSystem& ws, const Permutation& xi,
                                const TwistedTorusPoint& pt);
/// sign(xi) sign(w) times the raw local sum; independent of the lift chosen.
CycNum twisted_stalk_trace(const FieldTower& tower, const WeightSystem& ws, const Permutation& xi,
                           const TwistedTorusPoint& pt);
/// Same with the canonical lift of pt.w.
CycNum twisted_stalk_trace(const FieldTower& tower, const WeightSystem& ws, const TwistedTorusPoint& pt);

/// Which twist is applied on top of the raw Lefschetz sum.
enum class TwistMode {
  kSigned,     // multiply by sign_r(xi) sign_W(w)
  kGeometric,  // raw sum only
};

/// Raw traces at every point of T_w(F_q) for a fixed lift xi, computed in one
/// pass over the xi F-fixed points of G_m^r.
class TwistedTraceTable {
 public:
  TwistedTraceTable(const FieldTower& tower, const WeightSystem& ws, const Permutation& w, const Permutation& xi);
  TwistedTraceTable(const FieldTower& tower, const WeightSystem& ws, const Permutation& w);

  const TwistedTorus& torus() const { return torus_; }
  const Permutation& xi() const { return xi_; }
  int epsilon() const { return epsilon_; }
  std::size_t size() const { return raw_.size(); }
  /// Counts of zeta_p^k, already multiplied by (-1)^r.
  const RootSum& raw(std::size_t index) const { return raw_[index]; }
  RootSum trace(std::size_t index, TwistMode mode = TwistMode::kSigned) const {
    return mode == TwistMode::kSigned && epsilon_ < 0 ? raw_[index].scaled(-1) : raw_[index];
  }
  /// Number of xi F-fixed points enumerated.
  std::uint64_t fixed_points() const { return fixed_points_; }

 private:
  TwistedTorus torus_;
  Permutation xi_;
  int epsilon_ = 1;
  std::vector<RootSum> raw_;
  std::uint64_t fixed_points_ = 0;
};

}  // namespace gammatrace
