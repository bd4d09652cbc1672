#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gammatrace/characters.hpp"
#include "gammatrace/cyclotomic.hpp"
#include "gammatrace/torus_traces.hpp"

namespace gammatrace {

/// Character of T_w(F_q): one MultCharacter per w-cycle, at the cycle level,
/// evaluated on that cycle's free value.
struct TorusCharacter {
  std::vector<MultCharacter> parts;
};

/// Every character of T_w(F_q), first cycle fastest.
std::vector<TorusCharacter> all_torus_characters(const FieldTower& tower, const Permutation& w);

/// theta(t)^{-1} as an exponent of zeta_N, N a multiple of every part's order.
std::uint64_t inverse_character_exponent(const FieldTower& tower, const TorusCharacter& theta,
                                         const TwistedTorusPoint& pt, std::uint64_t n);

/// Sum over t in T_w(F_q) of the twisted stalk trace times theta(t)^{-1}.
CycNum mellin_gamma(const FieldTower& tower, const WeightSystem& ws, const Permutation& w, const TorusCharacter& theta);
/// Same, reusing a precomputed trace table for w.
CycNum mellin_gamma(const FieldTower& tower, const TwistedTraceTable& table, const TorusCharacter& theta,
                    TwistMode mode = TwistMode::kSigned);

/// For each xi-cycle C of slots, the character y -> theta^{-1}(p(x)) of
/// F_{q^|C|}^x, where x is y around C and 1 elsewhere.
std::vector<MultCharacter> orbit_characters(const FieldTower& tower, const WeightSystem& ws, const Permutation& w,
                                            const Permutation& xi, const TorusCharacter& theta);
/// Product of Gauss sums of the orbit characters of the canonical lift.
CycNum mellin_gauss_product(const FieldTower& tower, const WeightSystem& ws, const Permutation& w,
                            const TorusCharacter& theta);

/// Mellin factorization checker: the unit is fixed from (w = id, theta = 1)
/// and then every (w, theta) must satisfy mellin = unit * epsilon(w) * product.
class MellinCalibration {
 public:
  MellinCalibration(const FieldTower& tower, const WeightSystem& ws);
  const CycNum& unit() const { return unit_; }
  /// Unit as +-q^a, or nullopt if it is not of that shape.
  std::optional<std::pair<int, int>> unit_shape() const { return unit_shape_; }
  CycNum predicted(const Permutation& w, const TorusCharacter& theta) const;

 private:
  const FieldTower* tower_;
  WeightSystem ws_;
  CycNum unit_;
  std::optional<std::pair<int, int>> unit_shape_;
};

/// (t_Psi * chi)(x) = sum_t t_Psi(t) chi(t^{-1} x) on the split torus, for every x,
/// with chi given by one exponent per coordinate at level 1.
std::vector<CycNum> kummer_convolution(const FieldTower& tower, const WeightSystem& ws,
                                       const std::vector<std::uint64_t>& chi);
/// The constant (t_Psi * chi)(x) / chi(x); throws NotConstant if it varies.
CycNum kummer_convolution_scalar(const FieldTower& tower, const WeightSystem& ws,
                                 const std::vector<std::uint64_t>& chi);

/// Sums over w in W_j and t in T_w(F_q) of the twisted trace, split by the
/// value of det_j(t) and by the coordinates outside factor j (untouched by
/// W_j). Keys are (log det_j, logs of the other coordinates); values are not
/// yet divided by |W_j|.
std::map<std::vector<std::uint64_t>, RootSum> sigma_fiber_table(const FieldTower& tower, const WeightSystem& ws,
                                                                 std::uint32_t j, TwistMode mode = TwistMode::kSigned);
/// (1/|W_j|) sum over w in W_j and t with det_j(t) = z.
CycNum sigma_fiber_sum(const FieldTower& tower, const WeightSystem& ws, std::uint32_t j, Code z,
                       TwistMode mode = TwistMode::kSigned);

}  // namespace gammatrace
