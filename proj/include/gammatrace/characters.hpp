#pragma once

#include <cstdint>

#include "gammatrace/cyclotomic.hpp"
#include "gammatrace/field_tower.hpp"

namespace gammatrace {

/// chi(g^k) = zeta_{q^m-1}^{exponent * k} on F_{q^m}^x, g the level generator.
struct MultCharacter {
  std::uint32_t level = 1;
  std::uint64_t exponent = 0;

  bool is_trivial(const FieldTower& tower) const { return exponent % tower.order(level) == 0; }
  std::uint64_t order(const FieldTower& tower) const;
  MultCharacter conj(const FieldTower& tower) const;
  MultCharacter operator*(const MultCharacter& o) const { return {level, exponent + o.exponent}; }
  /// chi composed with the norm down from `to_level`.
  MultCharacter lift(const FieldTower& tower, std::uint32_t to_level) const;
  /// Exponent k with chi(g^log) = zeta_{q^m-1}^k.
  std::uint64_t value_log_at_log(const FieldTower& tower, std::uint64_t log) const;
  CycNum value(const FieldTower& tower, Code x) const;
};

/// psi(x) = zeta_p^{Tr_{F_{q^m}/F_p}(x)} as a root sum of conductor p.
RootSum psi_roots(const FieldTower& tower, std::uint32_t m, Code x);
CycNum psi_eval(const FieldTower& tower, std::uint32_t m, Code x);

/// sum over x in F_{q^m}^x of chi(x) psi(x); conductor lcm(p, ord chi).
RootSum gauss_sum_roots(const FieldTower& tower, const MultCharacter& chi);
CycNum gauss_sum(const FieldTower& tower, const MultCharacter& chi);

/// (-1)^r sum over x_1...x_r = t in F_q^x of psi(x_1 + ... + x_r).
RootSum kloosterman_roots(const FieldTower& tower, Code t, unsigned r);
CycNum kloosterman(const FieldTower& tower, Code t, unsigned r);

}  // namespace gammatrace
