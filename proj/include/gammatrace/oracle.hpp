#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gammatrace/gamma_induction.hpp"
#include "gammatrace/gl2_table.hpp"

namespace gammatrace {

/// phi(g) = sum over pi of (dim pi / |G|) gamma_pi chi_pi(g) (kDirect) or
/// chi_pi(g^{-1}) (kInverse).
enum class ClassConvention { kDirect, kInverse };

struct OracleAttempt {
  ClassConvention convention = ClassConvention::kDirect;
  bool conj_theta = false;  // Mellin transform taken at the inverse torus character
  bool consistent = false;
  std::uint32_t rank = 0;
  std::uint32_t unknowns = 0;
  std::string describe() const;
};

/// Class function on GL(2, F_q) built from the character table alone:
/// gamma of every principal-series and cuspidal irreducible is a family unit
/// times the Mellin transform at the matching twisted torus; the family units
/// and the gammas of the one-dimensional and Steinberg-twist irreducibles are
/// solved exactly from the values of phi on the regular classes.
class Gl2Oracle {
 public:
  /// Throws SystemInconsistent when no convention admits a solution.
  Gl2Oracle(const Gl2CharacterTable& table, const PhiTable& phi);

  const std::vector<OracleAttempt>& attempts() const { return attempts_; }
  const OracleAttempt& chosen() const { return attempts_[chosen_]; }
  bool full_rank() const { return chosen().rank == chosen().unknowns; }
  /// Throws RankDeficient unless the solve determined every unknown.
  void require_full_rank() const;

  const std::optional<CycNum>& unit_principal() const { return unit_principal_; }
  const std::optional<CycNum>& unit_cuspidal() const { return unit_cuspidal_; }
  /// Mellin transform attached to irreducible i (zero for non-generic ones).
  const CycNum& mellin(std::size_t irrep) const { return mellin_[irrep]; }
  const CycNum& gamma(std::size_t irrep) const { return gamma_[irrep]; }
  const CycNum& class_value(std::size_t cls) const { return values_[cls]; }
  CycNum at(const Matrix& g) const { return values_[table_->class_of(g)]; }
  const Gl2CharacterTable& table() const { return *table_; }

 private:
  const Gl2CharacterTable* table_;
  std::vector<OracleAttempt> attempts_;
  std::size_t chosen_ = 0;
  std::optional<CycNum> unit_principal_, unit_cuspidal_;
  std::vector<CycNum> mellin_, gamma_, values_;
};

}  // namespace gammatrace
