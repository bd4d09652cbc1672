#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gammatrace/permutation.hpp"

namespace gammatrace {

using Weight = std::vector<std::int64_t>;

/// Weights of a representation of GL(n_1) x ... x GL(n_k), expanded into r
/// slots. Slots carrying the same weight form a contiguous block; blocks are
/// ordered by first appearance in the input.
struct WeightSystem {
  std::string name;
  std::vector<std::uint32_t> shape;
  std::uint32_t d = 0;
  std::vector<Weight> slots;
  std::vector<Weight> distinct;
  std::vector<std::uint32_t> multiplicity;
  std::vector<std::uint32_t> block_start;
  std::vector<std::uint32_t> block_of_slot;
  std::vector<std::uint32_t> factor_of_coord;
  std::vector<std::uint32_t> factor_start;
  std::uint32_t rank = 0;

  std::uint32_t r() const { return static_cast<std::uint32_t>(slots.size()); }
  /// Coordinate permutations preserving every factor, lexicographic order.
  std::vector<Permutation> weyl_group() const;
  /// Weyl elements moving only coordinates of factor j.
  std::vector<Permutation> factor_weyl_group(std::uint32_t j) const;
  /// Permutations of slots that stay inside every block.
  std::vector<Permutation> slot_stabilizer() const;
  bool multiplicity_free() const;
};

/// (w . lambda)[w(j)] = lambda[j].
Weight act(const Permutation& w, const Weight& lambda);

/// Validates sigma-positivity, W-stability and surjectivity of the monomial map.
WeightSystem validate_weight_system(const std::vector<std::uint32_t>& shape, const std::vector<Weight>& weights,
                                    const std::string& name = "explicit");

/// "std", "sym2", "std*det^k" (also "std*det", "std_tensor_det_k").
WeightSystem named_weight_system(const std::vector<std::uint32_t>& shape, const std::string& name);

/// Rank of an integer matrix over Q.
std::uint32_t integer_rank(const std::vector<Weight>& rows, std::uint32_t cols);

struct WeylLift {
  Permutation xi;
  int sign_r = 1;
  int sign_w = 1;
  int epsilon = 1;
};

/// Canonical slot permutation over w: block of lambda goes to block of w.lambda,
/// order-preserving; epsilon = sign(xi) sign(w).
WeylLift weyl_lift(const WeightSystem& ws, const Permutation& w);
/// True when lambda_{xi(i)} = w . lambda_i for all slots.
bool is_lift(const WeightSystem& ws, const Permutation& w, const Permutation& xi);

}  // namespace gammatrace
