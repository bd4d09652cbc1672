#pragma once

#include <cstdint>
#include <vector>

#include "gammatrace/cyclotomic.hpp"

namespace gammatrace {

struct ExactSolution {
  std::uint32_t rank = 0;
  bool consistent = false;
  std::vector<CycNum> x;           // free variables set to zero
  std::vector<std::uint32_t> pivots;  // pivot column of each pivot row
};

/// Gauss-Jordan elimination of A x = b over cyclotomic numbers.
ExactSolution solve_exact(std::vector<std::vector<CycNum>> a, std::vector<CycNum> b);

}  // namespace gammatrace
