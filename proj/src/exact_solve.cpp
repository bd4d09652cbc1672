#include "gammatrace/exact_solve.hpp"

#include "gammatrace/error.hpp"

namespace gammatrace {

ExactSolution solve_exact(std::vector<std::vector<CycNum>> a, std::vector<CycNum> b) {
  const std::size_t rows = a.size();
  if (b.size() != rows) throw Error(ErrorKind::kInvalidArgument, "right-hand side has the wrong length");
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  for (const auto& r : a)
    if (r.size() != cols) throw Error(ErrorKind::kInvalidArgument, "ragged coefficient matrix");

  ExactSolution out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t piv = row;
    while (piv < rows && a[piv][col].is_zero()) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[row]);
    std::swap(b[piv], b[row]);
    const CycNum inv = a[row][col].inverse();
    for (std::size_t j = col; j < cols; ++j) a[row][j] = a[row][j] * inv;
    b[row] = b[row] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || a[i][col].is_zero()) continue;
      const CycNum f = a[i][col];
      for (std::size_t j = col; j < cols; ++j)
        if (!a[row][j].is_zero()) a[i][j] = a[i][j] - f * a[row][j];
      b[i] = b[i] - f * b[row];
    }
    out.pivots.push_back(static_cast<std::uint32_t>(col));
    ++row;
  }
  out.rank = static_cast<std::uint32_t>(row);
  out.consistent = true;
  for (std::size_t i = row; i < rows; ++i)
    if (!b[i].is_zero()) out.consistent = false;
  out.x.assign(cols, CycNum());
  for (std::size_t i = 0; i < out.pivots.size(); ++i) out.x[out.pivots[i]] = b[i];
  return out;
}

}  // namespace gammatrace
