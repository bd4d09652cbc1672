#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gammatrace/matrix.hpp"

namespace gammatrace {

/// dim span{e_1, x e_1, x^2 e_1, ...}.
std::uint32_t stratum_index(const MatOps& ops, const Matrix& x);

/// Companion matrix: row 0 is (0, ..., 0, -a_m), rows 1..m-1 carry I_{m-1}
/// in the first m-1 columns and -a_{m-1}, ..., -a_1 in the last column.
Matrix companion(const MatOps& ops, const std::vector<Code>& a);

struct CompanionNormalization {
  Matrix g;               // first column e_1, g^{-1} x g = companion(a)
  std::vector<Code> a;    // a_1..a_m
};
/// Throws NotCyclic unless e_1 is a cyclic vector of x.
CompanionNormalization companion_normalize(const MatOps& ops, const Matrix& x);

/// g in Q_1 with g^{-1} x g = [[C, y], [0, x_E]], C companion of size m.
/// Columns of g: e_1, x e_1, ..., x^{m-1} e_1, then the first standard
/// vectors that keep the columns independent.
Matrix stratum_normalizer(const MatOps& ops, const Matrix& x);

struct StratumData {
  std::uint32_t m = 0;
  Matrix g;           // element of Q_1; normalized = g^{-1} x g
  Matrix normalized;
  std::vector<Code> a;
  Matrix x_e;         // (n-m) x (n-m)
  Matrix v1;          // m x (n-m), only row 0 nonzero
  Matrix v_top;       // m x (n-m), last row zero
};

/// Solves y = v1 + v x_E - x_F v for v1 in Hom(E, F_1), v in Hom(E, F_{m-1}),
/// x_F companion, top filtration step first. Returns {v1, v}.
std::pair<Matrix, Matrix> solve_filtered(const MatOps& ops, const Matrix& x_f, const Matrix& x_e, const Matrix& y);
/// (v1, v) -> v1 + v x_E - x_F v.
Matrix filtered_map(const MatOps& ops, const Matrix& x_f, const Matrix& x_e, const Matrix& v1, const Matrix& v);

/// Coordinates (a, x_E, v_1, v_{m-1}) of a normalized point: x equals
/// [[I, v1], [0, I]] [[I, v], [0, I]] diag(x_F, x_E) [[I, -v], [0, I]].
/// Throws NotNormalized if x is not block upper triangular with companion F-block.
StratumData bernstein_coords(const MatOps& ops, const Matrix& x, std::uint32_t m);
/// Full pipeline: Q_1-normalize, then solve.
StratumData stratum_data(const MatOps& ops, const Matrix& x);
/// Product of the four block matrices.
Matrix reassemble(const MatOps& ops, const StratumData& s);

/// u in U_Q with first row (1, w_1, ..., w_{n-1}).
Matrix mirabolic_unipotent(const std::vector<Code>& w);

struct CosetCharpoly {
  std::vector<Code> b;     // closed formula for c(u_L x_F)
  std::vector<Code> b_direct;
  Poly c_ux;               // c(u x) computed directly
  bool factorization_holds = false;  // c(ux) = c(u_L x_F) c(x_E)
  bool formula_holds = false;        // b = b_direct
  bool last_coefficient_fixed = false;  // b_m = a_m
};
/// x normalized of stratum m, u = mirabolic_unipotent(w). The closed formula
/// uses v_i = -w_i, the entries of u_L read with the opposite sign.
CosetCharpoly coset_charpoly(const MatOps& ops, const Matrix& x, std::uint32_t m, const std::vector<Code>& w);

/// Rank of u -> c(ux) - c(x) on U_Q (linear in u).
std::uint32_t coset_map_rank(const MatOps& ops, const Matrix& x);

struct OrbitCensus {
  std::uint64_t matrices = 0;
  /// stratum -> sizes of the Q_1-orbits in it, descending
  std::map<std::uint32_t, std::vector<std::uint64_t>> orbits;
  std::uint64_t orbit_count() const;
};
/// Brute-force Q_1-conjugation orbits on {x : c(x) = c}.
OrbitCensus orbit_census(const MatOps& ops, std::uint32_t n, const Poly& c);
/// Orbit counts per stratum predicted from the stratification: for each
/// monic divisor a_t of degree m and each GL(n-m)-class of x_E with
/// c(x_E) = c / a_t, the number of centralizer orbits on
/// Hom(E, F) / {x_F v - v x_E}.
std::map<std::uint32_t, std::uint64_t> predicted_orbit_counts(const MatOps& ops, std::uint32_t n, const Poly& c);

struct ParabolicClass {
  std::uint32_t rank = 0;
  Matrix l1, l2;     // x' = diag(l1, l2) x diag(l1, l2)^{-1}
  Matrix normal;     // x'
};
/// Lower-left n2 x n1 block c of x goes to l2 c l1^{-1}, which has ones at
/// (i, n1 - 1 - i) for i < rank and zeros elsewhere.
ParabolicClass parabolic_rank_classify(const MatOps& ops, const Matrix& x, std::uint32_t n1);

}  // namespace gammatrace
