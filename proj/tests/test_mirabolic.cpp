#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gammatrace/error.hpp"
#include "gammatrace/mirabolic.hpp"
#include "gammatrace/permutation.hpp"

using namespace gammatrace;

namespace {

// det(tI - a) by the Leibniz expansion with polynomial entries.
Poly leibniz_charpoly(const MatOps& ops, const Matrix& a) {
  const std::uint32_t n = a.rows();
  Poly total(n + 1, 0);
  for (const auto& s : Permutation::all(n)) {
    Poly term{s.sign() < 0 ? ops.neg(1) : Code(1)};
    for (std::uint32_t i = 0; i < n; ++i) {
      Poly entry{ops.neg(a(i, s(i)))};
      if (s(i) == i) entry.push_back(1);
      term = ops.poly_mul(term, entry);
    }
    for (std::size_t k = 0; k < term.size(); ++k) total[k] = ops.add(total[k], term[k]);
  }
  return total;
}

std::vector<Code> row_vector(const MatOps& ops, std::uint32_t len, std::uint64_t index) {
  Matrix m = ops.from_index(1, len, index);
  return m.entries();
}

std::uint64_t power(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST(Matrix, CharpolyMatchesLeibniz) {
  std::mt19937_64 rng(7);
  for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    FieldTower tw(p, f, 1);
    MatOps ops(tw);
    for (std::uint32_t n = 1; n <= 4; ++n)
      for (int k = 0; k < 60; ++k) {
        Matrix a = ops.random(n, n, rng);
        ASSERT_EQ(ops.charpoly(a), leibniz_charpoly(ops, a)) << a.to_string();
      }
  }
}

TEST(Matrix, InverseDetRank) {
  std::mt19937_64 rng(11);
  FieldTower tw(5, 1, 1);
  MatOps ops(tw);
  for (int k = 0; k < 100; ++k) {
    Matrix a = ops.random_invertible(3, rng);
    Matrix b = ops.random(3, 3, rng);
    EXPECT_EQ(ops.mul(a, ops.inverse(a)), Matrix::identity(3));
    EXPECT_EQ(ops.det(ops.mul(a, b)), ops.mul(ops.det(a), ops.det(b)));
    EXPECT_EQ(ops.rank(b) == 3, ops.det(b) != 0);
    Matrix ker = ops.kernel(b);
    EXPECT_EQ(ker.cols(), 3 - ops.rank(b));
    for (std::uint32_t c = 0; c < ker.cols(); ++c) EXPECT_EQ(ops.mul(b, ker.block(0, c, 3, 1)), Matrix(3, 1));
  }
  EXPECT_THROW(ops.inverse(Matrix(2, 2)), Error);
  EXPECT_EQ(ops.general_linear_group(2).size(), 480u);
}

TEST(Stratum, Examples) {
  FieldTower tw(3, 1, 1);
  MatOps ops(tw);
  EXPECT_EQ(stratum_index(ops, Matrix::identity(3)), 1u);
  // t^2 - t - 1 = t^2 + 2t + 2 over F_3.
  EXPECT_EQ(stratum_index(ops, companion(ops, {2, 2})), 2u);
  EXPECT_EQ(stratum_index(ops, Matrix(2, 2, {1, 0, 0, 2})), 1u);
}

TEST(Stratum, StableUnderMirabolicTranslationAndConjugation) {
  for (std::uint32_t p : {2u, 3u}) {
    FieldTower tw(p, 1, 1);
    MatOps ops(tw);
    for (std::uint32_t n = 2; n <= 3; ++n) {
      const auto gl = ops.general_linear_group(n);
      const std::uint64_t nu = power(p, n - 1);
      std::mt19937_64 rng(n * 100 + p);
      for (const auto& x : gl) {
        const std::uint32_t m = stratum_index(ops, x);
        for (std::uint64_t iu = 0; iu < nu; ++iu)
          ASSERT_EQ(stratum_index(ops, ops.mul(mirabolic_unipotent(row_vector(ops, n - 1, iu)), x)), m);
        Matrix g = ops.random_invertible(n, rng);
        for (std::uint32_t i = 1; i < n; ++i) g(i, 0) = 0;
        if (ops.invertible(g)) ASSERT_EQ(stratum_index(ops, ops.conjugate(g, x)), m);
        ASSERT_EQ(ops.charpoly(ops.conjugate(ops.random_invertible(n, rng), x)), ops.charpoly(x));
      }
    }
  }
}

TEST(Companion, Examples) {
  FieldTower f5(5, 1, 1);
  MatOps ops(f5);
  Matrix x(2, 2, {1, 1, 1, 2});
  auto cn = companion_normalize(ops, x);
  EXPECT_EQ(cn.g, Matrix(2, 2, {1, 1, 0, 1}));
  // c(x) = t^2 - 3t + 1
  EXPECT_EQ(cn.a, (std::vector<Code>{2, 1}));
  EXPECT_EQ(ops.mul(ops.inverse(cn.g), ops.mul(x, cn.g)), companion(ops, cn.a));
  Matrix c = companion(ops, {3, 4, 1});
  EXPECT_EQ(companion_normalize(ops, c).g, Matrix::identity(3));
  EXPECT_THROW(companion_normalize(ops, Matrix::identity(2)), Error);
}

TEST(Companion, UniqueAndRoundTrip) {
  FieldTower tw(3, 1, 1);
  MatOps ops(tw);
  std::mt19937_64 rng(3);
  // The subgroup fixing e_1 in GL(3, F_3).
  std::vector<Matrix> q1;
  for (const auto& g : ops.general_linear_group(3))
    if (g(0, 0) == 1 && g(1, 0) == 0 && g(2, 0) == 0) q1.push_back(g);
  int done = 0;
  while (done < 100) {
    Matrix x = ops.random(3, 3, rng);
    if (stratum_index(ops, x) != 3) continue;
    ++done;
    auto cn = companion_normalize(ops, x);
    Matrix cm = companion(ops, cn.a);
    EXPECT_EQ(ops.mul(cn.g, ops.mul(cm, ops.inverse(cn.g))), x);
    if (done <= 10) {
      int solutions = 0;
      for (const auto& h : q1)
        if (ops.mul(ops.inverse(h), ops.mul(x, h)) == cm) {
          ++solutions;
          EXPECT_EQ(h, cn.g);
        }
      EXPECT_EQ(solutions, 1);
    }
  }
}

TEST(Bernstein, Degenerate) {
  FieldTower tw(3, 1, 1);
  MatOps ops(tw);
  Matrix x(3, 3);
  x.set_block(0, 0, companion(ops, {1, 2}));
  x(2, 2) = 2;
  auto s = bernstein_coords(ops, x, 2);
  EXPECT_EQ(s.v1, Matrix(2, 1));
  EXPECT_EQ(s.v_top, Matrix(2, 1));
  auto top = bernstein_coords(ops, companion(ops, {1, 1, 2}), 3);
  EXPECT_EQ(top.x_e.rows(), 0u);
  EXPECT_EQ(top.a, (std::vector<Code>{1, 1, 2}));
  EXPECT_THROW(bernstein_coords(ops, Matrix::identity(3), 2), Error);
}

TEST(Bernstein, FilteredMapBijectiveGL3) {
  for (std::uint32_t p : {2u, 3u}) {
    FieldTower tw(p, 1, 1);
    MatOps ops(tw);
    int shared = 0;
    for (Code a1 = 0; a1 < p; ++a1)
      for (Code a2 = 1; a2 < p; ++a2)
        for (Code e = 1; e < p; ++e) {
          Matrix xf = companion(ops, {a1, a2});
          Matrix xe(1, 1, {e});
          // e is an eigenvalue of x_F iff it is a root of t^2 + a1 t + a2.
          if (ops.add(ops.add(ops.mul(e, e), ops.mul(a1, e)), a2) == 0) ++shared;
          std::set<std::vector<Code>> images;
          for (Code v1 = 0; v1 < p; ++v1)
            for (Code v = 0; v < p; ++v) {
              Matrix mv1(2, 1, {v1, 0}), mv(2, 1, {v, 0});
              Matrix y = filtered_map(ops, xf, xe, mv1, mv);
              images.insert(y.entries());
              auto [s1, s] = solve_filtered(ops, xf, xe, y);
              EXPECT_EQ(s1, mv1);
              EXPECT_EQ(s, mv);
            }
          EXPECT_EQ(images.size(), std::size_t(p) * p);
        }
    EXPECT_GT(shared, 0);
  }
}

TEST(Bernstein, ReassemblyExhaustive) {
  for (std::uint32_t p : {2u, 3u}) {
    FieldTower tw(p, 1, 1);
    MatOps ops(tw);
    for (std::uint32_t n = 2; n <= 3; ++n)
      for (const auto& x : ops.general_linear_group(n)) {
        auto s = stratum_data(ops, x);
        ASSERT_EQ(s.g(0, 0), 1u);
        for (std::uint32_t i = 1; i < n; ++i) ASSERT_EQ(s.g(i, 0), 0u);
        ASSERT_EQ(reassemble(ops, s), s.normalized);
        ASSERT_EQ(ops.mul(s.g, ops.mul(s.normalized, ops.inverse(s.g))), x);
        // c(x) = a_t c(x_E)
        ASSERT_EQ(ops.charpoly(x), ops.poly_mul(poly_from_a(s.a), ops.charpoly(s.x_e)));
        for (std::uint32_t j = 0; j < n - s.m; ++j)
          for (std::uint32_t i = 1; i < s.m; ++i) ASSERT_EQ(s.v1(i, j), 0u);
        if (s.m >= 1)
          for (std::uint32_t j = 0; j < n - s.m; ++j) ASSERT_EQ(s.v_top(s.m - 1, j), 0u);
      }
  }
}

TEST(CosetCharpoly, Examples) {
  FieldTower tw(5, 1, 1);
  MatOps ops(tw);
  Matrix x(3, 3);
  x.set_block(0, 0, companion(ops, {2, 3}));
  x(2, 2) = 4;
  x(0, 2) = 1;
  auto id = coset_charpoly(ops, x, 2, {0, 0});
  EXPECT_EQ(id.b, (std::vector<Code>{2, 3}));
  for (Code w1 = 0; w1 < 5; ++w1) {
    auto r = coset_charpoly(ops, x, 2, {w1, 3});
    // b_1 = a_1 + v_1 with v_1 = -w_1, b_2 = a_2
    EXPECT_EQ(r.b[0], ops.sub(2, w1));
    EXPECT_EQ(r.b[1], 3u);
    EXPECT_TRUE(r.formula_holds && r.factorization_holds && r.last_coefficient_fixed);
  }
}

TEST(CosetCharpoly, RandomPointsAllTranslations) {
  std::mt19937_64 rng(5);
  for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
    FieldTower tw(p, f, 1);
    MatOps ops(tw);
    for (std::uint32_t n = 2; n <= 4; ++n)
      for (int k = 0; k < 40; ++k) {
        Matrix x0 = ops.random_invertible(n, rng);
        auto s = stratum_data(ops, x0);
        const std::uint64_t nu = power(tw.q(), n - 1);
        for (std::uint64_t iu = 0; iu < nu; ++iu) {
          auto r = coset_charpoly(ops, s.normalized, s.m, row_vector(ops, n - 1, iu));
          ASSERT_TRUE(r.formula_holds && r.factorization_holds && r.last_coefficient_fixed);
        }
        ASSERT_EQ(coset_map_rank(ops, x0), s.m - 1);
      }
  }
}

TEST(CosetCharpoly, MapIsAffineLinear) {
  FieldTower tw(3, 1, 1);
  MatOps ops(tw);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    Matrix x = ops.random_invertible(3, rng);
    auto base = charpoly_a(ops.charpoly(x));
    auto l = [&](const std::vector<Code>& w) {
      auto c = charpoly_a(ops.charpoly(ops.mul(mirabolic_unipotent(w), x)));
      for (std::size_t j = 0; j < c.size(); ++j) c[j] = ops.sub(c[j], base[j]);
      return c;
    };
    for (std::uint64_t i = 0; i < 9; ++i)
      for (std::uint64_t j = 0; j < 9; ++j) {
        auto wi = row_vector(ops, 2, i), wj = row_vector(ops, 2, j);
        std::vector<Code> ws{ops.add(wi[0], wj[0]), ops.add(wi[1], wj[1])};
        auto li = l(wi), lj = l(wj), lsum = l(ws);
        for (std::size_t c = 0; c < 3; ++c) ASSERT_EQ(lsum[c], ops.add(li[c], lj[c]));
      }
  }
}

TEST(OrbitCensus, SingleOrbitForGL1) {
  FieldTower tw(5, 1, 1);
  MatOps ops(tw);
  for (Code a = 1; a < 5; ++a) {
    auto census = orbit_census(ops, 1, {ops.neg(a), 1});
    EXPECT_EQ(census.orbit_count(), 1u);
    EXPECT_EQ(predicted_orbit_counts(ops, 1, {ops.neg(a), 1}), (std::map<std::uint32_t, std::uint64_t>{{1, 1}}));
  }
}

TEST(OrbitCensus, MatchesStratificationRecursion) {
  auto check = [](std::uint32_t p, std::uint32_t f, std::uint32_t n) {
    FieldTower tw(p, f, 1);
    MatOps ops(tw);
    const std::uint64_t npolys = power(tw.q(), n);
    std::uint64_t seen = 0;
    for (std::uint64_t ic = 0; ic < npolys; ++ic) {
      Poly c = ops.monic_poly(n, ic);
      if (c[0] == 0) continue;
      auto census = orbit_census(ops, n, c);
      auto predicted = predicted_orbit_counts(ops, n, c);
      std::map<std::uint32_t, std::uint64_t> brute;
      std::uint64_t total = 0;
      for (const auto& [m, sizes] : census.orbits) {
        brute[m] = sizes.size();
        for (auto s : sizes) total += s;
      }
      EXPECT_EQ(total, census.matrices);
      EXPECT_EQ(brute, predicted) << "q=" << tw.q() << " n=" << n << " c#" << ic;
      seen += census.matrices;
    }
    EXPECT_EQ(seen, ops.general_linear_group(n).size());
  };
  check(2, 1, 2);
  check(3, 1, 2);
  check(2, 2, 2);
  check(5, 1, 2);
  check(2, 1, 3);
}

TEST(OrbitCensus, RepeatedRootHasBothStrata) {
  FieldTower tw(3, 1, 1);
  MatOps ops(tw);
  // (t - 1)^2 = t^2 + t + 1 over F_3
  auto census = orbit_census(ops, 2, {1, 1, 1});
  EXPECT_EQ(census.orbits.count(1), 1u);
  EXPECT_EQ(census.orbits.count(2), 1u);
}

TEST(Parabolic, RankClassification) {
  FieldTower tw(3, 1, 1);
  MatOps ops(tw);
  Matrix b(3, 3, {1, 2, 0, 0, 1, 1, 0, 0, 2});
  auto in_p = parabolic_rank_classify(ops, b, 2);
  EXPECT_EQ(in_p.rank, 0u);
  EXPECT_EQ(in_p.l1, Matrix::identity(2));
  EXPECT_EQ(in_p.l2, Matrix::identity(1));
  EXPECT_EQ(parabolic_rank_classify(ops, Matrix(2, 2, {1, 1, 2, 0}), 1).rank, 1u);

  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    Matrix x = ops.random_invertible(3, rng);
    for (std::uint32_t n1 : {1u, 2u}) {
      auto cls = parabolic_rank_classify(ops, x, n1);
      EXPECT_EQ(cls.rank, ops.rank(x.block(n1, 0, 3 - n1, n1)));
      auto again = parabolic_rank_classify(ops, cls.normal, n1);
      EXPECT_EQ(again.rank, cls.rank);
      EXPECT_EQ(again.normal.block(n1, 0, 3 - n1, n1), cls.normal.block(n1, 0, 3 - n1, n1));
      if (cls.rank > 0) EXPECT_EQ(cls.normal(n1, n1 - 1), 1u);
    }
  }
}
