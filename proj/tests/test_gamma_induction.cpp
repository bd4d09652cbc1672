#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gammatrace/error.hpp"
#include "gammatrace/characters.hpp"
#include "gammatrace/gamma_induction.hpp"
#include "gammatrace/mirabolic.hpp"

using namespace gammatrace;

namespace {

Code trace_of(const MatOps& ops, const Matrix& x) {
  Code t = 0;
  for (std::uint32_t i = 0; i < x.rows(); ++i) t = ops.add(t, x(i, i));
  return t;
}

Matrix mat2(Code a, Code b, Code c, Code d) { return Matrix(2, 2, {a, b, c, d}); }

WeightSystem std_plus_std() { return validate_weight_system({2}, {{1, 0}, {0, 1}, {1, 0}, {0, 1}}, "std+std"); }

// sum over h in GL(n) with h^{-1} g h upper triangular, divided by |B|
CycNum induced_trace_by_group(const FieldTower& tw, const WeightSystem& ws, const Matrix& g) {
  MatOps ops(tw);
  const std::uint32_t n = g.rows();
  RootSum total(tw.p());
  std::uint64_t borel = 1;
  for (std::uint32_t i = 0; i < n; ++i) borel *= tw.order(1);
  for (std::uint32_t k = 0; k < n * (n - 1) / 2; ++k) borel *= ops.q();
  for (const auto& h : ops.general_linear_group(n)) {
    Matrix b = ops.mul(ops.inverse(h), ops.mul(g, h));
    bool upper = true;
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = 0; j < i; ++j) upper = upper && b(i, j) == 0;
    if (!upper) continue;
    std::vector<Code> diag(n);
    for (std::uint32_t i = 0; i < n; ++i) diag[i] = b(i, i);
    total += hyper_trace_roots(tw, ws, diag);
  }
  return total.to_cycnum().scaled(mpq_class(1, static_cast<unsigned long>(borel)));
}

CycNum ordering_sum(const FieldTower& tw, const WeightSystem& ws, const Matrix& x) {
  MatOps ops(tw);
  const auto id = Permutation::identity(x.rows());
  TwistedTorus torus(tw, id);
  CycNum total;
  for (const auto& pt : steinberg_fiber(tw, ops.charpoly(x), id)) total += hyper_trace(tw, ws, torus.expand_codes(pt, 1));
  return total;
}

}  // namespace

TEST(Flags, CountsAndAdaptedBases) {
  for (std::uint32_t q : {2u, 3u, 4u}) {
    FieldTower tw(q == 4 ? 2 : q, q == 4 ? 2 : 1, 1);
    MatOps ops(tw);
    EXPECT_EQ(all_flags(ops, 2).size(), q + 1);
    EXPECT_EQ(all_flags(ops, 1).size(), 1u);
  }
  FieldTower tw(2, 1, 1);
  MatOps ops(tw);
  auto flags = all_flags(ops, 3);
  ASSERT_EQ(flags.size(), 21u);
  std::set<std::vector<Matrix>> distinct;
  for (const auto& f : flags) {
    distinct.insert(f.subspaces);
    ASSERT_EQ(f.subspaces.size(), 2u);
    EXPECT_TRUE(ops.invertible(f.basis));
    for (std::uint32_t k = 0; k < 2; ++k) {
      EXPECT_EQ(f.subspaces[k].rows(), k + 1);
      Matrix rows(k + 1, 3);
      for (std::uint32_t j = 0; j <= k; ++j)
        for (std::uint32_t i = 0; i < 3; ++i) rows(j, i) = f.basis(i, j);
      EXPECT_EQ(ops.rref(rows), f.subspaces[k]);
    }
  }
  EXPECT_EQ(distinct.size(), 21u);
  FieldTower t7(7, 1, 1);
  EXPECT_THROW(all_flags(MatOps(t7), 5), Error);
}

TEST(Flags, FixedPointExamples) {
  FieldTower tw(3, 1, 1);
  MatOps ops(tw);
  EXPECT_EQ(flag_fixed_points(ops, Matrix::identity(2)).size(), 4u);
  EXPECT_EQ(flag_fixed_points(ops, mat2(2, 0, 0, 2)).size(), 4u);
  EXPECT_EQ(flag_fixed_points(ops, mat2(1, 0, 0, 2)).size(), 2u);
  EXPECT_EQ(flag_fixed_points(ops, mat2(1, 1, 0, 1)).size(), 1u);
  // t^2 + 1 is irreducible over F_3
  EXPECT_EQ(flag_fixed_points(ops, mat2(0, 2, 1, 0)).size(), 0u);
  EXPECT_EQ(flag_fixed_points(ops, Matrix::identity(3)).size(), 13u * 4u);
}

TEST(InducedTrace, StdExamples) {
  FieldTower tw(5, 1, 2);
  MatOps ops(tw);
  auto ws = named_weight_system({2}, "std");
  for (Code a = 1; a < 5; ++a)
    for (Code b = 1; b < 5; ++b) {
      if (a == b) continue;
      EXPECT_EQ(induced_trace(tw, ws, mat2(a, 0, 0, b)), psi_eval(tw, 1, ops.add(a, b)).scaled(2));
    }
  // t^2 - 2 is irreducible over F_5
  EXPECT_EQ(induced_trace(tw, ws, mat2(0, 2, 1, 0)), CycNum());
}

TEST(InducedTrace, FlagSumMatchesGroupSum) {
  for (auto [p, n] : {std::pair{2u, 2u}, {3u, 2u}, {2u, 3u}}) {
    FieldTower tw(p, 1, 6);
    MatOps ops(tw);
    for (const char* rep : {"std", "sym2"}) {
      auto ws = named_weight_system({n}, rep);
      std::mt19937_64 rng(11);
      for (int k = 0; k < 6; ++k) {
        Matrix g = ops.random_invertible(n, rng);
        EXPECT_EQ(induced_trace(tw, ws, g), induced_trace_by_group(tw, ws, g)) << rep << " " << g.to_string();
      }
    }
  }
}

TEST(InducedTrace, FlagSumMatchesOrderingSumOnRss) {
  for (std::uint32_t q : {3u, 4u, 5u}) {
    FieldTower tw(q == 4 ? 2 : q, q == 4 ? 2 : 1, 2);
    MatOps ops(tw);
    for (const char* rep : {"std", "sym2"}) {
      auto ws = named_weight_system({2}, rep);
      for (const auto& x : ops.general_linear_group(2)) {
        if (!is_rss(ops, x)) continue;
        ASSERT_EQ(induced_trace(tw, ws, x), ordering_sum(tw, ws, x)) << q << " " << rep << " " << x.to_string();
      }
    }
  }
}

TEST(SteinbergFiber, Examples) {
  FieldTower tw(3, 1, 2);
  const auto id = Permutation::identity(2);
  const auto swap = Permutation::transposition(2, 0, 1);
  const Poly split{2, 0, 1};      // (t-1)(t-2) = t^2 + 2
  const Poly irreducible{1, 0, 1};  // t^2 + 1
  const Poly repeated{1, 1, 1};   // (t-1)^2 = t^2 - 2t + 1 = t^2 + t + 1
  EXPECT_EQ(steinberg_fiber(tw, split, id).size(), 2u);
  EXPECT_EQ(steinberg_fiber(tw, split, swap).size(), 0u);
  EXPECT_EQ(steinberg_fiber(tw, irreducible, id).size(), 0u);
  EXPECT_EQ(steinberg_fiber(tw, irreducible, swap).size(), 2u);
  EXPECT_EQ(steinberg_fiber(tw, repeated, id).size(), 1u);
  EXPECT_EQ(steinberg_fiber(tw, repeated, swap).size(), 1u);
  EXPECT_THROW(steinberg_fiber(tw, Poly{1, 1}, id), Error);
  FieldTower shallow(3, 1, 1);
  EXPECT_THROW(steinberg_fiber(shallow, irreducible, swap), Error);
}

TEST(SteinbergFiber, CountsPerCharpolySumToWeylOrder) {
  // sum over w of |fiber_w(c)| = sum over orderings of the stabilizer order
  FieldTower tw(2, 1, 6);
  MatOps ops(tw);
  auto group = Permutation::all(3);
  for (std::uint64_t i = 0; i < 8; ++i) {
    Poly c = ops.monic_poly(3, i);
    if (c[0] == 0) continue;
    std::size_t total = 0;
    for (const auto& w : group) total += steinberg_fiber(tw, c, w).size();
    EXPECT_GE(total, 1u);
    Matrix x = companion(ops, charpoly_a(c));
    if (is_rss(ops, x)) EXPECT_EQ(total, 6u);
  }
}

TEST(Regularity, Examples) {
  FieldTower tw(3, 1, 1);
  MatOps ops(tw);
  EXPECT_FALSE(is_regular(ops, Matrix::identity(2)));
  EXPECT_FALSE(is_rss(ops, Matrix::identity(2)));
  EXPECT_TRUE(is_regular(ops, mat2(1, 1, 0, 1)));
  EXPECT_FALSE(is_rss(ops, mat2(1, 1, 0, 1)));
  EXPECT_TRUE(is_rss(ops, mat2(1, 0, 0, 2)));
  EXPECT_TRUE(is_rss(ops, mat2(0, 2, 1, 0)));
  EXPECT_FALSE(is_regular(ops, Matrix(3, 3, {1, 0, 0, 0, 1, 1, 0, 0, 1})));
  EXPECT_TRUE(is_regular(ops, Matrix(3, 3, {1, 1, 0, 0, 1, 1, 0, 0, 1})));
}

TEST(PhiRegular, StdExamples) {
  FieldTower tw(3, 1, 2);
  MatOps ops(tw);
  auto ws = named_weight_system({2}, "std");
  EXPECT_EQ(phi_regular(tw, ws, mat2(1, 0, 0, 2)), psi_eval(tw, 1, 0));
  EXPECT_EQ(phi_regular(tw, ws, mat2(0, 2, 1, 0)), psi_eval(tw, 1, 0));
  EXPECT_EQ(phi_regular(tw, ws, mat2(1, 1, 0, 1)), psi_eval(tw, 1, 2));
  EXPECT_THROW(phi_regular(tw, ws, Matrix::identity(2)), Error);
  try {
    phi_regular(tw, ws, mat2(2, 0, 0, 2));
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotComputableLocus);
  }
}

TEST(PhiRegular, StdIsPsiOfTraceExhaustiveGL2) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u}) {
    FieldTower tw(q == 4 ? 2 : q, q == 4 ? 2 : 1, 2);
    MatOps ops(tw);
    auto ws = named_weight_system({2}, "std");
    PhiTable phi(tw, ws);
    for (const auto& x : ops.general_linear_group(2)) {
      if (!is_regular(ops, x)) continue;
      ASSERT_EQ(phi.at(x), psi_eval(tw, 1, trace_of(ops, x))) << q << " " << x.to_string();
    }
  }
}

// the hypergeometric sum carries (-1)^r, r = 3 slots
TEST(PhiRegular, StdIsMinusPsiOfTraceSampledGL3) {
  for (std::uint32_t p : {2u, 3u}) {
    FieldTower tw(p, 1, 6);
    MatOps ops(tw);
    auto ws = named_weight_system({3}, "std");
    PhiTable phi(tw, ws);
    std::mt19937_64 rng(5);
    int tested = 0;
    while (tested < 60) {
      Matrix x = ops.random_invertible(3, rng);
      if (!is_regular(ops, x)) continue;
      ++tested;
      ASSERT_EQ(phi.at(x), -psi_eval(tw, 1, trace_of(ops, x))) << x.to_string();
    }
  }
}

TEST(PhiRegular, TableMatchesPointwiseRoute) {
  FieldTower tw(3, 1, 2);
  MatOps ops(tw);
  for (const char* rep : {"sym2", "std*det"}) {
    auto ws = named_weight_system({2}, rep);
    PhiTable phi(tw, ws);
    for (const auto& x : ops.general_linear_group(2)) {
      if (!is_regular(ops, x)) continue;
      ASSERT_EQ(phi.at(x), phi_regular(tw, ws, x)) << rep << " " << x.to_string();
    }
  }
  auto ws = std_plus_std();
  PhiTable geometric(tw, ws, TwistMode::kGeometric);
  for (const auto& x : ops.general_linear_group(2))
    if (is_regular(ops, x)) ASSERT_EQ(geometric.at(x), phi_regular(tw, ws, x, TwistMode::kGeometric));
}

TEST(PhiRegular, ConjugationInvariance) {
  FieldTower tw(2, 1, 6);
  MatOps ops(tw);
  auto ws = named_weight_system({3}, "sym2");
  PhiTable phi(tw, ws);
  std::mt19937_64 rng(17);
  int tested = 0;
  while (tested < 100) {
    Matrix x = ops.random_invertible(3, rng);
    if (!is_regular(ops, x)) continue;
    ++tested;
    Matrix y = ops.conjugate(ops.random_invertible(3, rng), x);
    ASSERT_EQ(phi.at(y), phi.at(x));
  }
  // pointwise route on a few GL(3) classes
  for (int k = 0; k < 5; ++k) {
    Matrix x = ops.random_invertible(3, rng);
    if (is_regular(ops, x)) EXPECT_EQ(phi_regular(tw, ws, x), phi.at(x));
  }
}

TEST(CosetVanishing, StdAntidiagonalExample) {
  FieldTower tw(3, 1, 2);
  PhiTable phi(tw, named_weight_system({2}, "std"));
  auto r = coset_vanishing_top(phi, mat2(0, 1, 1, 0));
  EXPECT_EQ(r.coset_sum, CycNum());
  EXPECT_EQ(r.fiber_sum, CycNum());
}

TEST(CosetVanishing, GL2AllTopStratumPoints) {
  for (std::uint32_t p : {3u, 5u}) {
    FieldTower tw(p, 1, 2);
    MatOps ops(tw);
    for (const char* rep : {"std", "sym2", "std*det"}) {
      PhiTable phi(tw, named_weight_system({2}, rep));
      for (const auto& x : ops.general_linear_group(2)) {
        if (x(1, 0) == 0) continue;
        auto r = coset_vanishing_top(phi, x);
        ASSERT_EQ(r.coset_sum, CycNum()) << rep << " " << x.to_string();
        ASSERT_EQ(r.fiber_sum, r.coset_sum);
        ASSERT_EQ(unipotent_coset_sum(phi, x), r.coset_sum);
      }
    }
  }
}

TEST(CosetVanishing, GL3CompanionExamples) {
  {
    FieldTower tw(2, 1, 6);
    MatOps ops(tw);
    PhiTable phi(tw, named_weight_system({3}, "std"));
    // t^3 + t + 1 is irreducible over F_2
    auto r = coset_vanishing_top(phi, companion(ops, {0, 1, 1}));
    EXPECT_EQ(r.coset_sum, CycNum());
    EXPECT_EQ(r.fiber_sum, CycNum());
  }
  {
    FieldTower tw(3, 1, 6);
    MatOps ops(tw);
    PhiTable phi(tw, named_weight_system({3}, "std"));
    // (t - 1)^3 = t^3 - 1 over F_3
    auto r = coset_vanishing_top(phi, companion(ops, {0, 0, 2}));
    EXPECT_EQ(r.coset_sum, CycNum());
    EXPECT_EQ(r.fiber_sum, CycNum());
  }
}

TEST(CosetVanishing, Errors) {
  FieldTower tw(3, 1, 2);
  PhiTable phi(tw, named_weight_system({2}, "std"));
  try {
    coset_vanishing_top(phi, mat2(1, 1, 0, 2));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotTopStratum);
  }
  EXPECT_THROW(PhiTable(tw, named_weight_system({1, 1}, "std")), Error);
}

TEST(CosetVanishing, UntwistedActionBreaksVanishing) {
  FieldTower tw(3, 1, 2);
  MatOps ops(tw);
  auto ws = std_plus_std();
  PhiTable signed_phi(tw, ws), geometric(tw, ws, TwistMode::kGeometric);
  bool broken = false;
  for (const auto& x : ops.general_linear_group(2)) {
    if (x(1, 0) == 0) continue;
    ASSERT_EQ(coset_vanishing_top(signed_phi, x).coset_sum, CycNum());
    broken = broken || !coset_vanishing_top(geometric, x).coset_sum.is_zero();
  }
  EXPECT_TRUE(broken);
}

TEST(Restriction, StdTorusLevi) {
  FieldTower tw(5, 1, 2);
  MatOps ops(tw);
  auto ws = named_weight_system({2}, "std");
  PhiTable phi(tw, ws);
  for (Code a = 1; a < 5; ++a)
    for (Code b = 1; b < 5; ++b) {
      if (a == b) continue;
      EXPECT_EQ(unipotent_coset_sum(phi, mat2(a, 0, 0, b)), hyper_trace(tw, ws, {a, b}).scaled(5));
    }
}
