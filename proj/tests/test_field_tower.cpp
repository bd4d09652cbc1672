#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "gammatrace/error.hpp"
#include "gammatrace/field_tower.hpp"

using namespace gammatrace;

namespace {

// Schoolbook polynomial arithmetic over F_p, independent of the tower tables.
using P = std::vector<std::uint32_t>;  // low degree first

P decode(Code c, std::uint32_t p, std::uint32_t n) {
  P out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    out[i] = c % p;
    c /= p;
  }
  return out;
}

Code encode(const P& a, std::uint32_t p) {
  Code c = 0, w = 1;
  for (std::uint32_t d : a) {
    c += d * w;
    w *= p;
  }
  return c;
}

// a * b mod (x^n + sum low[i] x^i)
P mulmod(const P& a, const P& b, const P& low, std::uint32_t p) {
  const std::size_t n = low.size();
  std::vector<std::uint64_t> prod(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  for (std::size_t k = 2 * n - 1; k >= n; --k) {
    std::uint64_t c = prod[k];
    prod[k] = 0;
    for (std::size_t i = 0; i < n; ++i) prod[k - n + i] = (prod[k - n + i] + (p - c) * low[i]) % p;
  }
  P out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return out;
}

// Full polynomial (monic included) divisibility by every monic of degree <= n/2.
bool irreducible_by_trial_division(const P& low, std::uint32_t p) {
  const std::size_t n = low.size();
  P full = low;
  full.push_back(1);
  for (std::size_t d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      P div(d + 1);
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < d; ++i) {
        div[i] = t % p;
        t /= p;
      }
      div[d] = 1;
      P rem = full;
      for (std::size_t k = rem.size(); k-- > d;) {
        std::uint32_t c = rem[k];
        if (c == 0) continue;
        for (std::size_t i = 0; i <= d; ++i) rem[k - d + i] = (rem[k - d + i] + (p - c) * div[i]) % p;
      }
      bool zero = true;
      for (std::size_t i = 0; i < d; ++i) zero = zero && rem[i] == 0;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace

TEST(FieldTower, F4DefiningRelationIsOnlyIrreducibleQuadratic) {
  FieldTower t(2, 2, 1);
  // Enumerate all monic quadratics over F_2 and keep those without roots.
  std::vector<P> irreducible;
  for (std::uint32_t c0 = 0; c0 < 2; ++c0)
    for (std::uint32_t c1 = 0; c1 < 2; ++c1) {
      bool root = false;
      for (std::uint32_t x = 0; x < 2; ++x) root = root || ((x * x + c1 * x + c0) % 2 == 0);
      if (!root) irreducible.push_back({c0, c1});
    }
  ASSERT_EQ(irreducible.size(), 1u);
  EXPECT_EQ(t.defining_poly(1), irreducible[0]);
  // omega^2 = omega + 1 with omega = x (code 2).
  EXPECT_EQ(t.mul(1, 2, 2), t.add(1, 2, 1));
}

TEST(FieldTower, PrimeFieldF3GeneratorIsTwo) {
  FieldTower t(3, 1, 1);
  EXPECT_EQ(t.generator(1), 2u);
  EXPECT_EQ(t.dlog(1, 2), 1u);
  EXPECT_EQ(t.dlog(1, 1), 0u);
}

TEST(FieldTower, F9GeneratorCompatibleWithF3) {
  FieldTower t(3, 1, 2);
  const Code g9 = t.generator(2);
  Code power = 1;
  for (int i = 0; i < 4; ++i) power = t.mul(2, power, g9);
  EXPECT_EQ(power, t.embed(1, 2, t.generator(1)));
  EXPECT_EQ(t.descend(2, 1, power), 2u);
}

TEST(FieldTower, TraceNormFrobeniusExamples) {
  FieldTower f4(2, 2, 1);
  // Tr_{F_4/F_2}(omega) = omega + omega^2 = 1.
  EXPECT_EQ(f4.trace_to_fp(1, 2), 1u);

  FieldTower t(3, 1, 2);
  for (Code x = 0; x < 9; ++x) EXPECT_EQ(t.frobenius(2, x), t.pow(2, x, 3));
  const Code g9 = t.generator(2);
  EXPECT_EQ(t.norm_to_fq(2, g9), t.generator(1));
  EXPECT_EQ(t.norm_to_fq(2, g9), t.descend(2, 1, t.mul(2, g9, t.frobenius(2, g9))));
}

TEST(FieldTower, GeneratorAndIdentityLogs) {
  for (auto [p, f, m] : std::vector<std::tuple<int, int, int>>{{2, 1, 6}, {3, 1, 4}, {2, 2, 3}, {5, 1, 3}, {3, 2, 3}, {7, 1, 2}}) {
    FieldTower t(p, f, m);
    for (std::uint32_t l = 1; l <= t.max_level(); ++l) {
      EXPECT_EQ(t.dlog(l, t.generator(l)), 1 % t.order(l));
      EXPECT_EQ(t.dlog(l, 1), 0u);
    }
  }
}

class TowerProperties : public ::testing::TestWithParam<std::tuple<int, int, int>> {};

TEST_P(TowerProperties, DefiningPolynomialsIrreducible) {
  auto [p, f, m] = GetParam();
  FieldTower t(p, f, m);
  for (std::uint32_t l = 1; l <= t.max_level(); ++l) {
    const auto& poly = t.defining_poly(l);
    ASSERT_EQ(poly.size(), static_cast<std::size_t>(f) * l);
    EXPECT_TRUE(irreducible_by_trial_division(poly, p)) << "level " << l;
  }
}

TEST_P(TowerProperties, MultiplicationMatchesSchoolbook) {
  auto [p, f, m] = GetParam();
  FieldTower t(p, f, m);
  std::mt19937_64 rng(17);
  for (std::uint32_t l = 1; l <= t.max_level(); ++l) {
    const std::uint32_t n = t.degree_over_fp(l);
    const std::uint64_t size = t.size(l);
    for (int trial = 0; trial < 400; ++trial) {
      Code a = static_cast<Code>(rng() % size), b = static_cast<Code>(rng() % size);
      P prod = mulmod(decode(a, p, n), decode(b, p, n), t.defining_poly(l), p);
      ASSERT_EQ(t.mul(l, a, b), encode(prod, p));
      P sum(n);
      P da = decode(a, p, n), db = decode(b, p, n);
      for (std::uint32_t i = 0; i < n; ++i) sum[i] = (da[i] + db[i]) % p;
      ASSERT_EQ(t.add(l, a, b), encode(sum, p));
    }
  }
}

TEST_P(TowerProperties, EmbeddingsAreRingMapsAndCommute) {
  auto [p, f, m] = GetParam();
  FieldTower t(p, f, m);
  std::mt19937_64 rng(5);
  for (std::uint32_t a = 1; a <= t.max_level(); ++a) {
    for (std::uint32_t b = a; b <= t.max_level(); b += a) {
      for (int trial = 0; trial < 300; ++trial) {
        Code x = static_cast<Code>(rng() % t.size(a)), y = static_cast<Code>(rng() % t.size(a));
        ASSERT_EQ(t.embed(a, b, t.add(a, x, y)), t.add(b, t.embed(a, b, x), t.embed(a, b, y)));
        ASSERT_EQ(t.embed(a, b, t.mul(a, x, y)), t.mul(b, t.embed(a, b, x), t.embed(a, b, y)));
        // embed_{a->b} o embed_{1->a} = embed_{1->b}
        Code z = static_cast<Code>(rng() % t.q());
        ASSERT_EQ(t.embed(a, b, t.embed(1, a, z)), t.embed(1, b, z));
      }
      // Generator of level b raised to (Q_b - 1)/(Q_a - 1) is the generator of level a.
      ASSERT_EQ(t.pow(b, t.generator(b), static_cast<std::int64_t>(t.log_scale(a, b))), t.embed(a, b, t.generator(a)));
    }
  }
}

TEST_P(TowerProperties, TraceIsAdditiveAndMatchesConjugateSum) {
  auto [p, f, m] = GetParam();
  FieldTower t(p, f, m);
  std::mt19937_64 rng(9);
  for (std::uint32_t l = 1; l <= t.max_level(); ++l) {
    for (int trial = 0; trial < 200; ++trial) {
      Code x = static_cast<Code>(rng() % t.size(l)), y = static_cast<Code>(rng() % t.size(l));
      ASSERT_EQ(t.trace_to_fp(l, t.add(l, x, y)), (t.trace_to_fp(l, x) + t.trace_to_fp(l, y)) % p);
      // Sum of the p-power conjugates, computed with pow.
      Code acc = 0, cur = x;
      for (std::uint32_t i = 0; i < t.degree_over_fp(l); ++i) {
        acc = t.add(l, acc, cur);
        cur = t.pow(l, cur, p);
      }
      ASSERT_EQ(acc, t.trace_to_fp(l, x));
      // Norm to F_q is the product of the q-power conjugates.
      if (x != 0) {
        Code prod = 1;
        cur = x;
        for (std::uint32_t i = 0; i < l; ++i) {
          prod = t.mul(l, prod, cur);
          cur = t.frobenius(l, cur);
        }
        ASSERT_EQ(t.embed(1, l, t.norm_to_fq(l, x)), prod);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Towers, TowerProperties,
                         ::testing::Values(std::make_tuple(2, 1, 6), std::make_tuple(3, 1, 4), std::make_tuple(2, 2, 3),
                                           std::make_tuple(5, 1, 3), std::make_tuple(3, 2, 3), std::make_tuple(7, 1, 3),
                                           std::make_tuple(2, 3, 2)));

TEST(FieldTower, Errors) {
  EXPECT_THROW(
      {
        try {
          FieldTower t(4, 1, 1);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::kNotPrime);
          throw;
        }
      },
      Error);
  try {
    FieldTower t(2, 1, 30);
    FAIL() << "expected CapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapExceeded);
  }
  try {
    FieldTower t(3, 1, 3, 20);
    FAIL() << "expected CapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapExceeded);
  }
  FieldTower t(3, 1, 2);
  try {
    t.frobenius(3, 1);
    FAIL() << "expected LevelMissing";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kLevelMissing);
  }
}

TEST(FieldTower, DeterministicAcrossBuilds) {
  FieldTower a(3, 2, 2), b(3, 2, 2);
  EXPECT_EQ(a.describe_json(), b.describe_json());
  EXPECT_EQ(a.conductor(), 3u * 80u);
}
