#include <gtest/gtest.h>

#include "gammatrace/characters.hpp"
#include "gammatrace/error.hpp"
#include "gammatrace/oracle.hpp"
#include "gammatrace/suites.hpp"

using namespace gammatrace;

namespace {

Code trace_of(const Matrix& x, const MatOps& ops) { return ops.add(x(0, 0), x(1, 1)); }

bool passes(const SuiteReport& r, const std::string& check) {
  for (const auto& c : r.checks)
    if (c.name == check) return c.pass;
  ADD_FAILURE() << "no check " << check << " in " << r.suite;
  return false;
}

}  // namespace

TEST(Gl2Table, OrthogonalityAndShape) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const FieldTower tw(p, 1, 2);
    const Gl2CharacterTable table(tw);
    EXPECT_TRUE(table.verify().ok()) << p;
    EXPECT_EQ(table.classes().size(), std::size_t(p * p - 1)) << p;
    EXPECT_EQ(table.irreps().size(), table.classes().size()) << p;
    std::uint64_t dim2 = 0;
    for (const auto& r : table.irreps()) dim2 += r.dim * r.dim;
    EXPECT_EQ(dim2, table.group_order());
  }
  const FieldTower tw4(2, 2, 2);
  EXPECT_TRUE(Gl2CharacterTable(tw4).verify().ok());
}

TEST(Gl2Table, TrivialRowAndSteinbergDimension) {
  const FieldTower tw(3, 1, 2);
  const Gl2CharacterTable table(tw);
  for (std::size_t i = 0; i < table.irreps().size(); ++i) {
    const auto& r = table.irreps()[i];
    if (r.family == Gl2Family::kOneDim && r.a == 0)
      for (std::size_t c = 0; c < table.classes().size(); ++c) EXPECT_EQ(table.value(i, c), CycNum(1L));
    if (r.family == Gl2Family::kSteinbergTwist) EXPECT_EQ(r.dim, 3u);
  }
  EXPECT_EQ(table.group_order(), 48u);
}

TEST(Gl2Table, ClassLookup) {
  const FieldTower tw(5, 1, 2);
  const MatOps ops(tw);
  const Gl2CharacterTable table(tw);
  for (std::size_t c = 0; c < table.classes().size(); ++c) {
    const Matrix& rep = table.classes()[c].rep;
    EXPECT_EQ(table.class_of(rep), c);
    EXPECT_EQ(table.class_of(ops.conjugate(Matrix(2, 2, {1, 2, 3, 4}), rep)), c);
    EXPECT_EQ(table.class_of(ops.inverse(rep)), table.inverse_class(c));
  }
}

TEST(Oracle, StdIsPsiOfTraceOnRegularClasses) {
  const FieldTower tw(3, 1, 2);
  const MatOps ops(tw);
  const Gl2CharacterTable table(tw);
  const PhiTable phi(tw, named_weight_system({2}, "std"));
  const Gl2Oracle oracle(table, phi);
  EXPECT_TRUE(oracle.full_rank());
  std::size_t regular = 0;
  for (std::size_t c = 0; c < table.classes().size(); ++c) {
    if (!table.classes()[c].regular()) continue;
    ++regular;
    EXPECT_EQ(oracle.class_value(c), psi_eval(tw, 1, trace_of(table.classes()[c].rep, ops))) << table.classes()[c].label;
  }
  EXPECT_EQ(regular, 6u);  // q^2 - q
}

TEST(Oracle, PrincipalGammaFactorsThroughGaussSums) {
  for (std::uint32_t p : {3u, 5u}) {
    const FieldTower tw(p, 1, 2);
    const Gl2CharacterTable table(tw);
    const Gl2Oracle oracle(table, PhiTable(tw, named_weight_system({2}, "std")));
    std::optional<CycNum> ratio;
    for (std::size_t i = 0; i < table.irreps().size(); ++i) {
      const auto& r = table.irreps()[i];
      if (r.family != Gl2Family::kPrincipal) continue;
      MultCharacter a{1, r.a}, b{1, r.b};
      if (!oracle.chosen().conj_theta) {
        a = a.conj(tw);
        b = b.conj(tw);
      }
      const CycNum here = oracle.gamma(i) / (gauss_sum(tw, a) * gauss_sum(tw, b));
      if (!ratio) ratio = here;
      EXPECT_EQ(here, *ratio) << p << " " << r.label;
    }
    ASSERT_TRUE(ratio.has_value());
    ASSERT_TRUE(ratio->as_rational().has_value());
    EXPECT_EQ(abs(*ratio->as_rational()), mpq_class(p)) << p;
  }
}

TEST(Oracle, UnitsPerFamily) {
  const FieldTower tw(5, 1, 2);
  const Gl2CharacterTable table(tw);
  const Gl2Oracle oracle(table, PhiTable(tw, named_weight_system({2}, "std")));
  ASSERT_TRUE(oracle.unit_principal() && oracle.unit_cuspidal());
  EXPECT_EQ(*oracle.unit_principal(), CycNum(5L));
  EXPECT_EQ(*oracle.unit_cuspidal(), CycNum(-5L));
}

TEST(Oracle, RankDeficiencyIsReported) {
  const FieldTower tw(2, 1, 2);
  const Gl2CharacterTable table(tw);
  const PhiTable phi(tw, named_weight_system({2}, "std"));
  const Gl2Oracle oracle(table, phi);
  EXPECT_FALSE(oracle.full_rank());
  try {
    oracle.require_full_rank();
    ADD_FAILURE() << "expected RankDeficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRankDeficient);
  }
  for (std::size_t c = 0; c < table.classes().size(); ++c)
    if (table.classes()[c].regular()) EXPECT_EQ(oracle.class_value(c), phi.at(table.classes()[c].rep));
  const SuiteReport rep = check_gl2_oracle(tw, named_weight_system({2}, "std"));
  EXPECT_TRUE(rep.pass());
}

TEST(Oracle, RejectsNonGl2) {
  const FieldTower tw(2, 1, 3);
  const FieldTower tw2(2, 1, 2);
  const Gl2CharacterTable table(tw2);
  EXPECT_THROW(Gl2Oracle(table, PhiTable(tw, named_weight_system({3}, "std"))), Error);
}

TEST(Suites, Gl2SweepStdQ3) {
  const FieldTower tw(3, 1, 2);
  const SuiteReport r = vanishing_sweep_gl2(tw, named_weight_system({2}, "std"));
  EXPECT_TRUE(r.pass());
  EXPECT_TRUE(passes(r, "geometric_route_zero"));
  EXPECT_TRUE(passes(r, "oracle_route_zero"));
  EXPECT_TRUE(passes(r, "pointwise_route_agreement"));
  EXPECT_TRUE(passes(r, "untwisted_action_breaks_vanishing"));
  for (const auto& c : r.checks)
    if (c.name == "geometric_route_zero") EXPECT_EQ(c.cases, 48u - 12u);  // every g outside B
}

TEST(Suites, Gl3TopStdQ2) {
  const FieldTower tw(2, 1, 3);
  const SuiteReport r = vanishing_sweep_gl3_top(tw, named_weight_system({3}, "std"), 20, kDefaultSeed);
  EXPECT_TRUE(r.pass());
}

TEST(Suites, PropertyChecksSmallField) {
  const FieldTower tw(3, 1, 3);
  const WeightSystem ws = named_weight_system({2}, "std");
  EXPECT_TRUE(check_gauss_sums(tw, 2, 3).pass());
  EXPECT_TRUE(check_hyper_kloosterman(tw, 4).pass());
  EXPECT_TRUE(check_sign_character(tw, validate_weight_system({2}, {{1, 0}, {0, 1}, {1, 0}, {0, 1}}, "std+std"), 20, 1).pass());
  EXPECT_TRUE(check_kummer(tw, ws).pass());
  EXPECT_TRUE(check_mellin(tw, ws).pass());
  EXPECT_TRUE(check_coset_charpoly(tw, 3, 20, 1).pass());
  EXPECT_TRUE(check_filtered_solver(tw).pass());
  EXPECT_TRUE(check_orbit_census(tw, 2).pass());
  EXPECT_TRUE(check_induction_consistency(tw, ws, 10, 1).pass());
  EXPECT_TRUE(check_phi_properties(tw, ws, 10, 1).pass());
  EXPECT_TRUE(check_restriction(tw, ws).pass());
  EXPECT_TRUE(check_sigma_fibers(tw, ws).pass());
}

TEST(Suites, RestrictionIsVacuousOverF2) {
  const FieldTower tw(2, 1, 2);
  const SuiteReport r = check_restriction(tw, named_weight_system({2}, "std"));
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.checks[0].cases, 0u);
}

TEST(Suites, RequiredTowerLevels) {
  EXPECT_EQ(required_tower_levels(named_weight_system({2}, "std")), 2u);
  EXPECT_EQ(required_tower_levels(named_weight_system({3}, "std")), 3u);
}

TEST(Config, EndToEndGl2Main) {
  const RunConfig cfg = parse_config(R"({"p": 3, "f": 1, "shape": [2], "rep": "std", "suites": ["gl2-main"]})");
  const auto reports = run_suites(cfg);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_TRUE(reports[0].pass());
  EXPECT_EQ(reports[0].params.at("seed"), std::to_string(kDefaultSeed));
}

TEST(Config, Rejections) {
  auto kind_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::kOverflow;
  };
  EXPECT_EQ(kind_of(R"({"p": 3, "shape": [2], "rep": "std", "suites": ["nope"]})"), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind_of("{not json"), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind_of(R"({"p": 3, "shape": [2], "rep": "std", "suites": ["gl3-top"]})"), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind_of(R"({"p": 4, "shape": [2], "rep": "std"})"), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind_of(R"({"p": 3, "shape": [2], "rep": "std", "extra": 1})"), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind_of(R"({"p": 3, "shape": [2], "rep": "nosuch"})"), ErrorKind::kConfigInvalid);
  EXPECT_EQ(kind_of(R"({"p": "three", "shape": [2], "rep": "std"})"), ErrorKind::kConfigInvalid);
}

TEST(Config, DefaultSuitesFollowShape) {
  const RunConfig gl2 = parse_config(R"({"p": 3, "shape": [2], "rep": "std"})");
  EXPECT_EQ(gl2.suites, (std::vector<std::string>{"arith", "torus", "mirabolic", "induction", "gl2-main", "oracle"}));
  const RunConfig gl3 = parse_config(R"({"p": 3, "shape": [3], "rep": "std"})");
  EXPECT_EQ(gl3.suites, (std::vector<std::string>{"arith", "torus", "mirabolic", "induction", "gl3-top"}));
}

TEST(Report, DeterministicAcrossRunsAndJobs) {
  const RunConfig cfg = parse_config(R"({"p": 3, "shape": [2], "rep": "std", "suites": ["torus", "induction", "oracle"]})");
  const auto a = run_suites(cfg, 1);
  const auto b = run_suites(cfg, 3);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(to_csv(a), to_csv(b));
}

TEST(Report, ExactValuesSerialize) {
  SuiteReport r;
  r.suite = "s";
  CheckRecord c;
  c.name = "v, with comma";
  c.pass = true;
  c.value = CycNum::root(3, 1).scaled(mpq_class(1, 2));
  r.add(c);
  const std::string json = to_json({r});
  EXPECT_NE(json.find("\"conductor\": 3"), std::string::npos);
  EXPECT_NE(json.find("\"1/2\""), std::string::npos);
  const std::string csv = to_csv({r});
  EXPECT_NE(csv.find("\"v, with comma\""), std::string::npos);
  EXPECT_FALSE(SuiteReport{}.pass());
}

TEST(Report, SuiteErrorsBecomeFailedChecks) {
  RunConfig cfg = parse_config(R"({"p": 3, "shape": [2], "rep": "std", "suites": ["gl2-main"]})");
  cfg.enumeration_cap = 4;  // too small for the tower
  const SuiteReport r = run_suite("gl2-main", cfg);
  EXPECT_FALSE(r.pass());
  ASSERT_FALSE(r.checks.empty());
  EXPECT_EQ(r.checks.back().name, "error");
}
