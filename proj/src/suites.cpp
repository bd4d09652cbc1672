#include "gammatrace/suites.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "gammatrace/characters.hpp"
#include "gammatrace/error.hpp"
#include "gammatrace/gamma_induction.hpp"
#include "gammatrace/mirabolic.hpp"
#include "gammatrace/oracle.hpp"
#include "gammatrace/torus_sums.hpp"

namespace gammatrace {

namespace {

CheckRecord record(std::string name, bool pass, std::uint64_t cases, std::string detail = {},
                   std::optional<CycNum> value = std::nullopt) {
  CheckRecord r;
  r.name = std::move(name);
  r.pass = pass;
  r.cases = cases;
  r.detail = std::move(detail);
  r.value = std::move(value);
  return r;
}

SuiteReport make_report(const std::string& suite, const FieldTower& tower) {
  SuiteReport r;
  r.suite = suite;
  r.params["p"] = std::to_string(tower.p());
  r.params["f"] = std::to_string(tower.f());
  r.params["q"] = std::to_string(tower.q());
  return r;
}

SuiteReport make_report(const std::string& suite, const FieldTower& tower, const WeightSystem& ws) {
  SuiteReport r = make_report(suite, tower);
  r.params["rep"] = ws.name;
  std::string shape;
  for (auto s : ws.shape) shape += (shape.empty() ? "" : "x") + std::to_string(s);
  r.params["shape"] = shape;
  return r;
}

std::uint64_t power(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<Code> row_vector(const MatOps& ops, std::uint32_t len, std::uint64_t index) {
  return ops.from_index(1, len, index).entries();
}

Code trace_of(const MatOps& ops, const Matrix& x) {
  Code t = 0;
  for (std::uint32_t i = 0; i < x.rows(); ++i) t = ops.add(t, x(i, i));
  return t;
}

Matrix random_q1_element(const MatOps& ops, std::uint32_t n, std::mt19937_64& rng) {
  while (true) {
    Matrix g = ops.random(n, n, rng);
    for (std::uint32_t i = 0; i < n; ++i) g(i, 0) = i == 0 ? 1 : 0;
    if (ops.invertible(g)) return g;
  }
}

void require_gl(const WeightSystem& ws, std::uint32_t n, const char* what) {
  if (ws.shape != std::vector<std::uint32_t>{n})
    throw Error(ErrorKind::kInvalidArgument, std::string(what) + " needs a representation of GL(" + std::to_string(n) + ")");
}

}  // namespace

std::uint32_t required_tower_levels(const WeightSystem& ws) {
  std::uint64_t level = 1;
  for (const auto& w : ws.weyl_group()) level = std::max(level, lcm_u64(w.order(), weyl_lift(ws, w).xi.order()));
  for (const auto& xi : ws.slot_stabilizer()) level = std::max(level, xi.order());
  return static_cast<std::uint32_t>(level);
}

SuiteReport check_gauss_sums(const FieldTower& tower, std::uint32_t norm_levels, std::uint32_t lift_levels) {
  SuiteReport rep = make_report("gauss-sums", tower);
  std::uint64_t cases = 0, bad_norm = 0, bad_abs = 0;
  double worst = 0;
  for (std::uint32_t m = 1; m <= norm_levels; ++m) {
    const std::int64_t qm = static_cast<std::int64_t>(tower.size(m));
    for (std::uint64_t j = 1; j < tower.order(m); ++j) {
      const MultCharacter chi{m, j};
      const RootSum g = gauss_sum_roots(tower, chi);
      const RootSum gbar = gauss_sum_roots(tower, chi.conj(tower));
      const CycNum expect = chi.value(tower, tower.neg(m, 1)) * CycNum(static_cast<long>(qm));
      if ((g * gbar).to_cycnum() != expect) ++bad_norm;
      const double err = std::abs(std::abs(g.to_complex()) - std::sqrt(static_cast<double>(qm)));
      worst = std::max(worst, err);
      if (err > 1e-9) ++bad_abs;
      ++cases;
    }
  }
  rep.add(record("norm_identity", bad_norm == 0, cases, "failures: " + std::to_string(bad_norm)));
  std::ostringstream os;
  os << "max deviation " << worst << ", tolerance 1e-9";
  rep.add(record("magnitude", bad_abs == 0, cases, os.str()));

  std::uint64_t lifts = 0, bad_lift = 0;
  for (std::uint64_t j = 0; j < tower.order(1); ++j) {
    const MultCharacter chi{1, j};
    const RootSum minus_g = gauss_sum_roots(tower, chi).scaled(-1);
    for (std::uint32_t m = 1; m <= lift_levels; ++m) {
      const RootSum lhs = minus_g.pow(m);
      const RootSum rhs = gauss_sum_roots(tower, chi.lift(tower, m)).scaled(-1);
      if (!(lhs - rhs).is_zero()) ++bad_lift;
      ++lifts;
    }
  }
  rep.add(record("hasse_davenport", bad_lift == 0, lifts,
                 "levels 1.." + std::to_string(lift_levels) + ", failures: " + std::to_string(bad_lift)));
  return rep;
}

SuiteReport check_hyper_kloosterman(const FieldTower& tower, std::uint32_t max_r) {
  SuiteReport rep = make_report("hyper-kloosterman", tower);
  for (std::uint32_t r = 1; r <= max_r; ++r) {
    const WeightSystem ws = validate_weight_system({1}, std::vector<Weight>(r, Weight{1}), "gm^" + std::to_string(r));
    std::uint64_t bad = 0;
    for (std::uint64_t k = 0; k < tower.order(1); ++k) {
      const Code t = tower.exp(1, k);
      if (hyper_trace(tower, ws, {t}) != kloosterman(tower, t, r)) ++bad;
    }
    rep.add(record("r=" + std::to_string(r), bad == 0, tower.order(1), "failures: " + std::to_string(bad)));
  }
  return rep;
}

SuiteReport check_sign_character(const FieldTower& tower, const WeightSystem& ws, std::uint32_t points,
                                 std::uint64_t seed) {
  SuiteReport rep = make_report("sign-character", tower, ws);
  const Permutation id = Permutation::identity(ws.d);
  const TwistedTorus torus(tower, id);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx;
  if (torus.size() <= points) {
    for (std::size_t i = 0; i < torus.size(); ++i) idx.push_back(i);
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, torus.size() - 1);
    for (std::uint32_t k = 0; k < points; ++k) idx.push_back(pick(rng));
  }
  const auto stab = ws.slot_stabilizer();
  std::uint64_t cases = 0, bad = 0, odd = 0;
  for (const auto& xi : stab) {
    if (xi.sign() < 0) ++odd;
    const TwistedTraceTable table(tower, ws, id, xi);
    for (auto i : idx) {
      const CycNum h = hyper_trace(tower, ws, torus.expand_codes(torus.point(i), 1));
      if (table.raw(i).to_cycnum() != (xi.sign() < 0 ? -h : h)) ++bad;
      ++cases;
    }
  }
  rep.add(record("twisted_equals_signed_untwisted", bad == 0, cases,
                 "slot stabilizer order " + std::to_string(stab.size()) + " (" + std::to_string(odd) +
                     " odd), points " + std::to_string(idx.size()) + ", failures " + std::to_string(bad)));
  return rep;
}

SuiteReport check_kummer(const FieldTower& tower, const WeightSystem& ws) {
  SuiteReport rep = make_report("kummer", tower, ws);
  const std::uint64_t n1 = tower.order(1);
  const std::uint64_t total = power(n1, ws.d);
  std::uint64_t bad = 0, agree = 0;
  std::string first;
  for (std::uint64_t i = 0; i < total; ++i) {
    std::vector<std::uint64_t> chi(ws.d);
    std::uint64_t r = i;
    for (auto& c : chi) {
      c = r % n1;
      r /= n1;
    }
    try {
      const CycNum c = kummer_convolution_scalar(tower, ws, chi);
      TorusCharacter theta;
      for (auto e : chi) theta.parts.push_back({1, e});
      if (c == mellin_gamma(tower, ws, Permutation::identity(ws.d), theta)) ++agree;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNotConstant) throw;
      if (first.empty()) first = e.what();
      ++bad;
    }
  }
  rep.add(record("ratio_constant", bad == 0, total, bad == 0 ? "" : first));
  rep.add(record("constant_is_mellin", agree == total, total, std::to_string(agree) + " agree"));
  return rep;
}

SuiteReport check_mellin(const FieldTower& tower, const WeightSystem& ws) {
  SuiteReport rep = make_report("mellin", tower, ws);
  const MellinCalibration cal(tower, ws);
  std::uint64_t cases = 0, bad = 0;
  for (const auto& w : ws.weyl_group()) {
    const TwistedTraceTable table(tower, ws, w);
    for (const auto& theta : all_torus_characters(tower, w)) {
      if (mellin_gamma(tower, table, theta) != cal.predicted(w, theta)) ++bad;
      ++cases;
    }
  }
  std::string shape = "unit not of the form +-q^a";
  if (cal.unit_shape())
    shape = "unit " + std::string(cal.unit_shape()->first < 0 ? "-" : "+") + "q^" + std::to_string(cal.unit_shape()->second);
  rep.add(record("unit_shape", cal.unit_shape().has_value(), 1, shape, cal.unit()));
  rep.add(record("factorization", bad == 0, cases, "failures: " + std::to_string(bad)));
  return rep;
}

SuiteReport check_coset_charpoly(const FieldTower& tower, std::uint32_t n, std::uint32_t samples, std::uint64_t seed) {
  SuiteReport rep = make_report("coset-charpoly", tower);
  rep.params["n"] = std::to_string(n);
  MatOps ops(tower);
  std::mt19937_64 rng(seed);
  const std::uint64_t nu = power(tower.q(), n - 1);
  std::uint64_t points = 0, translations = 0, bad_formula = 0, bad_factor = 0, bad_last = 0, bad_rank = 0;
  std::map<std::uint32_t, std::uint64_t> per_stratum;
  for (std::uint32_t k = 0; k < samples; ++k) {
    // alternate between generic points and points built in a chosen stratum
    Matrix x;
    if (k % 2 == 0) {
      x = ops.random_invertible(n, rng);
    } else {
      const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % n);
      std::vector<Code> a(m);
      for (auto& c : a) c = static_cast<Code>(rng() % tower.q());
      while (a[m - 1] == 0) a[m - 1] = static_cast<Code>(rng() % tower.q());
      Matrix normal(n, n);
      normal.set_block(0, 0, companion(ops, a));
      if (m < n) {
        normal.set_block(0, m, ops.random(m, n - m, rng));
        normal.set_block(m, m, ops.random_invertible(n - m, rng));
      }
      const Matrix g = random_q1_element(ops, n, rng);
      x = ops.mul(g, ops.mul(normal, ops.inverse(g)));
    }
    const StratumData s = stratum_data(ops, x);
    ++per_stratum[s.m];
    for (std::uint64_t iu = 0; iu < nu; ++iu) {
      const CosetCharpoly r = coset_charpoly(ops, s.normalized, s.m, row_vector(ops, n - 1, iu));
      if (!r.formula_holds) ++bad_formula;
      if (!r.factorization_holds) ++bad_factor;
      if (!r.last_coefficient_fixed) ++bad_last;
      ++translations;
    }
    if (coset_map_rank(ops, x) != s.m - 1) ++bad_rank;
    ++points;
  }
  std::string strata;
  for (auto [m, c] : per_stratum) strata += (strata.empty() ? "" : " ") + std::string("m=") + std::to_string(m) + ":" + std::to_string(c);
  rep.add(record("closed_formula", bad_formula == 0, translations, "points per stratum " + strata));
  rep.add(record("factorization", bad_factor == 0, translations, "failures: " + std::to_string(bad_factor)));
  rep.add(record("last_coefficient_fixed", bad_last == 0, translations, "failures: " + std::to_string(bad_last)));
  rep.add(record("rank_m_minus_1", bad_rank == 0, points, "failures: " + std::to_string(bad_rank)));
  return rep;
}

SuiteReport check_filtered_solver(const FieldTower& tower) {
  SuiteReport rep = make_report("filtered-solver", tower);
  MatOps ops(tower);
  const Code q = static_cast<Code>(tower.q());
  std::uint64_t pairs = 0, shared = 0, bad_round = 0, bad_bij = 0;
  for (Code a1 = 0; a1 < q; ++a1)
    for (Code a2 = 1; a2 < q; ++a2)
      for (Code e = 1; e < q; ++e) {
        const Matrix xf = companion(ops, {a1, a2});
        const Matrix xe(1, 1, {e});
        const Poly c = ops.charpoly(xf);
        Code val = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) val = ops.add(ops.mul(val, e), *it);
        if (val == 0) ++shared;
        std::set<std::vector<Code>> images;
        for (Code v1 = 0; v1 < q; ++v1)
          for (Code v = 0; v < q; ++v) {
            const Matrix mv1(2, 1, {v1, 0}), mv(2, 1, {v, 0});
            const Matrix y = filtered_map(ops, xf, xe, mv1, mv);
            images.insert(y.entries());
            auto [s1, s] = solve_filtered(ops, xf, xe, y);
            if (!(s1 == mv1 && s == mv)) ++bad_round;
          }
        if (images.size() != std::size_t(q) * q) ++bad_bij;
        ++pairs;
      }
  rep.add(record("round_trip", bad_round == 0, pairs * q * q, "failures: " + std::to_string(bad_round)));
  rep.add(record("bijective", bad_bij == 0 && shared > 0, pairs,
                 "shared-eigenvalue cases " + std::to_string(shared) + ", failures " + std::to_string(bad_bij)));

  std::uint64_t points = 0, bad = 0, stratum2 = 0;
  std::vector<Matrix> sample;
  const bool exhaustive = tower.q() <= 3;
  if (exhaustive) {
    sample = ops.general_linear_group(3);
  } else {
    std::mt19937_64 rng(kDefaultSeed);
    for (int k = 0; k < 2000; ++k) sample.push_back(ops.random_invertible(3, rng));
  }
  for (const auto& x : sample) {
    const StratumData s = stratum_data(ops, x);
    if (s.m == 2) ++stratum2;
    const bool ok = reassemble(ops, s) == s.normalized && ops.mul(s.g, ops.mul(s.normalized, ops.inverse(s.g))) == x &&
                    ops.charpoly(x) == ops.poly_mul(poly_from_a(s.a), ops.charpoly(s.x_e));
    if (!ok) ++bad;
    ++points;
  }
  rep.add(record("reassembly_gl3", bad == 0, points,
                 std::string(exhaustive ? "exhaustive" : "sampled") + ", stratum-2 points " + std::to_string(stratum2) + ", failures " + std::to_string(bad)));
  return rep;
}

SuiteReport check_orbit_census(const FieldTower& tower, std::uint32_t n) {
  SuiteReport rep = make_report("orbit-census", tower);
  rep.params["n"] = std::to_string(n);
  MatOps ops(tower);
  const std::uint64_t npolys = power(tower.q(), n);
  std::uint64_t polys = 0, bad = 0, matrices = 0, orbits = 0;
  std::string first;
  for (std::uint64_t ic = 0; ic < npolys; ++ic) {
    const Poly c = ops.monic_poly(n, ic);
    if (c[0] == 0) continue;
    const OrbitCensus census = orbit_census(ops, n, c);
    const auto predicted = predicted_orbit_counts(ops, n, c);
    std::map<std::uint32_t, std::uint64_t> brute;
    for (const auto& [m, sizes] : census.orbits) brute[m] = sizes.size();
    if (brute != predicted) {
      ++bad;
      if (first.empty()) first = "mismatch at polynomial #" + std::to_string(ic);
    }
    matrices += census.matrices;
    orbits += census.orbit_count();
    ++polys;
  }
  const bool all_matrices = matrices == ops.general_linear_group(n).size();
  rep.add(record("orbit_counts", bad == 0 && all_matrices, polys,
                 std::to_string(orbits) + " orbits over " + std::to_string(matrices) + " matrices" +
                     (first.empty() ? "" : "; " + first)));
  return rep;
}

SuiteReport check_induction_consistency(const FieldTower& tower, const WeightSystem& ws, std::uint32_t samples,
                                        std::uint64_t seed) {
  SuiteReport rep = make_report("induction-consistency", tower, ws);
  if (ws.shape.size() != 1 || ws.d > 3) throw Error(ErrorKind::kInvalidArgument, "induction checks need GL(n), n <= 3");
  MatOps ops(tower);
  const std::uint32_t n = ws.d;
  const Permutation id = Permutation::identity(n);
  const TwistedTorus torus(tower, id);
  auto ordering_sum = [&](const Matrix& x) {
    RootSum s(tower.p());
    for (const auto& pt : steinberg_fiber(tower, ops.charpoly(x), id))
      s += hyper_trace_roots(tower, ws, torus.expand_codes(pt, 1));
    return s.to_cycnum();
  };
  std::uint64_t cases = 0, bad = 0, flags_total = 0;
  auto check = [&](const Matrix& x) {
    flags_total += flag_fixed_points(ops, x).size();
    if (induced_trace(tower, ws, x) != ordering_sum(x)) ++bad;
    ++cases;
  };
  if (n <= 2) {
    for (const auto& x : ops.general_linear_group(n))
      if (is_rss(ops, x)) check(x);
  } else {
    std::mt19937_64 rng(seed);
    while (cases < samples) {
      Matrix x = ops.random_invertible(n, rng);
      if (is_rss(ops, x)) check(x);
    }
  }
  rep.add(record("flag_sum_equals_ordering_sum", bad == 0, cases,
                 std::string(n <= 2 ? "exhaustive" : "sampled") + ", fixed flags seen " + std::to_string(flags_total) +
                     ", failures " + std::to_string(bad)));
  return rep;
}

SuiteReport check_phi_properties(const FieldTower& tower, const WeightSystem& ws, std::uint32_t samples,
                                 std::uint64_t seed) {
  SuiteReport rep = make_report("phi-properties", tower, ws);
  if (ws.shape.size() != 1 || ws.d > 3) throw Error(ErrorKind::kInvalidArgument, "phi checks need GL(n), n <= 3");
  MatOps ops(tower);
  const std::uint32_t n = ws.d;
  const PhiTable phi(tower, ws);
  std::mt19937_64 rng(seed);
  auto regular_points = [&](std::uint32_t count) {
    std::vector<Matrix> pts;
    if (n <= 2 && count == 0) {
      for (const auto& x : ops.general_linear_group(n))
        if (is_regular(ops, x)) pts.push_back(x);
    } else {
      while (pts.size() < count) {
        Matrix x = ops.random_invertible(n, rng);
        if (is_regular(ops, x)) pts.push_back(std::move(x));
      }
    }
    return pts;
  };

  {
    const PhiTable std_phi(tower, named_weight_system({n}, "std"));
    const auto pts = regular_points(n <= 2 ? 0 : samples);
    std::uint64_t bad = 0;
    for (const auto& x : pts) {
      const CycNum expect = psi_eval(tower, 1, trace_of(ops, x));
      if (std_phi.at(x) != (n % 2 == 0 ? expect : -expect)) ++bad;
    }
    rep.add(record("std_is_signed_psi_of_trace", bad == 0, pts.size(),
                   std::string("phi = ") + (n % 2 == 0 ? "" : "-") + "psi(tr x), " +
                       (n <= 2 ? "exhaustive" : "sampled") + ", failures " + std::to_string(bad)));
  }
  {
    std::uint64_t bad = 0;
    const auto pts = regular_points(100);
    for (const auto& x : pts)
      if (phi.at(ops.conjugate(ops.random_invertible(n, rng), x)) != phi.at(x)) ++bad;
    rep.add(record("conjugation_invariance", bad == 0, pts.size(), "failures: " + std::to_string(bad)));
  }
  {
    std::uint64_t bad = 0;
    const auto pts = regular_points(n <= 2 ? 0 : std::min<std::uint32_t>(samples, 40));
    for (const auto& x : pts)
      if (phi_regular(tower, ws, x) != phi.at(x)) ++bad;
    rep.add(record("table_matches_pointwise", bad == 0, pts.size(), "failures: " + std::to_string(bad)));
  }
  {
    bool refused = false;
    try {
      phi.at(Matrix::identity(n));
    } catch (const Error& e) {
      refused = e.kind() == ErrorKind::kNotComputableLocus;
    }
    rep.add(record("refuses_central_points", refused, 1));
  }
  return rep;
}

SuiteReport check_restriction(const FieldTower& tower, const WeightSystem& ws) {
  require_gl(ws, 2, "restriction check");
  SuiteReport rep = make_report("restriction", tower, ws);
  const PhiTable phi(tower, ws);
  std::optional<CycNum> unit;
  std::uint64_t cases = 0, bad = 0;
  for (std::uint64_t a = 0; a < tower.order(1); ++a)
    for (std::uint64_t b = 0; b < tower.order(1); ++b) {
      if (a == b) continue;
      const Code x = tower.exp(1, a), y = tower.exp(1, b);
      const CycNum s = unipotent_coset_sum(phi, Matrix(2, 2, {x, 0, 0, y}));
      const CycNum h = hyper_trace(tower, ws, {x, y});
      if (!unit && !h.is_zero()) unit = s / h;
      if (unit ? s != *unit * h : !s.is_zero()) ++bad;
      ++cases;
    }
  if (cases == 0) {
    // q = 2: the split torus has no points with distinct eigenvalues
    rep.add(record("torus_levi_identity", true, 0, "no split points with distinct eigenvalues"));
    return rep;
  }
  std::string shape = "no calibration point";
  bool shaped = false;
  if (unit) {
    shape = "unit " + unit->to_string();
    if (auto r = unit->as_rational()) {
      mpq_class v = abs(*r);
      int e = 0;
      while (v > 1 && v.get_den() == 1 && v.get_num() % tower.q() == 0) {
        v /= static_cast<unsigned long>(tower.q());
        ++e;
      }
      shaped = v == 1;
      if (shaped) shape += " = " + std::string(sgn(*r) < 0 ? "-" : "+") + "q^" + std::to_string(e);
    }
  }
  if (!unit) {
    // every hyper trace is zero: the identity then says every coset sum is zero
    rep.add(record("unit_calibrated", true, 0, "hyper trace vanishes at all " + std::to_string(cases) +
                                                   " points; unit undetermined"));
    rep.add(record("torus_levi_identity", bad == 0, cases, "coset sums that are nonzero: " + std::to_string(bad)));
    return rep;
  }
  rep.add(record("unit_calibrated", shaped, 1, shape, unit));
  rep.add(record("torus_levi_identity", bad == 0, cases, "failures: " + std::to_string(bad)));
  return rep;
}

SuiteReport check_sigma_fibers(const FieldTower& tower, const WeightSystem& ws) {
  SuiteReport rep = make_report("sigma-fibers", tower, ws);
  for (std::uint32_t j = 0; j < ws.shape.size(); ++j) {
    const auto table = sigma_fiber_table(tower, ws, j);
    std::uint64_t bad = 0;
    std::set<std::uint64_t> dets;
    for (const auto& [key, sum] : table) {
      dets.insert(key[0]);
      if (!sum.is_zero()) ++bad;
    }
    rep.add(record("factor_" + std::to_string(j), bad == 0 && dets.size() == tower.order(1), table.size(),
                   std::to_string(dets.size()) + " det values, nonzero fibers " + std::to_string(bad)));
  }
  return rep;
}

SuiteReport check_gl2_oracle(const FieldTower& tower, const WeightSystem& ws) {
  require_gl(ws, 2, "oracle");
  SuiteReport rep = make_report("gl2-oracle", tower, ws);
  const Gl2CharacterTable table(tower);
  const OrthogonalityReport orth = table.verify();
  rep.add(record("table_orthogonality", orth.ok(), table.classes().size(),
                 std::to_string(table.irreps().size()) + " irreducibles, |G| = " + std::to_string(table.group_order()) +
                     (orth.rows ? "" : ", rows fail") + (orth.columns ? "" : ", columns fail") +
                     (orth.dimensions ? "" : ", dimensions fail") + (orth.class_sizes ? "" : ", class sizes fail")));
  const PhiTable phi(tower, ws);
  try {
    const Gl2Oracle oracle(table, phi);
    std::string attempts;
    for (const auto& a : oracle.attempts()) attempts += (attempts.empty() ? "" : "; ") + a.describe();
    rep.add(record("solve_consistent", true, oracle.attempts().size(), "chosen: " + oracle.chosen().describe() + "; tried: " + attempts));
    if (oracle.unit_principal()) rep.add(record("unit_principal", !oracle.unit_principal()->is_zero(), 1, "", *oracle.unit_principal()));
    if (oracle.unit_cuspidal()) rep.add(record("unit_cuspidal", !oracle.unit_cuspidal()->is_zero(), 1, "", *oracle.unit_cuspidal()));
    std::uint64_t regular = 0, bad = 0;
    for (std::size_t c = 0; c < table.classes().size(); ++c)
      if (table.classes()[c].regular()) {
        ++regular;
        if (oracle.class_value(c) != phi.at(table.classes()[c].rep)) ++bad;
      }
    rep.add(record("agrees_on_regular_classes", bad == 0, regular,
                   std::string(oracle.full_rank() ? "all unknowns determined"
                                                  : "rank deficient: central-class values are not determined") +
                       ", disagreements " + std::to_string(bad)));
  } catch (const Error& e) {
    rep.add(record("solve_consistent", false, 0, e.what()));
  }
  return rep;
}

SuiteReport vanishing_sweep_gl2(const FieldTower& tower, const WeightSystem& ws) {
  require_gl(ws, 2, "GL(2) sweep");
  SuiteReport rep = make_report("gl2-main", tower, ws);
  MatOps ops(tower);
  const PhiTable phi(tower, ws);
  const Gl2CharacterTable table(tower);
  std::optional<Gl2Oracle> oracle;
  try {
    oracle.emplace(table, phi);
    rep.add(record("oracle_solve", true, 1, oracle->chosen().describe()));
  } catch (const Error& e) {
    rep.add(record("oracle_solve", false, 0, e.what()));
  }

  const Code q = static_cast<Code>(tower.q());
  std::uint64_t cosets = 0, bad_geo = 0, bad_oracle = 0, points = 0, disagree = 0;
  std::string geo_diag, oracle_diag, point_diag;
  for (const auto& g : ops.general_linear_group(2)) {
    if (g(1, 0) == 0) continue;
    RootSum geo(tower.p());
    CycNum via_oracle;
    std::string values;
    for (Code v = 0; v < q; ++v) {
      const Matrix ug = ops.mul(Matrix(2, 2, {1, v, 0, 1}), g);
      const RootSum& s = phi.scaled_at(ug);
      geo += s;
      if (oracle) {
        const CycNum o = oracle->at(ug);
        via_oracle += o;
        if (o.scaled(static_cast<long>(phi.weyl_order())) != s.to_cycnum()) {
          ++disagree;
          if (point_diag.empty()) point_diag = "first at " + ug.to_string();
        }
      }
      ++points;
      if (values.size() < 400) values += (values.empty() ? "" : " ") + s.to_cycnum().to_string();
    }
    const CycNum total = geo.to_cycnum();
    if (!total.is_zero()) {
      ++bad_geo;
      if (geo_diag.empty()) geo_diag = "VanishingFailed at " + g.to_string() + ", |W| phi values: " + values;
    }
    if (oracle && !via_oracle.is_zero()) {
      ++bad_oracle;
      if (oracle_diag.empty()) oracle_diag = "VanishingFailed at " + g.to_string() + ": " + via_oracle.to_string();
    }
    ++cosets;
  }
  rep.add(record("geometric_route_zero", bad_geo == 0, cosets,
                 bad_geo == 0 ? "every g outside B" : std::to_string(bad_geo) + " failures; " + geo_diag));
  rep.add(record("oracle_route_zero", oracle && bad_oracle == 0, cosets,
                 !oracle ? "oracle unavailable" : bad_oracle == 0 ? "every g outside B" : oracle_diag));
  rep.add(record("pointwise_route_agreement", oracle && disagree == 0, points,
                 !oracle ? "oracle unavailable" : disagree == 0 ? "" : std::to_string(disagree) + " disagreements, " + point_diag));

  // Control: the untwisted action. For multiplicity-free weights the twist is
  // trivial, so the control runs on std+std, whose Weyl lifts have odd sign.
  auto broken_count = [&](const WeightSystem& w) {
    const PhiTable untwisted(tower, w, TwistMode::kGeometric);
    std::uint64_t broken = 0;
    for (const auto& g : ops.general_linear_group(2))
      if (g(1, 0) != 0 && !unipotent_coset_sum(untwisted, g).is_zero()) ++broken;
    return broken;
  };
  const WeightSystem doubled = validate_weight_system({2}, {{1, 0}, {0, 1}, {1, 0}, {0, 1}}, "std+std");
  const std::uint64_t broken = broken_count(doubled);
  const std::uint64_t broken_own = ws.multiplicity_free() ? 0 : broken_count(ws);
  rep.add(record("untwisted_action_breaks_vanishing", broken > 0, cosets,
                 "std+std: " + std::to_string(broken) + " nonzero cosets; " + ws.name +
                     (ws.multiplicity_free() ? ": twist is trivial (multiplicity-free weights)"
                                             : ": " + std::to_string(broken_own) + " nonzero cosets")));
  const SuiteReport sigma = check_sigma_fibers(tower, ws);
  rep.absorb(sigma, "sigma_fibers");
  return rep;
}

SuiteReport vanishing_sweep_gl3_top(const FieldTower& tower, const WeightSystem& ws, std::uint32_t extras,
                                    std::uint64_t seed) {
  require_gl(ws, 3, "GL(3) top-stratum sweep");
  SuiteReport rep = make_report("gl3-top", tower, ws);
  rep.params["seed"] = std::to_string(seed);
  MatOps ops(tower);
  const PhiTable phi(tower, ws);
  std::vector<Matrix> points;
  for (std::uint64_t ic = 0; ic < power(tower.q(), 3); ++ic) {
    const Poly c = ops.monic_poly(3, ic);
    if (c[0] != 0) points.push_back(companion(ops, charpoly_a(c)));
  }
  const std::size_t companions = points.size();
  std::mt19937_64 rng(seed);
  while (points.size() < companions + extras) {
    Matrix x = ops.random_invertible(3, rng);
    if (stratum_index(ops, x) == 3) points.push_back(std::move(x));
  }
  std::uint64_t bad_zero = 0, bad_agree = 0;
  std::string diag;
  for (const auto& x : points) {
    try {
      const CosetVanishing r = coset_vanishing_top(phi, x);
      if (!r.coset_sum.is_zero()) {
        ++bad_zero;
        if (diag.empty()) diag = "VanishingFailed at " + x.to_string() + ": " + r.coset_sum.to_string();
      }
      if (r.coset_sum != r.fiber_sum) ++bad_agree;
    } catch (const Error& e) {
      ++bad_zero;
      if (diag.empty()) diag = e.what();
    }
  }
  rep.add(record("coset_route_zero", bad_zero == 0, points.size(),
                 std::to_string(companions) + " companion points, " + std::to_string(extras) + " random" +
                     (diag.empty() ? "" : "; " + diag)));
  rep.add(record("det_fiber_route_agrees", bad_agree == 0, points.size(), "failures: " + std::to_string(bad_agree)));
  rep.absorb(check_sigma_fibers(tower, ws), "sigma_fibers");
  return rep;
}

WeightSystem RunConfig::weight_system() const {
  if (!weights.empty()) return validate_weight_system(shape, weights, rep.empty() ? "explicit" : rep);
  return named_weight_system(shape, rep);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"arith", "torus", "mirabolic", "induction", "gl2-main", "gl3-top", "oracle"};
  return names;
}

std::string suite_statement(const std::string& name) {
  static const std::map<std::string, std::string> text{
      {"arith",
       "Gauss sums over the field tower: g(chi) g(chi^-1) = chi(-1) q^m, |g(chi)| = q^{m/2}, and the "
       "Hasse-Davenport lift -g(chi o N) = (-g(chi))^m."},
      {"torus",
       "Torus trace functions: the hypergeometric trace of r equal weights is the Kloosterman sum; on the "
       "slot stabilizer the twisted trace is the sign character times the untwisted one; convolution with "
       "a Kummer character multiplies it by a constant; the Mellin transform on every twisted torus is a "
       "fixed unit times a product of Gauss sums over Frobenius orbits of weights."},
      {"mirabolic",
       "Mirabolic reduction: on U_Q x the characteristic polynomial is affine in u with the closed-form "
       "coefficients and the map has rank m - 1 on stratum m; the filtered solver is a bijection; the "
       "Q_1-orbits per characteristic polynomial are counted by the stratification recursion."},
      {"induction",
       "Induced trace: the flag-variety fixed-point sum equals the eigenvalue-ordering sum on regular "
       "semisimple points; phi is conjugation invariant and equals (-1)^n psi(tr) for the standard "
       "representation; on the torus Levi of GL(2) the unipotent average of phi is a fixed unit times the "
       "hypergeometric trace."},
      {"gl2-main",
       "For every g in GL(2, F_q) outside the Borel subgroup, the sum of phi over the coset U_B g vanishes, "
       "computed from the twisted torus traces and independently from the character table; the untwisted "
       "Weyl action breaks the vanishing."},
      {"gl3-top",
       "For x in GL(3, F_q) with e_1 cyclic, the sum of phi over U_Q x vanishes, both as a coset sum and as "
       "a sum over the fiber of the determinant; fibers of det on every twisted torus sum to zero."},
      {"oracle",
       "The GL(2, F_q) character table satisfies both orthogonality relations, and phi on the regular "
       "classes is the character expansion whose principal-series and cuspidal coefficients are Mellin "
       "transforms times one unit per family."},
  };
  auto it = text.find(name);
  if (it == text.end()) throw Error(ErrorKind::kConfigInvalid, "unknown suite '" + name + "'");
  return it->second;
}

RunConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kConfigInvalid, "config must be a JSON object");
  static const std::set<std::string> known{"p", "f", "shape", "rep", "suites", "caps", "seed", "samples"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw Error(ErrorKind::kConfigInvalid, "unknown config key '" + k + "'");
  RunConfig cfg;
  try {
    if (!j.contains("p") || !j.contains("shape") || !j.contains("rep"))
      throw Error(ErrorKind::kConfigInvalid, "config needs p, shape and rep");
    cfg.p = j.at("p").get<std::uint32_t>();
    cfg.f = j.value("f", 1u);
    cfg.shape = j.at("shape").get<std::vector<std::uint32_t>>();
    if (j.at("rep").is_string()) {
      cfg.rep = j.at("rep").get<std::string>();
    } else {
      cfg.weights = j.at("rep").get<std::vector<Weight>>();
      cfg.rep = "explicit";
    }
    if (j.contains("suites")) cfg.suites = j.at("suites").get<std::vector<std::string>>();
    cfg.seed = j.value("seed", kDefaultSeed);
    cfg.samples = j.value("samples", 200u);
    if (j.contains("caps")) {
      const auto& caps = j.at("caps");
      if (!caps.is_object()) throw Error(ErrorKind::kConfigInvalid, "caps must be an object");
      for (const auto& [k, v] : caps.items())
        if (k != "tower" && k != "enumeration") throw Error(ErrorKind::kConfigInvalid, "unknown cap '" + k + "'");
      cfg.tower_levels = caps.value("tower", 0u);
      cfg.enumeration_cap = caps.value("enumeration", kDefaultElementCap);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfigInvalid, std::string("config field has the wrong type: ") + e.what());
  }
  if (cfg.suites.empty()) {
    // default: every suite the shape supports
    RunConfig base = cfg;
    base.suites = {"arith"};
    validate_config(base);
    for (const auto& name : suite_names()) {
      RunConfig probe = cfg;
      probe.suites = {name};
      try {
        validate_config(probe);
        cfg.suites.push_back(name);
      } catch (const Error&) {
      }
    }
  }
  validate_config(cfg);
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::kConfigInvalid, m); };
  if (cfg.f == 0) fail("f must be positive");
  if (cfg.shape.empty()) fail("shape must be nonempty");
  if (cfg.suites.empty()) fail("no suites requested");
  WeightSystem ws;
  try {
    ws = cfg.weight_system();
    FieldTower probe(cfg.p, cfg.f, 1, cfg.enumeration_cap);
  } catch (const Error& e) {
    fail(e.what());
  }
  for (const auto& s : cfg.suites) {
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) fail("unknown suite '" + s + "'");
    const bool gl2 = ws.shape == std::vector<std::uint32_t>{2};
    const bool gl3 = ws.shape == std::vector<std::uint32_t>{3};
    if ((s == "gl2-main" || s == "oracle") && !gl2) fail("suite '" + s + "' needs shape [2]");
    if (s == "gl3-top" && !gl3) fail("suite 'gl3-top' needs shape [3]");
    if (s == "induction" && (ws.shape.size() != 1 || ws.d > 3)) fail("suite 'induction' needs shape [n], n <= 3");
  }
}

SuiteReport run_suite(const std::string& name, const RunConfig& cfg) {
  SuiteReport rep;
  rep.suite = name;
  rep.params["p"] = std::to_string(cfg.p);
  rep.params["f"] = std::to_string(cfg.f);
  rep.params["rep"] = cfg.rep;
  std::string shape;
  for (auto s : cfg.shape) shape += (shape.empty() ? "" : "x") + std::to_string(s);
  rep.params["shape"] = shape;
  rep.params["seed"] = std::to_string(cfg.seed);
  try {
    const WeightSystem ws = cfg.weight_system();
    const std::uint32_t levels = std::max({required_tower_levels(ws), cfg.tower_levels, 2u});
    const FieldTower tower(cfg.p, cfg.f, levels, cfg.enumeration_cap);
    rep.params["q"] = std::to_string(tower.q());
    if (name == "arith") {
      const FieldTower deep(cfg.p, cfg.f, std::max(levels, 3u), cfg.enumeration_cap);
      rep.absorb(check_gauss_sums(deep, tower.q() <= 9 ? 3 : 2, 3), "gauss_sums");
    } else if (name == "torus") {
      rep.absorb(check_hyper_kloosterman(tower, 4), "hyper_kloosterman");
      rep.absorb(check_sign_character(tower, ws, 20, cfg.seed), "sign_character");
      rep.absorb(check_kummer(tower, ws), "kummer");
      rep.absorb(check_mellin(tower, ws), "mellin");
    } else if (name == "mirabolic") {
      for (std::uint32_t n = 2; n <= 4; ++n)
        rep.absorb(check_coset_charpoly(tower, n, cfg.samples, cfg.seed + n), "coset_charpoly_n" + std::to_string(n));
      rep.absorb(check_filtered_solver(tower), "filtered_solver");
      rep.absorb(check_orbit_census(tower, 2), "orbit_census_n2");
      if (tower.q() == 2) rep.absorb(check_orbit_census(tower, 3), "orbit_census_n3");
    } else if (name == "induction") {
      rep.absorb(check_induction_consistency(tower, ws, cfg.samples, cfg.seed), "consistency");
      rep.absorb(check_phi_properties(tower, ws, cfg.samples, cfg.seed), "phi");
      if (ws.d == 2) rep.absorb(check_restriction(tower, ws), "restriction");
    } else if (name == "gl2-main") {
      rep.absorb(vanishing_sweep_gl2(tower, ws), "sweep");
    } else if (name == "gl3-top") {
      rep.absorb(vanishing_sweep_gl3_top(tower, ws, 100, cfg.seed), "sweep");
    } else if (name == "oracle") {
      rep.absorb(check_gl2_oracle(tower, ws), "oracle");
    } else {
      throw Error(ErrorKind::kConfigInvalid, "unknown suite '" + name + "'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfigInvalid) throw;
    rep.add(record("error", false, 0, e.what()));
  }
  return rep;
}

std::vector<SuiteReport> run_suites(const RunConfig& cfg, unsigned jobs) {
  validate_config(cfg);
  std::vector<SuiteReport> out(cfg.suites.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cfg.suites.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < cfg.suites.size(); ++i) out[i] = run_suite(cfg.suites[i], cfg);
    return out;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  for (unsigned t = 0; t < jobs; ++t)
    workers.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < cfg.suites.size(); i += jobs) out[i] = run_suite(cfg.suites[i], cfg);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& w : workers) w.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace gammatrace
