#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gammatrace/field_tower.hpp"
#include "gammatrace/report.hpp"
#include "gammatrace/weight_system.hpp"

namespace gammatrace {

inline constexpr std::uint64_t kDefaultSeed = 20231117;

/// Largest lcm(ord w, ord xi) over the Weyl group and largest order in the
/// slot stabilizer: the tower depth every twisted torus of ws needs.
std::uint32_t required_tower_levels(const WeightSystem& ws);

// Individual property checks. Each returns a report whose checks all pass
// exactly when the property holds on every examined instance.

/// g(chi) g(chi^-1) = chi(-1) q^m for nontrivial chi at levels m <= norm_levels,
/// |g(chi)| = q^{m/2} in floating point, and -g(chi o N) = (-g(chi))^m for
/// level-1 chi and m <= lift_levels.
SuiteReport check_gauss_sums(const FieldTower& tower, std::uint32_t norm_levels, std::uint32_t lift_levels);
/// hyper_trace of r equal weights on G_m equals the Kloosterman sum, r <= max_r.
SuiteReport check_hyper_kloosterman(const FieldTower& tower, std::uint32_t max_r);
/// Raw twisted trace for xi in the slot stabilizer equals sign(xi) hyper_trace.
SuiteReport check_sign_character(const FieldTower& tower, const WeightSystem& ws, std::uint32_t points,
                                 std::uint64_t seed);
/// (t_Psi * chi) / chi is constant for every character chi of the split torus.
SuiteReport check_kummer(const FieldTower& tower, const WeightSystem& ws);
/// mellin_gamma = unit * epsilon(w) * product of Gauss sums for every (w, theta).
SuiteReport check_mellin(const FieldTower& tower, const WeightSystem& ws);

/// Closed-form coset characteristic polynomial and rank m - 1 of the coset map,
/// exhaustive over u for `samples` random points of GL(n).
SuiteReport check_coset_charpoly(const FieldTower& tower, std::uint32_t n, std::uint32_t samples, std::uint64_t seed);
/// GL(3), stratum 2: filtered solver round trip and bijectivity for every
/// companion x_F and x_E, plus reassembly of every point of GL(3).
SuiteReport check_filtered_solver(const FieldTower& tower);
/// Brute-force Q_1-orbit counts per characteristic polynomial against the
/// stratification recursion.
SuiteReport check_orbit_census(const FieldTower& tower, std::uint32_t n);

/// Flag-sum induced trace against the eigenvalue-ordering sum on rss points:
/// exhaustive for n = 2, `samples` random points for n = 3.
SuiteReport check_induction_consistency(const FieldTower& tower, const WeightSystem& ws, std::uint32_t samples,
                                        std::uint64_t seed);
/// phi of std is (-1)^n psi(tr) on the regular locus, phi is conjugation
/// invariant, and the table route matches the pointwise route.
SuiteReport check_phi_properties(const FieldTower& tower, const WeightSystem& ws, std::uint32_t samples,
                                 std::uint64_t seed);
/// GL(2): sum over U_B of phi(u t) = unit * hyper_trace(t) for distinct eigenvalues.
SuiteReport check_restriction(const FieldTower& tower, const WeightSystem& ws);
/// Fibers of det_j on every twisted torus sum to zero for every factor j.
SuiteReport check_sigma_fibers(const FieldTower& tower, const WeightSystem& ws);

/// Character table orthogonality and the oracle solve against phi.
SuiteReport check_gl2_oracle(const FieldTower& tower, const WeightSystem& ws);
/// Every g in GL(2) - B: sum over U_B of phi(u g) = 0 by the geometric and
/// oracle routes, pointwise agreement, and the untwisted-action control.
SuiteReport vanishing_sweep_gl2(const FieldTower& tower, const WeightSystem& ws);
/// Top stratum of GL(3): coset sums at one companion point per characteristic
/// polynomial plus `extras` random points, and the det-fiber route.
SuiteReport vanishing_sweep_gl3_top(const FieldTower& tower, const WeightSystem& ws, std::uint32_t extras,
                                    std::uint64_t seed);

struct RunConfig {
  std::uint32_t p = 0;
  std::uint32_t f = 1;
  std::vector<std::uint32_t> shape;
  std::string rep;                   // name, or "custom" when weights are given
  std::vector<Weight> weights;       // explicit weights (optional)
  std::vector<std::string> suites;
  std::uint32_t tower_levels = 0;    // 0: as required by the weight system
  std::uint64_t enumeration_cap = kDefaultElementCap;
  std::uint64_t seed = kDefaultSeed;
  std::uint32_t samples = 200;

  WeightSystem weight_system() const;
};

/// Parses and validates a JSON config; throws ConfigInvalid.
RunConfig parse_config(const std::string& json_text);
/// Checks suite names and per-suite shape requirements; throws ConfigInvalid.
void validate_config(const RunConfig& cfg);

const std::vector<std::string>& suite_names();
/// Plain-language statement a suite certifies; throws ConfigInvalid for unknown names.
std::string suite_statement(const std::string& name);

/// Suite errors become failed checks in the report.
SuiteReport run_suite(const std::string& name, const RunConfig& cfg);
/// Runs cfg.suites on up to `jobs` threads; output order follows cfg.suites.
std::vector<SuiteReport> run_suites(const RunConfig& cfg, unsigned jobs = 1);

}  // namespace gammatrace
