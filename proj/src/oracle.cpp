#include "gammatrace/oracle.hpp"

#include "gammatrace/error.hpp"
#include "gammatrace/exact_solve.hpp"
#include "gammatrace/torus_sums.hpp"

namespace gammatrace {

std::string OracleAttempt::describe() const {
  std::string s = convention == ClassConvention::kDirect ? "chi(g)" : "chi(g^-1)";
  s += conj_theta ? ", inverse torus character" : ", torus character";
  s += consistent ? ", consistent" : ", inconsistent";
  s += ", rank " + std::to_string(rank) + "/" + std::to_string(unknowns);
  return s;
}

namespace {

std::vector<CycNum> mellin_per_irrep(const Gl2CharacterTable& table, const TwistedTraceTable& split,
                                     const TwistedTraceTable& twisted, TwistMode mode, bool conj_theta) {
  const FieldTower& tw = table.tower();
  const std::uint64_t n1 = tw.order(1), n2 = tw.order(2);
  auto flip = [&](std::uint64_t e, std::uint64_t n) { return conj_theta ? (n - e % n) % n : e; };
  std::vector<CycNum> out(table.irreps().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Gl2Irrep& r = table.irreps()[i];
    if (r.family == Gl2Family::kPrincipal)
      out[i] = mellin_gamma(tw, split, TorusCharacter{{{1, flip(r.a, n1)}, {1, flip(r.b, n1)}}}, mode);
    else if (r.family == Gl2Family::kCuspidal)
      out[i] = mellin_gamma(tw, twisted, TorusCharacter{{{2, flip(r.a, n2)}}}, mode);
  }
  return out;
}

}  // namespace

Gl2Oracle::Gl2Oracle(const Gl2CharacterTable& table, const PhiTable& phi) : table_(&table) {
  if (phi.n() != 2) throw Error(ErrorKind::kInvalidArgument, "oracle is built for GL(2) only");
  if (phi.tower().q() != table.q()) throw Error(ErrorKind::kInvalidArgument, "table and phi use different fields");
  const FieldTower& tw = table.tower();
  const auto& irreps = table.irreps();
  const auto& classes = table.classes();
  const std::uint64_t order = table.group_order();

  const TwistedTraceTable split(tw, phi.weights(), Permutation::identity(2));
  const TwistedTraceTable twisted(tw, phi.weights(), Permutation::transposition(2, 0, 1));
  const std::vector<CycNum> mellin_plain = mellin_per_irrep(table, split, twisted, phi.mode(), false);
  const std::vector<CycNum> mellin_conj = mellin_per_irrep(table, split, twisted, phi.mode(), true);

  bool has_w = false, has_x = false;
  for (const auto& r : irreps) {
    has_w = has_w || r.family == Gl2Family::kPrincipal;
    has_x = has_x || r.family == Gl2Family::kCuspidal;
  }
  // column layout: [u_W] [u_X] then one gamma per non-generic irreducible
  std::vector<std::size_t> nongeneric;
  for (std::size_t i = 0; i < irreps.size(); ++i)
    if (irreps[i].family == Gl2Family::kOneDim || irreps[i].family == Gl2Family::kSteinbergTwist) nongeneric.push_back(i);
  const std::size_t col_w = 0, col_x = has_w ? 1 : 0, col_ng = (has_w ? 1 : 0) + (has_x ? 1 : 0);
  const std::size_t unknowns = col_ng + nongeneric.size();

  std::vector<std::size_t> regular;
  std::vector<CycNum> rhs;
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (classes[c].regular()) {
      regular.push_back(c);
      rhs.push_back(phi.at(classes[c].rep).scaled(static_cast<long>(order)));
    }

  std::vector<ExactSolution> solutions;
  for (auto convention : {ClassConvention::kDirect, ClassConvention::kInverse})
    for (bool conj_theta : {false, true}) {
      const auto& mellin = conj_theta ? mellin_conj : mellin_plain;
      std::vector<std::vector<CycNum>> a(regular.size(), std::vector<CycNum>(unknowns));
      for (std::size_t r = 0; r < regular.size(); ++r) {
        const std::size_t c = convention == ClassConvention::kDirect ? regular[r] : table.inverse_class(regular[r]);
        for (std::size_t i = 0; i < irreps.size(); ++i) {
          const CycNum chi = table.value(i, c).scaled(static_cast<long>(irreps[i].dim));
          if (irreps[i].family == Gl2Family::kPrincipal) a[r][col_w] += mellin[i] * chi;
          if (irreps[i].family == Gl2Family::kCuspidal) a[r][col_x] += mellin[i] * chi;
        }
        for (std::size_t k = 0; k < nongeneric.size(); ++k)
          a[r][col_ng + k] = table.value(nongeneric[k], c).scaled(static_cast<long>(irreps[nongeneric[k]].dim));
      }
      ExactSolution sol = solve_exact(std::move(a), rhs);
      attempts_.push_back({convention, conj_theta, sol.consistent, sol.rank, static_cast<std::uint32_t>(unknowns)});
      solutions.push_back(std::move(sol));
    }

  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < attempts_.size() && !pick; ++i)
    if (attempts_[i].consistent && attempts_[i].rank == attempts_[i].unknowns) pick = i;
  for (std::size_t i = 0; i < attempts_.size() && !pick; ++i)
    if (attempts_[i].consistent) pick = i;
  if (!pick) {
    std::string msg = "no class-function convention fits the regular classes:";
    for (const auto& at : attempts_) msg += " [" + at.describe() + "]";
    throw Error(ErrorKind::kSystemInconsistent, msg);
  }
  chosen_ = *pick;
  const OracleAttempt& ch = attempts_[chosen_];
  const ExactSolution& sol = solutions[chosen_];
  mellin_ = ch.conj_theta ? mellin_conj : mellin_plain;
  if (has_w) unit_principal_ = sol.x[col_w];
  if (has_x) unit_cuspidal_ = sol.x[col_x];

  gamma_.assign(irreps.size(), CycNum());
  for (std::size_t i = 0; i < irreps.size(); ++i) {
    if (irreps[i].family == Gl2Family::kPrincipal) gamma_[i] = *unit_principal_ * mellin_[i];
    if (irreps[i].family == Gl2Family::kCuspidal) gamma_[i] = *unit_cuspidal_ * mellin_[i];
  }
  for (std::size_t k = 0; k < nongeneric.size(); ++k) gamma_[nongeneric[k]] = sol.x[col_ng + k];

  values_.assign(classes.size(), CycNum());
  const mpq_class inv_order(1, static_cast<unsigned long>(order));
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const std::size_t cc = ch.convention == ClassConvention::kDirect ? c : table.inverse_class(c);
    CycNum s;
    for (std::size_t i = 0; i < irreps.size(); ++i)
      s += (gamma_[i] * table.value(i, cc)).scaled(static_cast<long>(irreps[i].dim));
    values_[c] = s.scaled(inv_order);
  }
  for (std::size_t r = 0; r < regular.size(); ++r)
    if (values_[regular[r]].scaled(static_cast<long>(order)) != rhs[r])
      throw Error(ErrorKind::kSystemInconsistent, "oracle disagrees with phi on class " + classes[regular[r]].label);
}

void Gl2Oracle::require_full_rank() const {
  if (!full_rank())
    throw Error(ErrorKind::kRankDeficient, "regular classes determine only " + std::to_string(chosen().rank) + " of " +
                                               std::to_string(chosen().unknowns) + " oracle unknowns");
}

}  // namespace gammatrace
