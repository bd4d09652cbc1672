#include "gammatrace/torus_sums.hpp"

#include <algorithm>

#include "gammatrace/error.hpp"

namespace gammatrace {

namespace {

using u128 = unsigned __int128;

std::uint64_t mod_neg_sum(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& terms, std::uint64_t n) {
  // -sum a_i b_i mod n
  u128 s = 0;
  for (auto [a, b] : terms) s = (s + static_cast<u128>(a % n) * (b % n)) % n;
  return static_cast<std::uint64_t>((n - static_cast<std::uint64_t>(s)) % n);
}

std::uint64_t table_conductor(const FieldTower& tower, const TwistedTorus& torus) {
  std::uint64_t n = tower.p();
  for (std::size_t c = 0; c < torus.cycles().size(); ++c) n = lcm_u64(n, tower.order(torus.cycle_level(c)));
  return n;
}

void check_theta(const FieldTower& tower, const TwistedTorus& torus, const TorusCharacter& theta) {
  if (theta.parts.size() != torus.cycles().size())
    throw Error(ErrorKind::kInvalidArgument, "character has " + std::to_string(theta.parts.size()) +
                                                 " parts but the torus has " + std::to_string(torus.cycles().size()) +
                                                 " cycles");
  for (std::size_t c = 0; c < theta.parts.size(); ++c) {
    if (theta.parts[c].level != torus.cycle_level(c))
      throw Error(ErrorKind::kInvalidArgument, "character part " + std::to_string(c) + " lives at the wrong level");
    (void)tower.order(theta.parts[c].level);
  }
}

}  // namespace

std::vector<TorusCharacter> all_torus_characters(const FieldTower& tower, const Permutation& w) {
  TwistedTorus torus(tower, w);
  std::vector<TorusCharacter> out;
  for (std::size_t i = 0; i < torus.size(); ++i) {
    auto pt = torus.point(i);
    TorusCharacter th;
    for (std::size_t c = 0; c < pt.cycle_logs.size(); ++c) th.parts.push_back({torus.cycle_level(c), pt.cycle_logs[c]});
    out.push_back(std::move(th));
  }
  return out;
}

std::uint64_t inverse_character_exponent(const FieldTower& tower, const TorusCharacter& theta,
                                         const TwistedTorusPoint& pt, std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> terms;
  for (std::size_t c = 0; c < theta.parts.size(); ++c) {
    const std::uint64_t ord = tower.order(theta.parts[c].level);
    if (n % ord != 0) throw Error(ErrorKind::kInvalidArgument, "conductor does not contain the character values");
    const std::uint64_t e = theta.parts[c].exponent % ord;
    terms.emplace_back(static_cast<std::uint64_t>(static_cast<u128>(e) * pt.cycle_logs[c] % ord), n / ord);
  }
  return mod_neg_sum(terms, n);
}

CycNum mellin_gamma(const FieldTower& tower, const TwistedTraceTable& table, const TorusCharacter& theta,
                    TwistMode mode) {
  const TwistedTorus& torus = table.torus();
  check_theta(tower, torus, theta);
  const std::uint64_t n = table_conductor(tower, torus);
  const std::uint64_t step = n / tower.p();
  RootSum acc(n);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const RootSum tr = table.trace(i, mode);
    const std::uint64_t a = inverse_character_exponent(tower, theta, torus.point(i), n);
    const auto& counts = tr.counts();
    for (std::size_t k = 0; k < counts.size(); ++k)
      if (counts[k] != 0) acc.add(static_cast<std::int64_t>((k * step + a) % n), counts[k]);
  }
  return acc.to_cycnum();
}

CycNum mellin_gamma(const FieldTower& tower, const WeightSystem& ws, const Permutation& w, const TorusCharacter& theta) {
  return mellin_gamma(tower, TwistedTraceTable(tower, ws, w), theta);
}

std::vector<MultCharacter> orbit_characters(const FieldTower& tower, const WeightSystem& ws, const Permutation& w,
                                            const Permutation& xi, const TorusCharacter& theta) {
  if (!is_lift(ws, w, xi)) throw Error(ErrorKind::kInvalidArgument, "slot permutation is not a lift of w");
  TwistedTorus torus(tower, w);
  check_theta(tower, torus, theta);
  const std::uint32_t L = static_cast<std::uint32_t>(lcm_u64(xi.order(), w.order()));
  if (!tower.has_level(L)) throw Error(ErrorKind::kTowerTooShallow, "orbit characters need level " + std::to_string(L));
  const SlotCycles sc = slot_cycles(tower, ws, xi, L);
  const auto& wcycles = torus.cycles();

  std::vector<MultCharacter> out;
  for (std::size_t c = 0; c < sc.cycles.size(); ++c) {
    const std::uint32_t l = static_cast<std::uint32_t>(sc.cycles[c].size());
    // theta^{-1}(p(x)) for y = generator of level l, as an exponent of zeta_D.
    std::uint64_t D = tower.order(l);
    for (std::size_t k = 0; k < wcycles.size(); ++k) D = lcm_u64(D, tower.order(torus.cycle_level(k)));
    TwistedTorusPoint image{w, std::vector<std::uint64_t>(wcycles.size())};
    for (std::size_t k = 0; k < wcycles.size(); ++k) {
      const std::uint64_t scale = tower.log_scale(torus.cycle_level(k), L);
      const std::uint64_t head = sc.coef[c][wcycles[k][0]];
      if (head % scale != 0) throw Error(ErrorKind::kInvalidTwistedPoint, "orbit image left the twisted torus");
      image.cycle_logs[k] = head / scale;
    }
    const std::uint64_t a = inverse_character_exponent(tower, theta, image, D);
    const std::uint64_t ord = tower.order(l);
    // chi(gen) = zeta_D^a must be a (q^l - 1)-th root of unity.
    if (static_cast<u128>(a) * ord % D != 0) throw Error(ErrorKind::kInvalidArgument, "orbit character is not defined on F_{q^l}");
    out.push_back({l, static_cast<std::uint64_t>(static_cast<u128>(a) * ord / D)});
  }
  return out;
}

CycNum mellin_gauss_product(const FieldTower& tower, const WeightSystem& ws, const Permutation& w,
                            const TorusCharacter& theta) {
  CycNum prod(1L);
  for (const auto& chi : orbit_characters(tower, ws, w, weyl_lift(ws, w).xi, theta)) prod *= gauss_sum(tower, chi);
  return prod;
}

MellinCalibration::MellinCalibration(const FieldTower& tower, const WeightSystem& ws) : tower_(&tower), ws_(ws) {
  const Permutation id = Permutation::identity(ws.d);
  TorusCharacter triv;
  for (std::uint32_t j = 0; j < ws.d; ++j) triv.parts.push_back({1, 0});
  unit_ = mellin_gamma(tower, ws, id, triv) / mellin_gauss_product(tower, ws, id, triv);
  if (auto v = unit_.as_rational(); v && v->get_den() == 1) {
    mpz_class num = abs(v->get_num());
    int sign = sgn(v->get_num());
    for (int a = 0; sign != 0 && a <= 4 * static_cast<int>(ws.r()); ++a) {
      mpz_class qa;
      mpz_ui_pow_ui(qa.get_mpz_t(), tower.q(), static_cast<unsigned long>(a));
      if (qa == num) {
        unit_shape_ = std::make_pair(sign, a);
        break;
      }
    }
  }
}

CycNum MellinCalibration::predicted(const Permutation& w, const TorusCharacter& theta) const {
  const int eps = weyl_lift(ws_, w).epsilon;
  CycNum p = unit_ * mellin_gauss_product(*tower_, ws_, w, theta);
  return eps < 0 ? -p : p;
}

std::vector<CycNum> kummer_convolution(const FieldTower& tower, const WeightSystem& ws,
                                       const std::vector<std::uint64_t>& chi) {
  if (chi.size() != ws.d) throw Error(ErrorKind::kInvalidArgument, "character has wrong number of components");
  const Permutation id = Permutation::identity(ws.d);
  TwistedTraceTable table(tower, ws, id);
  const TwistedTorus& torus = table.torus();
  const std::uint64_t qm1 = tower.order(1);
  const std::uint64_t n = lcm_u64(tower.p(), qm1);
  const std::uint64_t step = n / tower.p();

  std::vector<std::vector<Code>> codes(torus.size());
  std::vector<std::vector<std::pair<std::uint64_t, std::int64_t>>> sparse(torus.size());
  for (std::size_t i = 0; i < torus.size(); ++i) {
    codes[i] = torus.expand_codes(torus.point(i), 1);
    const auto& cnt = table.raw(i).counts();
    for (std::size_t k = 0; k < cnt.size(); ++k)
      if (cnt[k] != 0) sparse[i].emplace_back(k * step, cnt[k]);
  }
  std::vector<CycNum> out;
  out.reserve(torus.size());
  for (std::size_t x = 0; x < torus.size(); ++x) {
    RootSum acc(n);
    for (std::size_t t = 0; t < torus.size(); ++t) {
      if (sparse[t].empty()) continue;
      u128 e = 0;
      for (std::uint32_t j = 0; j < ws.d; ++j)
        e += static_cast<u128>(chi[j] % qm1) * tower.dlog(1, tower.div(1, codes[x][j], codes[t][j]));
      const std::uint64_t a = static_cast<std::uint64_t>(e % qm1) * (n / qm1);
      for (auto [k, c] : sparse[t]) acc.add(static_cast<std::int64_t>((k + a) % n), c);
    }
    out.push_back(acc.to_cycnum());
  }
  return out;
}

CycNum kummer_convolution_scalar(const FieldTower& tower, const WeightSystem& ws,
                                 const std::vector<std::uint64_t>& chi) {
  const auto conv = kummer_convolution(tower, ws, chi);
  TwistedTorus torus(tower, Permutation::identity(ws.d));
  const std::uint64_t qm1 = tower.order(1);
  std::optional<CycNum> constant;
  for (std::size_t x = 0; x < conv.size(); ++x) {
    const auto pt = torus.point(x);
    std::uint64_t e = 0;
    for (std::uint32_t j = 0; j < ws.d; ++j) e = (e + (chi[j] % qm1) * pt.cycle_logs[j]) % qm1;
    CycNum ratio = conv[x] * CycNum::root(qm1, -static_cast<std::int64_t>(e));
    if (!constant) {
      constant = ratio;
    } else if (ratio != *constant) {
      throw Error(ErrorKind::kNotConstant, "convolution ratio differs at point " + std::to_string(x) + ": " +
                                               ratio.to_string() + " vs " + constant->to_string());
    }
  }
  return *constant;
}

std::map<std::vector<std::uint64_t>, RootSum> sigma_fiber_table(const FieldTower& tower, const WeightSystem& ws,
                                                                 std::uint32_t j, TwistMode mode) {
  if (j >= ws.shape.size()) throw Error(ErrorKind::kInvalidArgument, "factor index out of range");
  if (ws.shape[j] < 2) throw Error(ErrorKind::kInvalidArgument, "factor must have size at least 2");
  std::vector<std::uint32_t> coords;
  for (std::uint32_t i = 0; i < ws.shape[j]; ++i) coords.push_back(ws.factor_start[j] + i);

  std::map<std::vector<std::uint64_t>, RootSum> out;
  for (const auto& w : ws.factor_weyl_group(j)) {
    TwistedTraceTable table(tower, ws, w);
    const TwistedTorus& torus = table.torus();
    for (std::size_t i = 0; i < table.size(); ++i) {
      const auto pt = torus.point(i);
      std::vector<std::uint64_t> key{torus.product_log(pt, coords)};
      for (std::size_t c = 0; c < torus.cycles().size(); ++c) {
        const std::uint32_t head = torus.cycles()[c][0];
        if (std::find(coords.begin(), coords.end(), head) == coords.end()) key.push_back(pt.cycle_logs[c]);
      }
      auto [it, inserted] = out.try_emplace(key, RootSum(tower.p()));
      it->second += table.trace(i, mode);
    }
  }
  return out;
}

CycNum sigma_fiber_sum(const FieldTower& tower, const WeightSystem& ws, std::uint32_t j, Code z, TwistMode mode) {
  if (z == 0) throw Error(ErrorKind::kInvalidArgument, "determinant value must be nonzero");
  const std::uint64_t zlog = tower.dlog(1, z);
  RootSum total(tower.p());
  for (const auto& [key, val] : sigma_fiber_table(tower, ws, j, mode))
    if (key[0] == zlog) total += val;
  std::uint64_t wj = 1;
  for (std::uint32_t k = 2; k <= ws.shape[j]; ++k) wj *= k;
  return total.to_cycnum().scaled(mpq_class(1, static_cast<unsigned long>(wj)));
}

}  // namespace gammatrace
