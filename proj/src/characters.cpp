#include "gammatrace/characters.hpp"

#include "gammatrace/error.hpp"

namespace gammatrace {

std::uint64_t MultCharacter::order(const FieldTower& tower) const {
  const std::uint64_t ord = tower.order(level);
  return ord / gcd_u64(exponent % ord, ord);
}

MultCharacter MultCharacter::conj(const FieldTower& tower) const {
  const std::uint64_t ord = tower.order(level);
  return {level, (ord - exponent % ord) % ord};
}

MultCharacter MultCharacter::lift(const FieldTower& tower, std::uint32_t to_level) const {
  // N(g_b) = g_a, so (chi o N)(g_b^k) = chi(g_a)^k and the exponent is
  // rescaled into the larger root-of-unity order.
  const std::uint64_t s = tower.log_scale(level, to_level);
  return {to_level, (exponent % tower.order(level)) * s};
}

std::uint64_t MultCharacter::value_log_at_log(const FieldTower& tower, std::uint64_t log) const {
  const std::uint64_t ord = tower.order(level);
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(exponent % ord) * (log % ord)) % ord);
}

CycNum MultCharacter::value(const FieldTower& tower, Code x) const {
  if (x == 0) throw Error(ErrorKind::kInvalidArgument, "multiplicative character at zero");
  const std::uint64_t ord = tower.order(level);
  return CycNum::root(ord, static_cast<std::int64_t>(value_log_at_log(tower, tower.dlog(level, x))));
}

RootSum psi_roots(const FieldTower& tower, std::uint32_t m, Code x) {
  RootSum r(tower.p());
  r.add(tower.trace_to_fp(m, x));
  return r;
}

CycNum psi_eval(const FieldTower& tower, std::uint32_t m, Code x) { return psi_roots(tower, m, x).to_cycnum(); }

RootSum gauss_sum_roots(const FieldTower& tower, const MultCharacter& chi) {
  const std::uint32_t m = chi.level;
  const std::uint64_t ord = tower.order(m);
  const std::uint64_t g = gcd_u64(chi.exponent % ord, ord);
  const std::uint64_t d = ord / g;
  const std::uint64_t j = (chi.exponent % ord) / g;
  const std::uint64_t p = tower.p();
  const std::uint64_t n = lcm_u64(p, d);
  RootSum r(n);
  const std::uint64_t sp = n / p, sd = n / d;
  for (std::uint64_t k = 0; k < ord; ++k) {
    const std::uint64_t e = tower.trace_to_fp_of_log(m, k) * sp + ((j * k) % d) * sd;
    r.add(static_cast<std::int64_t>(e % n));
  }
  return r;
}

CycNum gauss_sum(const FieldTower& tower, const MultCharacter& chi) { return gauss_sum_roots(tower, chi).to_cycnum(); }

RootSum kloosterman_roots(const FieldTower& tower, Code t, unsigned r) {
  if (r == 0) throw Error(ErrorKind::kInvalidArgument, "Kloosterman arity must be positive");
  if (t == 0) throw Error(ErrorKind::kInvalidArgument, "Kloosterman argument must be nonzero");
  const std::uint64_t units = tower.q() - 1;
  RootSum out(tower.p());
  std::vector<std::uint64_t> idx(r - 1, 0);
  while (true) {
    // x_1..x_{r-1} = g^idx, x_r forced by the product condition.
    Code sum = 0, prod = 1;
    for (unsigned i = 0; i + 1 < r; ++i) {
      Code x = tower.exp(1, idx[i]);
      sum = tower.add(1, sum, x);
      prod = tower.mul(1, prod, x);
    }
    sum = tower.add(1, sum, tower.div(1, t, prod));
    out.add(tower.trace_to_fp(1, sum));
    unsigned i = 0;
    while (i + 1 < r && ++idx[i] == units) idx[i++] = 0;
    if (i + 1 >= r) break;
  }
  return (r % 2 == 1) ? out.scaled(-1) : out;
}

CycNum kloosterman(const FieldTower& tower, Code t, unsigned r) { return kloosterman_roots(tower, t, r).to_cycnum(); }

}  // namespace gammatrace
