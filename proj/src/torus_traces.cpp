#include "gammatrace/torus_traces.hpp"

#include "gammatrace/error.hpp"

namespace gammatrace {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t reduce_signed(std::int64_t v, std::uint64_t m) {
  std::int64_t mm = static_cast<std::int64_t>(m);
  std::int64_t r = v % mm;
  return static_cast<std::uint64_t>(r < 0 ? r + mm : r);
}

void require_level(const FieldTower& tower, std::uint32_t level, const char* what) {
  if (!tower.has_level(level))
    throw Error(ErrorKind::kTowerTooShallow, std::string(what) + " needs level " + std::to_string(level) +
                                                 " but the tower stops at " + std::to_string(tower.max_level()));
}

}  // namespace

SlotCycles slot_cycles(const FieldTower& tower, const WeightSystem& ws, const Permutation& xi, std::uint32_t level) {
  SlotCycles sc;
  sc.cycles = xi.cycles();
  const std::uint64_t ord = tower.order(level);
  for (const auto& cyc : sc.cycles) {
    const std::uint32_t l = static_cast<std::uint32_t>(cyc.size());
    const std::uint64_t scale = tower.log_scale(l, level);
    std::vector<std::uint64_t> coef(ws.d, 0);
    std::uint64_t qk = 1;
    for (std::uint32_t k = 0; k < l; ++k) {
      const std::uint64_t base = mulmod(scale, qk, ord);
      for (std::uint32_t j = 0; j < ws.d; ++j) {
        const std::uint64_t e = reduce_signed(ws.slots[cyc[k]][j], ord);
        coef[j] = (coef[j] + mulmod(base, e, ord)) % ord;
      }
      qk = mulmod(qk, tower.q(), ord);
    }
    sc.coef.push_back(std::move(coef));
    sc.radix.push_back(tower.order(l));
  }
  return sc;
}


TwistedTorus::TwistedTorus(const FieldTower& tower, Permutation w) : tower_(&tower), w_(std::move(w)) {
  cycles_ = w_.cycles();
  cycle_of_coord_.assign(w_.size(), 0);
  pos_in_cycle_.assign(w_.size(), 0);
  for (std::size_t c = 0; c < cycles_.size(); ++c) {
    const std::uint32_t l = static_cast<std::uint32_t>(cycles_[c].size());
    require_level(tower, l, "twisted torus");
    for (std::uint32_t k = 0; k < l; ++k) {
      cycle_of_coord_[cycles_[c][k]] = static_cast<std::uint32_t>(c);
      pos_in_cycle_[cycles_[c][k]] = k;
    }
    radix_.push_back(tower.order(l));
    size_ *= tower.order(l);
    splitting_level_ = static_cast<std::uint32_t>(lcm_u64(splitting_level_, l));
  }
  require_level(tower, splitting_level_, "twisted torus");
}

TwistedTorusPoint TwistedTorus::point(std::size_t index) const {
  TwistedTorusPoint pt{w_, std::vector<std::uint64_t>(cycles_.size())};
  for (std::size_t c = 0; c < cycles_.size(); ++c) {
    pt.cycle_logs[c] = index % radix_[c];
    index /= radix_[c];
  }
  return pt;
}

std::size_t TwistedTorus::index_of(const std::vector<std::uint64_t>& cycle_logs) const {
  if (cycle_logs.size() != cycles_.size()) throw Error(ErrorKind::kInvalidTwistedPoint, "wrong number of cycle values");
  std::size_t idx = 0;
  for (std::size_t c = cycles_.size(); c-- > 0;) {
    if (cycle_logs[c] >= radix_[c]) throw Error(ErrorKind::kInvalidTwistedPoint, "cycle value out of range");
    idx = idx * radix_[c] + cycle_logs[c];
  }
  return idx;
}

std::vector<std::uint64_t> TwistedTorus::expand_logs(const TwistedTorusPoint& pt, std::uint32_t level) const {
  if (pt.cycle_logs.size() != cycles_.size()) throw Error(ErrorKind::kInvalidTwistedPoint, "wrong number of cycle values");
  require_level(*tower_, level, "point expansion");
  const std::uint64_t ord = tower_->order(level);
  std::vector<std::uint64_t> out(w_.size());
  for (std::size_t c = 0; c < cycles_.size(); ++c) {
    const std::uint32_t l = cycle_level(c);
    std::uint64_t v = mulmod(pt.cycle_logs[c] % tower_->order(l), tower_->log_scale(l, level), ord);
    for (std::uint32_t k = 0; k < l; ++k) {
      out[cycles_[c][k]] = v;
      v = mulmod(v, tower_->q(), ord);
    }
  }
  return out;
}

std::vector<Code> TwistedTorus::expand_codes(const TwistedTorusPoint& pt, std::uint32_t level) const {
  auto logs = expand_logs(pt, level);
  std::vector<Code> out(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) out[i] = tower_->exp(level, logs[i]);
  return out;
}

bool TwistedTorus::satisfies_fixed_point_equation(const TwistedTorusPoint& pt) const {
  if (pt.w != w_ || pt.cycle_logs.size() != cycles_.size()) return false;
  for (std::size_t c = 0; c < cycles_.size(); ++c)
    if (pt.cycle_logs[c] >= radix_[c]) return false;
  const std::uint32_t L = splitting_level_;
  auto t = expand_codes(pt, L);
  for (std::uint32_t i = 0; i < t.size(); ++i)
    if (t[w_(i)] != tower_->frobenius(L, t[i])) return false;
  return true;
}

std::uint64_t TwistedTorus::product_log(const TwistedTorusPoint& pt, const std::vector<std::uint32_t>& coords) const {
  const std::uint32_t L = splitting_level_;
  auto logs = expand_logs(pt, L);
  const std::uint64_t ord = tower_->order(L);
  std::uint64_t s = 0;
  for (std::uint32_t j : coords) s = (s + logs[j]) % ord;
  const std::uint64_t scale = tower_->log_scale(1, L);
  if (s % scale != 0) throw Error(ErrorKind::kInvalidTwistedPoint, "coordinate product is not F_q-rational");
  return s / scale;
}

std::vector<Code> TwistedTorus::charpoly(const TwistedTorusPoint& pt) const {
  const std::uint32_t L = splitting_level_;
  auto t = expand_codes(pt, L);
  std::vector<Code> poly{1};
  for (Code root : t) {
    // poly *= (X - root)
    std::vector<Code> next(poly.size() + 1, 0);
    const Code neg_root = tower_->neg(L, root);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] = tower_->add(L, next[i + 1], poly[i]);
      next[i] = tower_->add(L, next[i], tower_->mul(L, poly[i], neg_root));
    }
    poly = std::move(next);
  }
  for (auto& c : poly) c = tower_->descend(L, 1, c);
  return poly;
}

RootSum hyper_trace_roots(const FieldTower& tower, const WeightSystem& ws, const std::vector<Code>& t) {
  if (ws.rank < ws.d) throw Error(ErrorKind::kNotSurjective, "monomial map is not surjective");
  if (t.size() != ws.d) throw Error(ErrorKind::kInvalidArgument, "torus point has wrong dimension");
  const std::uint64_t ord = tower.order(1);
  std::vector<std::uint64_t> target(ws.d);
  for (std::uint32_t j = 0; j < ws.d; ++j) target[j] = tower.dlog(1, t[j]);

  const std::uint32_t r = ws.r();
  // complete_at[k]: coordinates untouched by slots k..r-1, checkable once
  // slots 0..k-1 are assigned.
  std::vector<std::vector<std::uint32_t>> complete_at(r + 1);
  for (std::uint32_t j = 0; j < ws.d; ++j) {
    std::uint32_t last = 0;
    for (std::uint32_t i = 0; i < r; ++i)
      if (ws.slots[i][j] != 0) last = i + 1;
    complete_at[last].push_back(j);
  }
  std::vector<std::vector<std::uint64_t>> wmod(r, std::vector<std::uint64_t>(ws.d));
  for (std::uint32_t i = 0; i < r; ++i)
    for (std::uint32_t j = 0; j < ws.d; ++j) wmod[i][j] = reduce_signed(ws.slots[i][j], ord);

  RootSum out(tower.p());
  std::vector<std::vector<std::uint64_t>> partial(r + 1, std::vector<std::uint64_t>(ws.d, 0));
  std::vector<Code> sums(r + 1, 0);
  std::vector<std::uint64_t> x(r, 0);

  auto ok_at = [&](std::uint32_t k) {
    for (std::uint32_t j : complete_at[k])
      if (partial[k][j] != target[j]) return false;
    return true;
  };
  if (!ok_at(0)) return out;
  // Iterative depth-first search over slot logs.
  std::uint32_t depth = 0;
  x.assign(r, 0);
  bool descending = true;
  while (true) {
    if (descending) {
      if (depth == r) {
        out.add(tower.trace_to_fp(1, sums[r]));
        descending = false;
        if (r == 0) break;
        --depth;
        ++x[depth];
        continue;
      }
    }
    if (x[depth] >= ord) {
      x[depth] = 0;
      if (depth == 0) break;
      --depth;
      ++x[depth];
      descending = false;
      continue;
    }
    for (std::uint32_t j = 0; j < ws.d; ++j) partial[depth + 1][j] = (partial[depth][j] + mulmod(wmod[depth][j], x[depth], ord)) % ord;
    sums[depth + 1] = tower.add(1, sums[depth], tower.exp(1, x[depth]));
    if (ok_at(depth + 1)) {
      ++depth;
      descending = true;
      if (depth < r) x[depth] = 0;
    } else {
      ++x[depth];
      descending = false;
    }
  }
  return (r % 2 == 1) ? out.scaled(-1) : out;
}

CycNum hyper_trace(const FieldTower& tower, const WeightSystem& ws, const std::vector<Code>& t) {
  return hyper_trace_roots(tower, ws, t).to_cycnum();
}

RootSum raw_twisted_trace_roots(const FieldTower& tower, const WeightSystem& ws, const Permutation& xi,
                                const TwistedTorusPoint& pt) {
  if (!is_lift(ws, pt.w, xi)) throw Error(ErrorKind::kInvalidArgument, "slot permutation is not a lift of w");
  const std::uint32_t L = static_cast<std::uint32_t>(lcm_u64(xi.order(), pt.w.order()));
  require_level(tower, L, "twisted trace");
  TwistedTorus torus(tower, pt.w);
  if (!torus.satisfies_fixed_point_equation(pt)) throw Error(ErrorKind::kInvalidTwistedPoint, "point is not fixed by wF");
  const auto target = torus.expand_logs(pt, L);
  const std::uint64_t ord = tower.order(L);
  const auto cycles = xi.cycles();

  RootSum out(tower.p());
  std::vector<std::uint64_t> y(cycles.size(), 0);
  std::vector<std::uint64_t> slot_log(ws.r());
  while (true) {
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      const std::uint32_t l = static_cast<std::uint32_t>(cycles[c].size());
      std::uint64_t v = mulmod(y[c], tower.log_scale(l, L), ord);
      for (std::uint32_t k = 0; k < l; ++k) {
        slot_log[cycles[c][k]] = v;
        v = mulmod(v, tower.q(), ord);
      }
    }
    bool hit = true;
    for (std::uint32_t j = 0; j < ws.d && hit; ++j) {
      std::uint64_t s = 0;
      for (std::uint32_t i = 0; i < ws.r(); ++i) s = (s + mulmod(reduce_signed(ws.slots[i][j], ord), slot_log[i], ord)) % ord;
      hit = s == target[j];
    }
    if (hit) {
      std::uint64_t e = 0;
      for (std::size_t c = 0; c < cycles.size(); ++c)
        e += tower.trace_to_fp_of_log(static_cast<std::uint32_t>(cycles[c].size()), y[c]);
      out.add(static_cast<std::int64_t>(e));
    }
    std::size_t c = 0;
    while (c < cycles.size() && ++y[c] == tower.order(static_cast<std::uint32_t>(cycles[c].size()))) y[c++] = 0;
    if (c == cycles.size()) break;
  }
  return (ws.r() % 2 == 1) ? out.scaled(-1) : out;
}

CycNum twisted_stalk_trace(const FieldTower& tower, const WeightSystem& ws, const Permutation& xi,
                           const TwistedTorusPoint& pt) {
  RootSum raw = raw_twisted_trace_roots(tower, ws, xi, pt);
  const int eps = xi.sign() * pt.w.sign();
  return (eps < 0 ? raw.scaled(-1) : raw).to_cycnum();
}

CycNum twisted_stalk_trace(const FieldTower& tower, const WeightSystem& ws, const TwistedTorusPoint& pt) {
  return twisted_stalk_trace(tower, ws, weyl_lift(ws, pt.w).xi, pt);
}

TwistedTraceTable::TwistedTraceTable(const FieldTower& tower, const WeightSystem& ws, const Permutation& w)
    : TwistedTraceTable(tower, ws, w, weyl_lift(ws, w).xi) {}

TwistedTraceTable::TwistedTraceTable(const FieldTower& tower, const WeightSystem& ws, const Permutation& w,
                                     const Permutation& xi)
    : torus_(tower, w), xi_(xi) {
  if (!is_lift(ws, w, xi)) throw Error(ErrorKind::kInvalidArgument, "slot permutation is not a lift of w");
  epsilon_ = xi.sign() * w.sign();
  const std::uint32_t L = static_cast<std::uint32_t>(lcm_u64(xi.order(), w.order()));
  require_level(tower, L, "twisted trace table");
  const std::uint64_t ord = tower.order(L);
  const SlotCycles sc = slot_cycles(tower, ws, xi, L);
  const auto& wcycles = torus_.cycles();
  raw_.assign(torus_.size(), RootSum(tower.p()));

  std::vector<std::uint64_t> wscale(wcycles.size());
  for (std::size_t c = 0; c < wcycles.size(); ++c) wscale[c] = tower.log_scale(static_cast<std::uint32_t>(wcycles[c].size()), L);

  const std::int64_t sign = (ws.r() % 2 == 1) ? -1 : 1;
  std::vector<std::uint64_t> y(sc.cycles.size(), 0);
  std::vector<std::uint64_t> tlog(ws.d);
  std::vector<std::uint64_t> cycle_logs(wcycles.size());
  while (true) {
    std::fill(tlog.begin(), tlog.end(), 0);
    std::uint64_t e = 0;
    for (std::size_t c = 0; c < sc.cycles.size(); ++c) {
      if (y[c] != 0)
        for (std::uint32_t j = 0; j < ws.d; ++j) tlog[j] = (tlog[j] + mulmod(y[c], sc.coef[c][j], ord)) % ord;
      e += tower.trace_to_fp_of_log(static_cast<std::uint32_t>(sc.cycles[c].size()), y[c]);
    }
    for (std::size_t c = 0; c < wcycles.size(); ++c) {
      const std::uint64_t head = tlog[wcycles[c][0]];
      if (head % wscale[c] != 0) throw Error(ErrorKind::kInvalidTwistedPoint, "image point left the twisted torus");
      std::uint64_t v = head;
      for (std::size_t k = 1; k < wcycles[c].size(); ++k) {
        v = mulmod(v, tower.q(), ord);
        if (tlog[wcycles[c][k]] != v) throw Error(ErrorKind::kInvalidTwistedPoint, "image point is not wF-fixed");
      }
      cycle_logs[c] = head / wscale[c];
    }
    raw_[torus_.index_of(cycle_logs)].add(static_cast<std::int64_t>(e), sign);
    ++fixed_points_;
    std::size_t c = 0;
    while (c < sc.cycles.size() && ++y[c] == sc.radix[c]) y[c++] = 0;
    if (c == sc.cycles.size()) break;
  }
}

}  // namespace gammatrace
