#include "gammatrace/gamma_induction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gammatrace/error.hpp"
#include "gammatrace/mirabolic.hpp"

namespace gammatrace {

namespace {

// Reduced row echelon basis of the span of the given rows.
Matrix span_rref(const MatOps& ops, const Matrix& rows) {
  std::vector<std::uint32_t> piv;
  Matrix r = ops.rref(rows, &piv);
  return r.block(0, 0, static_cast<std::uint32_t>(piv.size()), rows.cols());
}

Matrix stack_rows(const Matrix& a, const Matrix& b) {
  Matrix s(a.rows() + b.rows(), a.cols());
  s.set_block(0, 0, a);
  s.set_block(a.rows(), 0, b);
  return s;
}

void extend_flags(const MatOps& ops, std::uint32_t n, const Matrix& current, std::vector<Matrix>& chain,
                  std::vector<Matrix>& vectors, std::vector<FlagPoint>& out) {
  const std::uint32_t k = current.rows();
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n; ++i) total *= ops.q();
  // distinct V_{k+1} containing V_k, each with one vector completing V_k to it
  std::map<Matrix, Matrix> next;
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    Matrix row = ops.from_index(1, n, idx);
    Matrix grown = stack_rows(current, row);
    if (ops.rank(grown) != k + 1) continue;
    next.try_emplace(span_rref(ops, grown), row);
  }
  for (const auto& [sub, row] : next) {
    Matrix col(n, 1);
    for (std::uint32_t j = 0; j < n; ++j) col(j, 0) = row(0, j);
    vectors.push_back(col);
    if (k + 1 == n) {
      FlagPoint fp;
      fp.subspaces = chain;
      fp.basis = Matrix(n, n);
      for (std::uint32_t j = 0; j < n; ++j) fp.basis.set_block(0, j, vectors[j]);
      out.push_back(std::move(fp));
    } else {
      chain.push_back(sub);
      extend_flags(ops, n, sub, chain, vectors, out);
      chain.pop_back();
    }
    vectors.pop_back();
    // V_n = F_q^n is unique
    if (k + 1 == n) break;
  }
}

bool stable(const MatOps& ops, const Matrix& g, const Matrix& sub) {
  // rows of sub span V; g V has basis (g v)^T = v^T g^T.
  Matrix gt(g.cols(), g.rows());
  for (std::uint32_t i = 0; i < g.rows(); ++i)
    for (std::uint32_t j = 0; j < g.cols(); ++j) gt(j, i) = g(i, j);
  return ops.rank(stack_rows(sub, ops.mul(sub, gt))) == sub.rows();
}

std::uint64_t factorial(std::uint32_t n) {
  std::uint64_t f = 1;
  for (std::uint32_t k = 2; k <= n; ++k) f *= k;
  return f;
}

void require_gln(const WeightSystem& ws) {
  if (ws.shape.size() != 1)
    throw Error(ErrorKind::kInvalidArgument, "expected a representation of a single GL(n)");
}

}  // namespace

std::vector<FlagPoint> all_flags(const MatOps& ops, std::uint32_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "n must be positive");
  std::uint64_t count = 1;
  for (std::uint32_t k = 1; k <= n; ++k) {
    std::uint64_t s = 0, qi = 1;
    for (std::uint32_t i = 0; i < k; ++i, qi *= ops.q()) s += qi;
    count *= s;
    if (count > 100000) throw Error(ErrorKind::kCapExceeded, "flag variety too large to enumerate");
  }
  std::vector<FlagPoint> out;
  std::vector<Matrix> chain, vectors;
  extend_flags(ops, n, Matrix(0, n), chain, vectors, out);
  std::sort(out.begin(), out.end());
  if (out.size() != count) throw Error(ErrorKind::kInvalidArgument, "flag enumeration produced the wrong count");
  return out;
}

std::vector<FlagPoint> flag_fixed_points(const MatOps& ops, const Matrix& g) {
  std::vector<FlagPoint> out;
  for (auto& f : all_flags(ops, g.rows())) {
    bool ok = true;
    for (const auto& s : f.subspaces) ok = ok && stable(ops, g, s);
    if (ok) out.push_back(std::move(f));
  }
  return out;
}

CycNum induced_trace(const FieldTower& tower, const WeightSystem& ws, const Matrix& g) {
  require_gln(ws);
  MatOps ops(tower);
  if (g.rows() != ws.d) throw Error(ErrorKind::kInvalidArgument, "matrix size does not match the torus");
  RootSum total(tower.p());
  for (const auto& f : flag_fixed_points(ops, g)) {
    Matrix b = ops.mul(ops.inverse(f.basis), ops.mul(g, f.basis));
    std::vector<Code> diag(ws.d);
    for (std::uint32_t i = 0; i < ws.d; ++i) diag[i] = b(i, i);
    total += hyper_trace_roots(tower, ws, diag);
  }
  // n^2 - n is even, so the sign is +1.
  return total.to_cycnum();
}

std::vector<TwistedTorusPoint> steinberg_fiber(const FieldTower& tower, const Poly& c, const Permutation& w) {
  if (c.size() != w.size() + 1) throw Error(ErrorKind::kInvalidArgument, "polynomial degree does not match w");
  TwistedTorus torus(tower, w);
  std::vector<TwistedTorusPoint> out;
  for (std::size_t i = 0; i < torus.size(); ++i) {
    auto pt = torus.point(i);
    if (torus.charpoly(pt) == c) out.push_back(std::move(pt));
  }
  return out;
}

bool is_regular(const MatOps& ops, const Matrix& x) {
  const std::uint32_t n = x.rows();
  Matrix powers(n, n * n);
  Matrix p = Matrix::identity(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    for (std::uint32_t e = 0; e < n * n; ++e) powers(k, e) = p.entries()[e];
    p = ops.mul(p, x);
  }
  return ops.rank(powers) == n;
}

bool is_rss(const MatOps& ops, const Matrix& x) {
  // squarefree characteristic polynomial: gcd(c, c') = 1
  Poly c = ops.charpoly(x);
  Poly d(c.size() > 1 ? c.size() - 1 : 1, 0);
  for (std::size_t k = 1; k < c.size(); ++k) {
    Code kk = 0;
    for (std::size_t i = 0; i < k; ++i) kk = ops.add(kk, 1);
    d[k - 1] = ops.mul(kk, c[k]);
  }
  auto trim = [](Poly& p) {
    while (p.size() > 1 && p.back() == 0) p.pop_back();
  };
  trim(d);
  Poly a = c, b = d;
  while (!(b.size() == 1 && b[0] == 0)) {
    const Code lead_inv = ops.inv(b.back());
    Poly bm = b;
    for (auto& v : bm) v = ops.mul(v, lead_inv);
    auto [quo, rem] = ops.poly_divmod(a, bm);
    if (rem.empty()) rem = {0};
    trim(rem);
    a = bm;
    b = rem;
  }
  return a.size() == 1;
}

CycNum phi_regular(const FieldTower& tower, const WeightSystem& ws, const Matrix& x, TwistMode mode) {
  require_gln(ws);
  MatOps ops(tower);
  if (x.rows() != ws.d) throw Error(ErrorKind::kInvalidArgument, "matrix size does not match the torus");
  if (!is_regular(ops, x)) throw Error(ErrorKind::kNotComputableLocus, "point is neither regular nor regular semisimple");
  const Poly c = ops.charpoly(x);
  RootSum total(tower.p());
  const auto group = ws.weyl_group();
  for (const auto& w : group) {
    const auto lift = weyl_lift(ws, w);
    for (const auto& pt : steinberg_fiber(tower, c, w)) {
      RootSum raw = raw_twisted_trace_roots(tower, ws, lift.xi, pt);
      total += (mode == TwistMode::kSigned && lift.epsilon < 0) ? raw.scaled(-1) : raw;
    }
  }
  return total.to_cycnum().scaled(mpq_class(1, static_cast<unsigned long>(group.size())));
}

PhiTable::PhiTable(const FieldTower& tower, const WeightSystem& ws, TwistMode mode)
    : tower_(&tower), ws_(ws), mode_(mode), zero_(tower.p()) {
  require_gln(ws);
  weyl_order_ = factorial(ws.d);
  for (const auto& w : ws.weyl_group()) {
    TwistedTraceTable traces(tower, ws, w);
    const TwistedTorus& torus = traces.torus();
    for (std::size_t i = 0; i < traces.size(); ++i) {
      auto [it, inserted] = table_.try_emplace(torus.charpoly(torus.point(i)), RootSum(tower.p()));
      it->second += traces.trace(i, mode);
    }
  }
}

const RootSum& PhiTable::scaled_value(const Poly& c) const {
  auto it = table_.find(c);
  return it == table_.end() ? zero_ : it->second;
}

CycNum PhiTable::value(const Poly& c) const {
  return scaled_value(c).to_cycnum().scaled(mpq_class(1, static_cast<unsigned long>(weyl_order_)));
}

const RootSum& PhiTable::scaled_at(const Matrix& x) const {
  MatOps ops(*tower_);
  if (x.rows() != ws_.d) throw Error(ErrorKind::kInvalidArgument, "matrix size does not match the torus");
  if (!is_regular(ops, x)) throw Error(ErrorKind::kNotComputableLocus, "point is neither regular nor regular semisimple");
  return scaled_value(ops.charpoly(x));
}

CycNum PhiTable::at(const Matrix& x) const {
  return scaled_at(x).to_cycnum().scaled(mpq_class(1, static_cast<unsigned long>(weyl_order_)));
}

CosetVanishing coset_vanishing_top(const PhiTable& phi, const Matrix& x) {
  MatOps ops(phi.tower());
  const std::uint32_t n = x.rows();
  if (n < 2 || stratum_index(ops, x) != n) throw Error(ErrorKind::kNotTopStratum, "e_1 is not a cyclic vector");
  const mpq_class inv_w(1, static_cast<unsigned long>(phi.weyl_order()));

  RootSum coset(phi.tower().p());
  std::uint64_t nu = 1;
  for (std::uint32_t i = 0; i + 1 < n; ++i) nu *= ops.q();
  std::set<Poly> reached;
  for (std::uint64_t iu = 0; iu < nu; ++iu) {
    Matrix ux = ops.mul(mirabolic_unipotent(ops.from_index(1, n - 1, iu).entries()), x);
    coset += phi.scaled_at(ux);
    reached.insert(ops.charpoly(ux));
  }

  const Poly cx = ops.charpoly(x);
  RootSum fiber(phi.tower().p());
  std::uint64_t fiber_size = 0;
  for (std::uint64_t ic = 0; ic < nu; ++ic) {
    // monic of degree n with the constant term of c(x)
    Poly c = ops.monic_poly(n, ic * ops.q());
    c[0] = cx[0];
    fiber += phi.scaled_value(c);
    ++fiber_size;
    if (!reached.count(c))
      throw Error(ErrorKind::kVanishingFailed, "coset does not cover the determinant fiber");
  }
  if (reached.size() != fiber_size) throw Error(ErrorKind::kVanishingFailed, "coset map is not injective");
  return {coset.to_cycnum().scaled(inv_w), fiber.to_cycnum().scaled(inv_w)};
}

CycNum unipotent_coset_sum(const PhiTable& phi, const Matrix& g) {
  MatOps ops(phi.tower());
  const std::uint32_t n = g.rows();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::uint64_t total = 1;
  for (std::size_t k = 0; k < slots.size(); ++k) total *= ops.q();
  RootSum acc(phi.tower().p());
  for (std::uint64_t iu = 0; iu < total; ++iu) {
    Matrix u = Matrix::identity(n);
    std::uint64_t r = iu;
    for (auto [i, j] : slots) {
      u(i, j) = static_cast<Code>(r % ops.q());
      r /= ops.q();
    }
    acc += phi.scaled_at(ops.mul(u, g));
  }
  return acc.to_cycnum().scaled(mpq_class(1, static_cast<unsigned long>(phi.weyl_order())));
}

}  // namespace gammatrace
