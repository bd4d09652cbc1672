#include "gammatrace/mirabolic.hpp"

#include <algorithm>
#include <unordered_set>

#include "gammatrace/error.hpp"

namespace gammatrace {

namespace {

Matrix krylov(const MatOps& ops, const Matrix& x, std::uint32_t count) {
  const std::uint32_t n = x.rows();
  Matrix k(n, count);
  Matrix v(n, 1);
  v(0, 0) = 1;
  for (std::uint32_t j = 0; j < count; ++j) {
    k.set_block(0, j, v);
    v = ops.mul(x, v);
  }
  return k;
}

bool is_normalized(const MatOps& ops, const Matrix& x, std::uint32_t m) {
  const std::uint32_t n = x.rows();
  for (std::uint32_t i = m; i < n; ++i)
    for (std::uint32_t j = 0; j < m; ++j)
      if (x(i, j) != 0) return false;
  Matrix f = x.block(0, 0, m, m);
  return f == companion(ops, charpoly_a(ops.charpoly(f)));
}

std::uint64_t matrix_index(const MatOps& ops, const Matrix& m) {
  std::uint64_t idx = 0;
  for (std::size_t k = m.entries().size(); k-- > 0;) idx = idx * ops.q() + m.entries()[k];
  return idx;
}

std::uint64_t checked_space(const MatOps& ops, std::uint32_t entries) {
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < entries; ++i) {
    total *= ops.q();
    if (total > (1ull << 24)) throw Error(ErrorKind::kCapExceeded, "matrix space too large to enumerate");
  }
  return total;
}

std::vector<Matrix> mirabolic_group(const MatOps& ops, std::uint32_t n) {
  std::vector<Matrix> out;
  const auto inner = ops.general_linear_group(n - 1);
  const std::uint64_t rows = checked_space(ops, n - 1);
  for (const auto& a : inner)
    for (std::uint64_t r = 0; r < rows; ++r) {
      Matrix g(n, n);
      g(0, 0) = 1;
      g.set_block(0, 1, ops.from_index(1, n - 1, r));
      g.set_block(1, 1, a);
      out.push_back(std::move(g));
    }
  return out;
}

}  // namespace

std::uint32_t stratum_index(const MatOps& ops, const Matrix& x) {
  if (!x.square()) throw Error(ErrorKind::kInvalidArgument, "matrix is not square");
  return ops.rank(krylov(ops, x, x.rows()));
}

Matrix companion(const MatOps& ops, const std::vector<Code>& a) {
  const std::uint32_t m = static_cast<std::uint32_t>(a.size());
  Matrix c(m, m);
  for (std::uint32_t i = 1; i < m; ++i) c(i, i - 1) = 1;
  for (std::uint32_t i = 0; i < m; ++i) c(i, m - 1) = ops.neg(a[m - 1 - i]);
  return c;
}

CompanionNormalization companion_normalize(const MatOps& ops, const Matrix& x) {
  const std::uint32_t m = x.rows();
  Matrix g = krylov(ops, x, m);
  if (ops.rank(g) < m) throw Error(ErrorKind::kNotCyclic, "e_1 is not a cyclic vector");
  CompanionNormalization out{g, charpoly_a(ops.charpoly(x))};
  if (ops.mul(ops.inverse(g), ops.mul(x, g)) != companion(ops, out.a))
    throw Error(ErrorKind::kNotCyclic, "cyclic basis does not produce the companion form");
  return out;
}

Matrix stratum_normalizer(const MatOps& ops, const Matrix& x) {
  const std::uint32_t n = x.rows();
  const std::uint32_t m = stratum_index(ops, x);
  Matrix g(n, n);
  g.set_block(0, 0, krylov(ops, x, m));
  std::uint32_t filled = m;
  for (std::uint32_t k = 1; k < n && filled < n; ++k) {
    Matrix trial = g.block(0, 0, n, filled + 1);
    trial(k, filled) = 1;
    if (ops.rank(trial) == filled + 1) {
      g(k, filled) = 1;
      ++filled;
    }
  }
  return g;
}

Matrix filtered_map(const MatOps& ops, const Matrix& x_f, const Matrix& x_e, const Matrix& v1, const Matrix& v) {
  return ops.sub(ops.add(v1, ops.mul(v, x_e)), ops.mul(x_f, v));
}

std::pair<Matrix, Matrix> solve_filtered(const MatOps& ops, const Matrix& x_f, const Matrix& x_e, const Matrix& y) {
  const std::uint32_t m = x_f.rows();
  const std::uint32_t k = x_e.rows();
  Matrix v1(m, k), v(m, k);
  if (m >= 2) {
    // Row m-1 of y fixes row m-2 of v; each lower row then follows from the one above.
    for (std::uint32_t j = 0; j < k; ++j) v(m - 2, j) = ops.neg(y(m - 1, j));
    for (std::uint32_t i = m - 2; i >= 1; --i) {
      Matrix vx = ops.mul(v.block(i, 0, 1, k), x_e);
      for (std::uint32_t j = 0; j < k; ++j) v(i - 1, j) = ops.sub(vx(0, j), y(i, j));
    }
  }
  Matrix vx = ops.mul(v.block(0, 0, 1, k), x_e);
  for (std::uint32_t j = 0; j < k; ++j) v1(0, j) = ops.sub(y(0, j), vx(0, j));
  if (filtered_map(ops, x_f, x_e, v1, v) != y)
    throw Error(ErrorKind::kSolverSingular, "filtered solve did not reproduce y");
  return {v1, v};
}

StratumData bernstein_coords(const MatOps& ops, const Matrix& x, std::uint32_t m) {
  const std::uint32_t n = x.rows();
  if (m == 0 || m > n || !is_normalized(ops, x, m))
    throw Error(ErrorKind::kNotNormalized, "point is not in block form with a companion F-block");
  StratumData s;
  s.m = m;
  s.g = Matrix::identity(n);
  s.normalized = x;
  Matrix x_f = x.block(0, 0, m, m);
  s.a = charpoly_a(ops.charpoly(x_f));
  s.x_e = x.block(m, m, n - m, n - m);
  Matrix y = x.block(0, m, m, n - m);
  auto [w1, v] = solve_filtered(ops, x_f, s.x_e, y);
  s.v1 = n > m ? ops.mul(w1, ops.inverse(s.x_e)) : w1;
  s.v_top = v;
  return s;
}

StratumData stratum_data(const MatOps& ops, const Matrix& x) {
  if (!ops.invertible(x)) throw Error(ErrorKind::kInvalidArgument, "point is not invertible");
  Matrix g = stratum_normalizer(ops, x);
  Matrix xn = ops.mul(ops.inverse(g), ops.mul(x, g));
  StratumData s = bernstein_coords(ops, xn, stratum_index(ops, x));
  s.g = g;
  return s;
}

Matrix reassemble(const MatOps& ops, const StratumData& s) {
  const std::uint32_t m = s.m;
  const std::uint32_t n = m + s.x_e.rows();
  Matrix u1 = Matrix::identity(n), u = Matrix::identity(n), uinv = Matrix::identity(n), d(n, n);
  u1.set_block(0, m, s.v1);
  u.set_block(0, m, s.v_top);
  uinv.set_block(0, m, ops.neg(s.v_top));
  d.set_block(0, 0, companion(ops, s.a));
  d.set_block(m, m, s.x_e);
  return ops.mul(ops.mul(u1, u), ops.mul(d, uinv));
}

Matrix mirabolic_unipotent(const std::vector<Code>& w) {
  const std::uint32_t n = static_cast<std::uint32_t>(w.size()) + 1;
  Matrix u = Matrix::identity(n);
  for (std::uint32_t j = 1; j < n; ++j) u(0, j) = w[j - 1];
  return u;
}

CosetCharpoly coset_charpoly(const MatOps& ops, const Matrix& x, std::uint32_t m, const std::vector<Code>& w) {
  const std::uint32_t n = x.rows();
  if (w.size() + 1 != n) throw Error(ErrorKind::kInvalidArgument, "row vector has wrong length");
  if (!is_normalized(ops, x, m)) throw Error(ErrorKind::kNotNormalized, "point is not in normalized block form");
  CosetCharpoly out;
  const Matrix x_f = x.block(0, 0, m, m);
  const Matrix x_e = x.block(m, m, n - m, n - m);
  const std::vector<Code> a = charpoly_a(ops.charpoly(x_f));

  std::vector<Code> v(m, 0);  // v[i] for i = 1..m-1
  for (std::uint32_t i = 1; i < m; ++i) v[i] = ops.neg(w[i - 1]);
  out.b.assign(m, 0);
  for (std::uint32_t r = 1; r <= m; ++r) {
    if (r == m) {
      out.b[r - 1] = a[m - 1];
      continue;
    }
    Code b = ops.add(a[r - 1], v[r]);
    for (std::uint32_t i = 1; i + 1 <= r; ++i) b = ops.add(b, ops.mul(a[i - 1], v[r - i]));
    out.b[r - 1] = b;
  }

  std::vector<Code> wl(m - 1);
  for (std::uint32_t i = 0; i + 1 < m; ++i) wl[i] = w[i];
  const Poly c_l = ops.charpoly(ops.mul(mirabolic_unipotent(wl), x_f));
  out.b_direct = charpoly_a(c_l);
  out.c_ux = ops.charpoly(ops.mul(mirabolic_unipotent(w), x));
  out.factorization_holds = out.c_ux == ops.poly_mul(c_l, ops.charpoly(x_e));
  out.formula_holds = out.b == out.b_direct;
  out.last_coefficient_fixed = out.b[m - 1] == a[m - 1];
  return out;
}

std::uint32_t coset_map_rank(const MatOps& ops, const Matrix& x) {
  const std::uint32_t n = x.rows();
  const auto base = charpoly_a(ops.charpoly(x));
  Matrix diffs(n - 1, n);
  for (std::uint32_t k = 0; k + 1 < n; ++k) {
    std::vector<Code> w(n - 1, 0);
    w[k] = 1;
    const auto c = charpoly_a(ops.charpoly(ops.mul(mirabolic_unipotent(w), x)));
    for (std::uint32_t j = 0; j < n; ++j) diffs(k, j) = ops.sub(c[j], base[j]);
  }
  return ops.rank(diffs);
}

std::uint64_t OrbitCensus::orbit_count() const {
  std::uint64_t total = 0;
  for (const auto& [m, sizes] : orbits) total += sizes.size();
  return total;
}

OrbitCensus orbit_census(const MatOps& ops, std::uint32_t n, const Poly& c) {
  if (c.size() != n + 1 || c.back() != 1) throw Error(ErrorKind::kInvalidArgument, "expected a monic polynomial of degree n");
  if (c[0] == 0) throw Error(ErrorKind::kInvalidArgument, "polynomial has zero constant term");
  const std::uint64_t total = checked_space(ops, n * n);
  const auto q1 = mirabolic_group(ops, n);
  std::vector<Matrix> q1_inv;
  for (const auto& g : q1) q1_inv.push_back(ops.inverse(g));

  OrbitCensus census;
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < total; ++k) {
    Matrix x = ops.from_index(n, n, k);
    if (ops.charpoly(x) != c) continue;
    ++census.matrices;
    if (seen.count(k)) continue;
    std::unordered_set<std::uint64_t> orbit;
    for (std::size_t i = 0; i < q1.size(); ++i) orbit.insert(matrix_index(ops, ops.mul(q1[i], ops.mul(x, q1_inv[i]))));
    seen.insert(orbit.begin(), orbit.end());
    census.orbits[stratum_index(ops, x)].push_back(orbit.size());
  }
  for (auto& [m, sizes] : census.orbits) std::sort(sizes.rbegin(), sizes.rend());
  return census;
}

std::map<std::uint32_t, std::uint64_t> predicted_orbit_counts(const MatOps& ops, std::uint32_t n, const Poly& c) {
  if (c.size() != n + 1 || c.back() != 1) throw Error(ErrorKind::kInvalidArgument, "expected a monic polynomial of degree n");
  std::map<std::uint32_t, std::uint64_t> out;
  for (std::uint32_t m = 1; m <= n; ++m) {
    const std::uint32_t k = n - m;
    const std::uint64_t count_a = checked_space(ops, m);
    std::vector<Matrix> gl_e = k > 0 ? ops.general_linear_group(k) : std::vector<Matrix>{};
    for (std::uint64_t ia = 0; ia < count_a; ++ia) {
      const Poly at = ops.monic_poly(m, ia);
      auto [quo, rem] = ops.poly_divmod(c, at);
      if (std::any_of(rem.begin(), rem.end(), [](Code r) { return r != 0; })) continue;
      if (k == 0) {
        out[m] += 1;
        continue;
      }
      const Matrix cm = companion(ops, charpoly_a(at));
      // GL(E)-classes with characteristic polynomial quo.
      std::vector<Matrix> members;
      for (const auto& e : gl_e)
        if (ops.charpoly(e) == quo) members.push_back(e);
      std::unordered_set<std::uint64_t> classified;
      for (const auto& xe : members) {
        if (classified.count(matrix_index(ops, xe))) continue;
        std::vector<Matrix> centralizer;
        for (const auto& g : gl_e) {
          Matrix conj = ops.mul(g, ops.mul(xe, ops.inverse(g)));
          classified.insert(matrix_index(ops, conj));
          if (conj == xe) centralizer.push_back(g);
        }
        // Image of v -> C v - v x_E as flattened rows, reduced.
        const std::uint32_t dim = m * k;
        Matrix img(dim, dim);
        for (std::uint32_t b = 0; b < dim; ++b) {
          Matrix v(m, k);
          v(b / k, b % k) = 1;
          Matrix phi = ops.sub(ops.mul(cm, v), ops.mul(v, xe));
          for (std::uint32_t e = 0; e < dim; ++e) img(b, e) = phi.entries()[e];
        }
        std::vector<std::uint32_t> piv;
        Matrix basis = ops.rref(img, &piv);
        auto canonical = [&](Matrix y) {
          for (std::uint32_t r = 0; r < piv.size(); ++r) {
            const Code f = y.entries()[piv[r]];
            if (f == 0) continue;
            for (std::uint32_t e = 0; e < dim; ++e)
              y(e / k, e % k) = ops.sub(y(e / k, e % k), ops.mul(f, basis(r, e)));
          }
          return y;
        };
        std::vector<Matrix> ginv;
        for (const auto& g : centralizer) ginv.push_back(ops.inverse(g));
        std::unordered_set<std::uint64_t> reached;
        const std::uint64_t space = checked_space(ops, dim);
        std::uint64_t orbits = 0;
        for (std::uint64_t iy = 0; iy < space; ++iy) {
          Matrix y = canonical(ops.from_index(m, k, iy));
          if (reached.count(matrix_index(ops, y))) continue;
          ++orbits;
          for (const auto& gi : ginv) reached.insert(matrix_index(ops, canonical(ops.mul(y, gi))));
        }
        out[m] += orbits;
      }
    }
  }
  return out;
}

ParabolicClass parabolic_rank_classify(const MatOps& ops, const Matrix& x, std::uint32_t n1) {
  const std::uint32_t n = x.rows();
  if (!x.square() || n1 == 0 || n1 >= n) throw Error(ErrorKind::kInvalidArgument, "invalid block split");
  const std::uint32_t n2 = n - n1;
  const Matrix c = x.block(n1, 0, n2, n1);
  Matrix aug(n2, n1 + n2);
  aug.set_block(0, 0, c);
  aug.set_block(0, n1, Matrix::identity(n2));
  Matrix red = ops.rref(aug);
  const Matrix r = red.block(0, 0, n2, n1);
  const Matrix a = red.block(0, n1, n2, n2);
  std::vector<std::uint32_t> piv;
  ops.rref(r, &piv);
  const std::uint32_t rank = static_cast<std::uint32_t>(piv.size());
  const Matrix ker = ops.kernel(r);
  Matrix b(n1, n1);
  for (std::uint32_t i = 0; i < rank; ++i) b(piv[i], n1 - 1 - i) = 1;
  for (std::uint32_t f = 0; f < ker.cols(); ++f) b.set_block(0, f, ker.block(0, f, n1, 1));

  ParabolicClass out;
  out.rank = rank;
  out.l1 = ops.inverse(b);
  out.l2 = a;
  Matrix d(n, n);
  d.set_block(0, 0, out.l1);
  d.set_block(n1, n1, out.l2);
  out.normal = ops.mul(d, ops.mul(x, ops.inverse(d)));
  for (std::uint32_t i = 0; i < n2; ++i)
    for (std::uint32_t j = 0; j < n1; ++j) {
      const Code expect = (i < rank && j == n1 - 1 - i) ? 1 : 0;
      if (out.normal(n1 + i, j) != expect) throw Error(ErrorKind::kInvalidArgument, "rank normal form failed");
    }
  return out;
}

}  // namespace gammatrace
