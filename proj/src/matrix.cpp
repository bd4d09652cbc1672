#include "gammatrace/matrix.hpp"

#include <algorithm>
#include <sstream>

#include "gammatrace/error.hpp"

namespace gammatrace {

Matrix::Matrix(std::uint32_t rows, std::uint32_t cols, std::vector<Code> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != std::size_t(rows) * cols) throw Error(ErrorKind::kInvalidArgument, "matrix entry count mismatch");
}

Matrix Matrix::identity(std::uint32_t n) {
  Matrix m(n, n);
  for (std::uint32_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::block(std::uint32_t r0, std::uint32_t c0, std::uint32_t nr, std::uint32_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::kInvalidArgument, "block out of range");
  Matrix b(nr, nc);
  for (std::uint32_t i = 0; i < nr; ++i)
    for (std::uint32_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::uint32_t r0, std::uint32_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw Error(ErrorKind::kInvalidArgument, "block out of range");
  for (std::uint32_t i = 0; i < b.rows(); ++i)
    for (std::uint32_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

bool Matrix::operator<(const Matrix& o) const {
  if (rows_ != o.rows_) return rows_ < o.rows_;
  if (cols_ != o.cols_) return cols_ < o.cols_;
  return a_ < o.a_;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::uint32_t i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (std::uint32_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

Matrix MatOps::add(const Matrix& a, const Matrix& b) const {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::kInvalidArgument, "shape mismatch in add");
  Matrix c(a.rows(), a.cols());
  for (std::uint32_t i = 0; i < a.rows(); ++i)
    for (std::uint32_t j = 0; j < a.cols(); ++j) c(i, j) = add(a(i, j), b(i, j));
  return c;
}

Matrix MatOps::sub(const Matrix& a, const Matrix& b) const { return add(a, neg(b)); }

Matrix MatOps::neg(const Matrix& a) const {
  Matrix c(a.rows(), a.cols());
  for (std::uint32_t i = 0; i < a.rows(); ++i)
    for (std::uint32_t j = 0; j < a.cols(); ++j) c(i, j) = neg(a(i, j));
  return c;
}

Matrix MatOps::mul(const Matrix& a, const Matrix& b) const {
  if (a.cols() != b.rows()) throw Error(ErrorKind::kInvalidArgument, "shape mismatch in mul");
  Matrix c(a.rows(), b.cols());
  for (std::uint32_t i = 0; i < a.rows(); ++i)
    for (std::uint32_t k = 0; k < a.cols(); ++k) {
      const Code aik = a(i, k);
      if (aik == 0) continue;
      for (std::uint32_t j = 0; j < b.cols(); ++j) c(i, j) = add(c(i, j), mul(aik, b(k, j)));
    }
  return c;
}

Matrix MatOps::rref(const Matrix& a, std::vector<std::uint32_t>* pivots) const {
  Matrix m = a;
  std::vector<std::uint32_t> piv;
  std::uint32_t row = 0;
  for (std::uint32_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::uint32_t p = row;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::uint32_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    const Code s = inv(m(row, c));
    for (std::uint32_t j = 0; j < m.cols(); ++j) m(row, j) = mul(m(row, j), s);
    for (std::uint32_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, c) == 0) continue;
      const Code f = m(i, c);
      for (std::uint32_t j = 0; j < m.cols(); ++j) m(i, j) = sub(m(i, j), mul(f, m(row, j)));
    }
    piv.push_back(c);
    ++row;
  }
  if (pivots) *pivots = std::move(piv);
  return m;
}

std::uint32_t MatOps::rank(const Matrix& a) const {
  std::vector<std::uint32_t> piv;
  rref(a, &piv);
  return static_cast<std::uint32_t>(piv.size());
}

Matrix MatOps::kernel(const Matrix& a) const {
  std::vector<std::uint32_t> piv;
  Matrix r = rref(a, &piv);
  std::vector<std::uint32_t> free;
  for (std::uint32_t c = 0, k = 0; c < a.cols(); ++c) {
    if (k < piv.size() && piv[k] == c) {
      ++k;
      continue;
    }
    free.push_back(c);
  }
  Matrix ker(a.cols(), static_cast<std::uint32_t>(free.size()));
  for (std::uint32_t f = 0; f < free.size(); ++f) {
    ker(free[f], f) = 1;
    for (std::uint32_t k = 0; k < piv.size(); ++k) ker(piv[k], f) = neg(r(k, free[f]));
  }
  return ker;
}

Matrix MatOps::inverse(const Matrix& a) const {
  if (!a.square()) throw Error(ErrorKind::kInvalidArgument, "inverse of non-square matrix");
  const std::uint32_t n = a.rows();
  Matrix aug(n, 2 * n);
  aug.set_block(0, 0, a);
  aug.set_block(0, n, Matrix::identity(n));
  std::vector<std::uint32_t> piv;
  Matrix r = rref(aug, &piv);
  if (piv.size() < n || piv[n - 1] != n - 1) throw Error(ErrorKind::kDivisionByZero, "matrix is singular");
  return r.block(0, n, n, n);
}

Code MatOps::det(const Matrix& a) const {
  if (!a.square()) throw Error(ErrorKind::kInvalidArgument, "det of non-square matrix");
  Matrix m = a;
  const std::uint32_t n = m.rows();
  Code d = 1;
  for (std::uint32_t c = 0; c < n; ++c) {
    std::uint32_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::uint32_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = neg(d);
    }
    d = mul(d, m(c, c));
    const Code s = inv(m(c, c));
    for (std::uint32_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      const Code f = mul(m(i, c), s);
      for (std::uint32_t j = c; j < n; ++j) m(i, j) = sub(m(i, j), mul(f, m(c, j)));
    }
  }
  return d;
}

Poly MatOps::charpoly(const Matrix& a) const {
  if (!a.square()) throw Error(ErrorKind::kInvalidArgument, "charpoly of non-square matrix");
  const std::uint32_t n = a.rows();
  Matrix h = a;
  // Similarity reduction to upper Hessenberg form.
  for (std::uint32_t j = 0; j + 2 < n; ++j) {
    std::uint32_t p = j + 1;
    while (p < n && h(p, j) == 0) ++p;
    if (p == n) continue;
    if (p != j + 1) {
      for (std::uint32_t k = 0; k < n; ++k) std::swap(h(p, k), h(j + 1, k));
      for (std::uint32_t k = 0; k < n; ++k) std::swap(h(k, p), h(k, j + 1));
    }
    const Code s = inv(h(j + 1, j));
    for (std::uint32_t i = j + 2; i < n; ++i) {
      if (h(i, j) == 0) continue;
      const Code f = mul(h(i, j), s);
      for (std::uint32_t k = 0; k < n; ++k) h(i, k) = sub(h(i, k), mul(f, h(j + 1, k)));
      for (std::uint32_t k = 0; k < n; ++k) h(k, j + 1) = add(h(k, j + 1), mul(f, h(k, i)));
    }
  }
  // p_k = (t - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
  std::vector<Poly> p(n + 1);
  p[0] = {1};
  for (std::uint32_t k = 1; k <= n; ++k) {
    Poly cur = poly_mul(p[k - 1], Poly{neg(h(k - 1, k - 1)), 1});
    Code prod = 1;
    for (std::uint32_t i = k - 1; i-- > 0;) {
      prod = mul(prod, h(i + 1, i));
      const Code coef = mul(h(i, k - 1), prod);
      if (coef == 0) continue;
      for (std::size_t d = 0; d < p[i].size(); ++d) cur[d] = sub(cur[d], mul(coef, p[i][d]));
    }
    p[k] = std::move(cur);
  }
  return p[n];
}

Poly MatOps::poly_mul(const Poly& a, const Poly& b) const {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = add(c[i + j], mul(a[i], b[j]));
  return c;
}

std::pair<Poly, Poly> MatOps::poly_divmod(const Poly& a, const Poly& b) const {
  if (b.empty() || b.back() != 1) throw Error(ErrorKind::kInvalidArgument, "divisor must be monic");
  Poly r = a;
  if (r.size() < b.size()) return {Poly{0}, r};
  Poly quo(r.size() - b.size() + 1, 0);
  for (std::size_t k = quo.size(); k-- > 0;) {
    const Code c = r[k + b.size() - 1];
    quo[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[k + j] = sub(r[k + j], mul(c, b[j]));
  }
  r.resize(b.size() - 1);
  return {quo, r};
}

Poly MatOps::monic_poly(std::uint32_t degree, std::uint64_t index) const {
  Poly p(degree + 1, 0);
  p[degree] = 1;
  for (std::uint32_t i = 0; i < degree; ++i) {
    p[i] = static_cast<Code>(index % q());
    index /= q();
  }
  return p;
}

Matrix MatOps::from_index(std::uint32_t rows, std::uint32_t cols, std::uint64_t index) const {
  Matrix m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) {
      m(i, j) = static_cast<Code>(index % q());
      index /= q();
    }
  return m;
}

Matrix MatOps::random(std::uint32_t rows, std::uint32_t cols, std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::uint64_t> dist(0, q() - 1);
  Matrix m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) m(i, j) = static_cast<Code>(dist(rng));
  return m;
}

Matrix MatOps::random_invertible(std::uint32_t n, std::mt19937_64& rng) const {
  while (true) {
    Matrix m = random(n, n, rng);
    if (invertible(m)) return m;
  }
}

std::vector<Matrix> MatOps::general_linear_group(std::uint32_t n) const {
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n * n; ++i) {
    total *= q();
    if (total > (1ull << 24)) throw Error(ErrorKind::kCapExceeded, "matrix space too large to enumerate");
  }
  std::vector<Matrix> out;
  for (std::uint64_t k = 0; k < total; ++k) {
    Matrix m = from_index(n, n, k);
    if (invertible(m)) out.push_back(std::move(m));
  }
  return out;
}

std::vector<Code> charpoly_a(const Poly& c) {
  const std::size_t n = c.size() - 1;
  std::vector<Code> a(n);
  for (std::size_t i = 1; i <= n; ++i) a[i - 1] = c[n - i];
  return a;
}

Poly poly_from_a(const std::vector<Code>& a) {
  const std::size_t n = a.size();
  Poly c(n + 1, 0);
  c[n] = 1;
  for (std::size_t i = 1; i <= n; ++i) c[n - i] = a[i - 1];
  return c;
}

}  // namespace gammatrace
