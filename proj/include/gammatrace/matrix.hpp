#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gammatrace/field_tower.hpp"

namespace gammatrace {

/// Dense matrix of F_q codes, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::uint32_t rows, std::uint32_t cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0) {}
  Matrix(std::uint32_t rows, std::uint32_t cols, std::vector<Code> entries);
  static Matrix identity(std::uint32_t n);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  Code& operator()(std::uint32_t i, std::uint32_t j) { return a_[std::size_t(i) * cols_ + j]; }
  Code operator()(std::uint32_t i, std::uint32_t j) const { return a_[std::size_t(i) * cols_ + j]; }
  const std::vector<Code>& entries() const { return a_; }

  Matrix block(std::uint32_t r0, std::uint32_t c0, std::uint32_t nr, std::uint32_t nc) const;
  void set_block(std::uint32_t r0, std::uint32_t c0, const Matrix& b);

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool operator<(const Matrix& o) const;
  std::string to_string() const;

 private:
  std::uint32_t rows_ = 0, cols_ = 0;
  std::vector<Code> a_;
};

/// Polynomials over F_q as codes, lowest degree first.
using Poly = std::vector<Code>;

/// Linear algebra over the prime level of a tower.
class MatOps {
 public:
  explicit MatOps(const FieldTower& tower) : t_(&tower) {}
  const FieldTower& tower() const { return *t_; }
  std::uint64_t q() const { return t_->q(); }

  Code add(Code a, Code b) const { return t_->add(1, a, b); }
  Code sub(Code a, Code b) const { return t_->sub(1, a, b); }
  Code neg(Code a) const { return t_->neg(1, a); }
  Code mul(Code a, Code b) const { return t_->mul(1, a, b); }
  Code inv(Code a) const { return t_->inv(1, a); }

  Matrix add(const Matrix& a, const Matrix& b) const;
  Matrix sub(const Matrix& a, const Matrix& b) const;
  Matrix neg(const Matrix& a) const;
  Matrix mul(const Matrix& a, const Matrix& b) const;
  Matrix inverse(const Matrix& a) const;
  Matrix conjugate(const Matrix& g, const Matrix& x) const { return mul(mul(g, x), inverse(g)); }
  Code det(const Matrix& a) const;
  std::uint32_t rank(const Matrix& a) const;
  /// Reduced row echelon form and its pivot columns.
  Matrix rref(const Matrix& a, std::vector<std::uint32_t>* pivots = nullptr) const;
  /// Basis of {v : a v = 0}, as columns.
  Matrix kernel(const Matrix& a) const;
  bool invertible(const Matrix& a) const { return a.square() && rank(a) == a.rows(); }

  /// det(t I - a), monic, lowest degree first.
  Poly charpoly(const Matrix& a) const;

  Poly poly_mul(const Poly& a, const Poly& b) const;
  /// Quotient and remainder; b must be monic.
  std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) const;
  /// Monic polynomials of the given degree in index order (constant term fastest).
  Poly monic_poly(std::uint32_t degree, std::uint64_t index) const;

  /// Matrix with entries given by base-q digits of index, entry (0,0) fastest.
  Matrix from_index(std::uint32_t rows, std::uint32_t cols, std::uint64_t index) const;
  Matrix random(std::uint32_t rows, std::uint32_t cols, std::mt19937_64& rng) const;
  Matrix random_invertible(std::uint32_t n, std::mt19937_64& rng) const;
  /// Every element of GL(n, F_q) (caller bounds the size).
  std::vector<Matrix> general_linear_group(std::uint32_t n) const;

 private:
  const FieldTower* t_;
};

/// Coefficients a_1..a_n of t^n + a_1 t^{n-1} + ... + a_n from a low-first monic poly.
std::vector<Code> charpoly_a(const Poly& c);
/// Inverse of charpoly_a.
Poly poly_from_a(const std::vector<Code>& a);

}  // namespace gammatrace
