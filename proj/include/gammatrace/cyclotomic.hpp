#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gammatrace {

/// Phi_N together with the data needed to reduce exponent vectors modulo it.
struct CyclotomicRing {
  std::uint64_t n = 1;
  std::uint64_t phi = 1;
  // Phi_N(x) = x^phi + sum over (k, c) of c x^k; only nonzero terms are kept.
  std::vector<std::pair<std::uint32_t, std::int64_t>> low_terms;

  /// Shared, lazily built instance; thread-safe.
  static const CyclotomicRing& get(std::uint64_t n);
};

std::uint64_t euler_phi(std::uint64_t n);
/// Integer coefficients of Phi_N, low degree first, monic.
std::vector<std::int64_t> cyclotomic_polynomial(std::uint64_t n);

/// Exact element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^{phi(N)-1}.
///
/// Each value carries its own N; binary operations promote both operands to
/// lcm of the two conductors, so equality and zero tests are exact regardless
/// of where the operands were created.
class CycNum {
 public:
  CycNum();
  CycNum(long v);  // NOLINT: integers convert implicitly
  static CycNum rational(const mpq_class& v);
  /// zeta_N^k.
  static CycNum root(std::uint64_t n, std::int64_t k);
  /// sum_k counts[k] zeta_N^k with counts indexed by exponent mod N.
  static CycNum from_counts(std::uint64_t n, const std::vector<std::int64_t>& counts);
  static CycNum from_counts(std::uint64_t n, const std::vector<mpz_class>& counts,
                            const mpz_class& denominator = 1);

  std::uint64_t conductor() const { return n_; }
  const std::vector<mpq_class>& coeffs() const { return c_; }

  bool is_zero() const;
  bool operator==(const CycNum& o) const;
  bool operator!=(const CycNum& o) const { return !(*this == o); }

  CycNum operator+(const CycNum& o) const;
  CycNum operator-(const CycNum& o) const;
  CycNum operator-() const;
  CycNum operator*(const CycNum& o) const;
  CycNum operator/(const CycNum& o) const { return *this * o.inverse(); }
  CycNum& operator+=(const CycNum& o) { return *this = *this + o; }
  CycNum& operator-=(const CycNum& o) { return *this = *this - o; }
  CycNum& operator*=(const CycNum& o) { return *this = *this * o; }

  CycNum scaled(const mpq_class& s) const;
  /// this * zeta_N^k for the value's own conductor N.
  CycNum times_root(std::int64_t k) const;
  /// The same number written in Q(zeta_M); N must divide M.
  CycNum lifted(std::uint64_t m) const;
  /// zeta -> zeta^{-1}.
  CycNum conj() const { return galois(n_ - 1); }
  /// zeta -> zeta^a for a coprime to N.
  CycNum galois(std::uint64_t a) const;
  CycNum inverse() const;
  CycNum pow(unsigned e) const;

  std::complex<double> to_complex() const;
  std::optional<mpq_class> as_rational() const;
  std::vector<std::string> coefficient_strings() const;
  std::string to_string() const;

 private:
  CycNum(std::uint64_t n, std::vector<mpq_class> c) : n_(n), c_(std::move(c)) {}
  void common_denominator(mpz_class& den, std::vector<mpz_class>& nums) const;

  std::uint64_t n_;
  std::vector<mpq_class> c_;
};

/// Integer combination sum_k c_k zeta_N^k kept unreduced. Cheap to accumulate
/// and convolve; converted to CycNum for zero tests and rational scaling.
class RootSum {
 public:
  explicit RootSum(std::uint64_t n = 1) : n_(n), counts_(n, 0) {}
  static RootSum constant(std::uint64_t n, std::int64_t v) {
    RootSum r(n);
    r.counts_[0] = v;
    return r;
  }

  std::uint64_t conductor() const { return n_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  void add(std::int64_t k, std::int64_t c = 1) {
    std::int64_t n = static_cast<std::int64_t>(n_);
    k %= n;
    if (k < 0) k += n;
    counts_[static_cast<std::size_t>(k)] += c;
  }
  RootSum& operator+=(const RootSum& o);
  RootSum& operator-=(const RootSum& o);
  RootSum operator+(const RootSum& o) const {
    RootSum r = *this;
    return r += o;
  }
  RootSum operator-(const RootSum& o) const {
    RootSum r = *this;
    return r -= o;
  }
  RootSum operator*(const RootSum& o) const;
  RootSum scaled(std::int64_t s) const;
  RootSum times_root(std::int64_t k) const;
  RootSum lifted(std::uint64_t m) const;
  RootSum conj() const;
  RootSum pow(unsigned e) const;

  CycNum to_cycnum() const;
  bool is_zero() const { return to_cycnum().is_zero(); }
  std::complex<double> to_complex() const;

 private:
  std::uint64_t n_;
  std::vector<std::int64_t> counts_;
};

inline std::ostream& operator<<(std::ostream& os, const CycNum& z) { return os << z.to_string(); }

}  // namespace gammatrace
