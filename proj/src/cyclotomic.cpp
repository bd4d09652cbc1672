#include "gammatrace/cyclotomic.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "gammatrace/error.hpp"
#include "gammatrace/field_tower.hpp"

namespace gammatrace {

std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t result = n;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      while (n % d == 0) n /= d;
      result -= result / d;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

namespace {

int mobius(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      n /= d;
      if (n % d == 0) return 0;
      mu = -mu;
    }
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::kOverflow, "cyclotomic polynomial coefficient overflow");
  return r;
}

// Reduces v (indexed by exponent) modulo Phi_N in place, leaving phi entries.
// Returns false on int64 overflow, leaving v unspecified.
bool reduce_int64(const CyclotomicRing& ring, std::vector<std::int64_t>& v) {
  const std::size_t phi = ring.phi;
  for (std::size_t i = v.size(); i-- > phi;) {
    const std::int64_t c = v[i];
    if (c == 0) continue;
    v[i] = 0;
    for (const auto& [k, a] : ring.low_terms) {
      std::int64_t prod, res;
      if (__builtin_mul_overflow(c, a, &prod)) return false;
      if (__builtin_sub_overflow(v[i - phi + k], prod, &res)) return false;
      v[i - phi + k] = res;
    }
  }
  v.resize(phi);
  return true;
}

void reduce_mpz(const CyclotomicRing& ring, std::vector<mpz_class>& v) {
  const std::size_t phi = ring.phi;
  for (std::size_t i = v.size(); i-- > phi;) {
    if (v[i] == 0) continue;
    const mpz_class c = v[i];
    v[i] = 0;
    for (const auto& [k, a] : ring.low_terms) v[i - phi + k] -= c * a;
  }
  v.resize(phi);
}

std::vector<mpq_class> finish(std::vector<mpz_class>& nums, const mpz_class& den) {
  std::vector<mpq_class> out(nums.size());
  for (std::size_t i = 0; i < nums.size(); ++i) {
    out[i] = mpq_class(nums[i], den);
    out[i].canonicalize();
  }
  return out;
}

bool fits_int32(const mpz_class& z) { return mpz_cmpabs_ui(z.get_mpz_t(), 0x7fffffffUL) <= 0; }

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "cyclotomic polynomial of order 0");
  std::vector<std::int64_t> poly{1};
  std::vector<std::uint64_t> divide_by;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    int mu = mobius(n / d);
    if (mu == 1) {
      std::vector<std::int64_t> next(poly.size() + d, 0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i + d] = checked_add(next[i + d], poly[i]);
        next[i] = checked_add(next[i], -poly[i]);
      }
      poly = std::move(next);
    } else if (mu == -1) {
      divide_by.push_back(d);
    }
  }
  for (std::uint64_t d : divide_by) {
    // poly = quot * (x^d - 1), exactly.
    std::vector<std::int64_t> rem = poly;
    std::vector<std::int64_t> quot(poly.size() - d, 0);
    for (std::size_t i = rem.size(); i-- > d;) {
      const std::int64_t c = rem[i];
      quot[i - d] = c;
      rem[i] = 0;
      rem[i - d] = checked_add(rem[i - d], c);
    }
    for (std::size_t i = 0; i < d; ++i)
      if (rem[i] != 0) throw Error(ErrorKind::kInvalidArgument, "inexact cyclotomic division");
    poly = std::move(quot);
  }
  return poly;
}

const CyclotomicRing& CyclotomicRing::get(std::uint64_t n) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::unique_ptr<CyclotomicRing>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto ring = std::make_unique<CyclotomicRing>();
  ring->n = n;
  auto poly = cyclotomic_polynomial(n);
  ring->phi = poly.size() - 1;
  for (std::size_t k = 0; k + 1 < poly.size(); ++k)
    if (poly[k] != 0) ring->low_terms.emplace_back(static_cast<std::uint32_t>(k), poly[k]);
  const CyclotomicRing& ref = *ring;
  cache.emplace(n, std::move(ring));
  return ref;
}

CycNum::CycNum() : n_(1), c_(1) {}

CycNum::CycNum(long v) : n_(1), c_(1) { c_[0] = v; }

CycNum CycNum::rational(const mpq_class& v) {
  CycNum r;
  r.c_[0] = v;
  return r;
}

CycNum CycNum::root(std::uint64_t n, std::int64_t k) {
  std::vector<std::int64_t> counts(n, 0);
  std::int64_t nn = static_cast<std::int64_t>(n);
  counts[static_cast<std::size_t>(((k % nn) + nn) % nn)] = 1;
  return from_counts(n, counts);
}

CycNum CycNum::from_counts(std::uint64_t n, const std::vector<std::int64_t>& counts) {
  const CyclotomicRing& ring = CyclotomicRing::get(n);
  std::vector<std::int64_t> v = counts;
  v.resize(std::max<std::size_t>(v.size(), ring.phi), 0);
  if (reduce_int64(ring, v)) {
    std::vector<mpq_class> c(ring.phi);
    for (std::size_t i = 0; i < ring.phi; ++i) c[i] = static_cast<long>(v[i]);
    return CycNum(n, std::move(c));
  }
  std::vector<mpz_class> big(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) big[i] = static_cast<long>(counts[i]);
  return from_counts(n, big, 1);
}

CycNum CycNum::from_counts(std::uint64_t n, const std::vector<mpz_class>& counts, const mpz_class& denominator) {
  const CyclotomicRing& ring = CyclotomicRing::get(n);
  std::vector<mpz_class> v = counts;
  v.resize(std::max<std::size_t>(v.size(), ring.phi), 0);
  reduce_mpz(ring, v);
  return CycNum(n, finish(v, denominator));
}

bool CycNum::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

bool CycNum::operator==(const CycNum& o) const {
  if (n_ == o.n_) return c_ == o.c_;
  return (*this - o).is_zero();
}

CycNum CycNum::operator+(const CycNum& o) const {
  if (n_ != o.n_) {
    std::uint64_t l = lcm_u64(n_, o.n_);
    return lifted(l) + o.lifted(l);
  }
  std::vector<mpq_class> c = c_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
  return CycNum(n_, std::move(c));
}

CycNum CycNum::operator-() const {
  std::vector<mpq_class> c = c_;
  for (auto& x : c) x = -x;
  return CycNum(n_, std::move(c));
}

CycNum CycNum::operator-(const CycNum& o) const { return *this + (-o); }

void CycNum::common_denominator(mpz_class& den, std::vector<mpz_class>& nums) const {
  den = 1;
  for (const auto& c : c_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  nums.resize(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) nums[i] = c_[i].get_num() * (den / c_[i].get_den());
}

CycNum CycNum::operator*(const CycNum& o) const {
  if (n_ != o.n_) {
    std::uint64_t l = lcm_u64(n_, o.n_);
    return lifted(l) * o.lifted(l);
  }
  const CyclotomicRing& ring = CyclotomicRing::get(n_);
  mpz_class da, db;
  std::vector<mpz_class> a, b;
  common_denominator(da, a);
  o.common_denominator(db, b);
  const mpz_class den = da * db;
  const std::size_t phi = ring.phi;
  bool small = true;
  for (const auto& x : a) small = small && fits_int32(x);
  for (const auto& x : b) small = small && fits_int32(x);
  if (small && phi < (std::size_t{1} << 28)) {
    std::vector<std::int64_t> ai(phi), bi(phi), prod(2 * phi - 1, 0);
    for (std::size_t i = 0; i < phi; ++i) {
      ai[i] = a[i].get_si();
      bi[i] = b[i].get_si();
    }
    bool ok = true;
    for (std::size_t i = 0; i < phi && ok; ++i) {
      if (ai[i] == 0) continue;
      for (std::size_t j = 0; j < phi; ++j) {
        if (bi[j] == 0) continue;
        std::int64_t t;
        if (__builtin_mul_overflow(ai[i], bi[j], &t) || __builtin_add_overflow(prod[i + j], t, &prod[i + j])) {
          ok = false;
          break;
        }
      }
    }
    if (ok && reduce_int64(ring, prod)) {
      std::vector<mpz_class> nums(phi);
      for (std::size_t i = 0; i < phi; ++i) nums[i] = static_cast<long>(prod[i]);
      return CycNum(n_, finish(nums, den));
    }
  }
  std::vector<mpz_class> prod(2 * phi - 1, 0);
  for (std::size_t i = 0; i < phi; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < phi; ++j)
      if (b[j] != 0) prod[i + j] += a[i] * b[j];
  }
  reduce_mpz(ring, prod);
  return CycNum(n_, finish(prod, den));
}

CycNum CycNum::scaled(const mpq_class& s) const {
  std::vector<mpq_class> c = c_;
  for (auto& x : c) x *= s;
  return CycNum(n_, std::move(c));
}

CycNum CycNum::times_root(std::int64_t k) const {
  mpz_class den;
  std::vector<mpz_class> nums;
  common_denominator(den, nums);
  const std::int64_t n = static_cast<std::int64_t>(n_);
  std::int64_t shift = ((k % n) + n) % n;
  std::vector<mpz_class> v(n_, 0);
  for (std::size_t i = 0; i < nums.size(); ++i)
    if (nums[i] != 0) v[(i + static_cast<std::size_t>(shift)) % n_] += nums[i];
  return from_counts(n_, v, den);
}

CycNum CycNum::lifted(std::uint64_t m) const {
  if (m == n_) return *this;
  if (m % n_ != 0)
    throw Error(ErrorKind::kInvalidArgument, "cannot lift conductor " + std::to_string(n_) + " to " + std::to_string(m));
  mpz_class den;
  std::vector<mpz_class> nums;
  common_denominator(den, nums);
  const std::uint64_t step = m / n_;
  std::vector<mpz_class> v(m, 0);
  for (std::size_t i = 0; i < nums.size(); ++i) v[i * step] = nums[i];
  return from_counts(m, v, den);
}

CycNum CycNum::galois(std::uint64_t a) const {
  if (n_ > 1 && gcd_u64(a % n_, n_) != 1)
    throw Error(ErrorKind::kInvalidArgument, "galois exponent not a unit");
  mpz_class den;
  std::vector<mpz_class> nums;
  common_denominator(den, nums);
  std::vector<mpz_class> v(n_, 0);
  for (std::size_t i = 0; i < nums.size(); ++i)
    if (nums[i] != 0) v[(i * (a % n_)) % n_] += nums[i];
  return from_counts(n_, v, den);
}

CycNum CycNum::inverse() const {
  if (is_zero()) throw Error(ErrorKind::kDivisionByZero, "inverse of zero cyclotomic number");
  if (auto r = as_rational()) return rational(1 / *r);
  CycNum others(1L);
  for (std::uint64_t a = 2; a < n_; ++a)
    if (gcd_u64(a, n_) == 1) others = others * galois(a);
  CycNum norm = *this * others;
  auto nr = norm.as_rational();
  if (!nr) throw Error(ErrorKind::kInvalidArgument, "norm is not rational");
  return others.scaled(1 / *nr);
}

CycNum CycNum::pow(unsigned e) const {
  CycNum result(1L), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

std::complex<double> CycNum::to_complex() const {
  std::complex<double> z = 0;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_);
    z += c_[k].get_d() * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return z;
}

std::optional<mpq_class> CycNum::as_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return std::nullopt;
  return c_[0];
}

std::vector<std::string> CycNum::coefficient_strings() const {
  std::vector<std::string> out;
  out.reserve(c_.size());
  for (const auto& c : c_) out.push_back(c.get_str());
  return out;
}

std::string CycNum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] == 0) continue;
    if (!first) os << (c_[k] > 0 ? " + " : " - ");
    else if (c_[k] < 0) os << "-";
    first = false;
    mpq_class a = abs(c_[k]);
    if (k == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << "z" << n_ << "^" << k;
    }
  }
  if (first) os << "0";
  return os.str();
}

RootSum& RootSum::operator+=(const RootSum& o) {
  if (o.n_ != n_) {
    std::uint64_t l = lcm_u64(n_, o.n_);
    *this = lifted(l);
    return *this += o.lifted(l);
  }
  for (std::size_t i = 0; i < n_; ++i) counts_[i] += o.counts_[i];
  return *this;
}

RootSum& RootSum::operator-=(const RootSum& o) { return *this += o.scaled(-1); }

RootSum RootSum::operator*(const RootSum& o) const {
  if (o.n_ != n_) {
    std::uint64_t l = lcm_u64(n_, o.n_);
    return lifted(l) * o.lifted(l);
  }
  std::vector<std::pair<std::size_t, std::int64_t>> b;
  for (std::size_t j = 0; j < n_; ++j)
    if (o.counts_[j] != 0) b.emplace_back(j, o.counts_[j]);
  RootSum r(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::int64_t a = counts_[i];
    if (a == 0) continue;
    for (const auto& [j, c] : b) {
      std::size_t k = i + j;
      if (k >= n_) k -= n_;
      std::int64_t t;
      if (__builtin_mul_overflow(a, c, &t) || __builtin_add_overflow(r.counts_[k], t, &r.counts_[k]))
        throw Error(ErrorKind::kOverflow, "root sum product overflow");
    }
  }
  return r;
}

RootSum RootSum::scaled(std::int64_t s) const {
  RootSum r = *this;
  for (auto& c : r.counts_) c *= s;
  return r;
}

RootSum RootSum::times_root(std::int64_t k) const {
  RootSum r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (counts_[i] != 0) r.add(static_cast<std::int64_t>(i) + k, counts_[i]);
  return r;
}

RootSum RootSum::lifted(std::uint64_t m) const {
  if (m == n_) return *this;
  if (m % n_ != 0) throw Error(ErrorKind::kInvalidArgument, "cannot lift root sum");
  RootSum r(m);
  const std::uint64_t step = m / n_;
  for (std::size_t i = 0; i < n_; ++i) r.counts_[i * step] = counts_[i];
  return r;
}

RootSum RootSum::conj() const {
  RootSum r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (counts_[i] != 0) r.counts_[(n_ - i) % n_] = counts_[i];
  return r;
}

RootSum RootSum::pow(unsigned e) const {
  RootSum result = constant(n_, 1), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

CycNum RootSum::to_cycnum() const {
  // Write the sum in the smallest cyclotomic field its exponents allow.
  std::uint64_t g = n_;
  for (std::size_t i = 0; i < n_ && g > 1; ++i)
    if (counts_[i] != 0) g = gcd_u64(g, i);
  if (g == n_) return CycNum(static_cast<long>(counts_[0]));
  const std::uint64_t m = n_ / g;
  std::vector<std::int64_t> v(m, 0);
  for (std::size_t i = 0; i < n_; i += g) v[i / g] = counts_[i];
  return CycNum::from_counts(m, v);
}

std::complex<double> RootSum::to_complex() const {
  std::complex<double> z = 0;
  for (std::size_t k = 0; k < n_; ++k) {
    if (counts_[k] == 0) continue;
    double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_);
    z += static_cast<double>(counts_[k]) * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return z;
}

}  // namespace gammatrace
