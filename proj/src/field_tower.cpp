#include "gammatrace/field_tower.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gammatrace/error.hpp"

namespace gammatrace {

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) throw Error(ErrorKind::kOverflow, "ipow overflow");
    r *= base;
  }
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_u64(a, b) * b;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomial arithmetic modulo a monic P over F_p, used only to screen
// candidate defining polynomials before the exhaustive table check.
using Poly = std::vector<std::uint64_t>;

Poly mulmod(const Poly& a, const Poly& b, const std::vector<std::uint32_t>& low, std::uint64_t p) {
  const std::size_t n = low.size();
  std::vector<std::uint64_t> prod(2 * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  // x^n = -sum low[i] x^i
  for (std::size_t k = 2 * n - 1; k >= n; --k) {
    std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (std::size_t i = 0; i < n; ++i)
      prod[k - n + i] = (prod[k - n + i] + (p - c) * low[i]) % p;
  }
  prod.resize(n);
  return prod;
}

Poly powmod_x(std::uint64_t e, const std::vector<std::uint32_t>& low, std::uint64_t p) {
  const std::size_t n = low.size();
  Poly result(n, 0), base(n, 0);
  result[0] = 1;
  if (n == 1) {
    base[0] = (p - low[0]) % p;
  } else {
    base[1] = 1;
  }
  while (e > 0) {
    if (e & 1) result = mulmod(result, base, low, p);
    base = mulmod(base, base, low, p);
    e >>= 1;
  }
  return result;
}

bool is_one(const Poly& a) {
  if (a[0] != 1) return false;
  return std::all_of(a.begin() + 1, a.end(), [](std::uint64_t c) { return c == 0; });
}

}  // namespace

FieldTower::FieldTower(std::uint32_t p, std::uint32_t f, std::uint32_t max_level,
                       std::uint64_t element_cap)
    : p_(p), f_(f) {
  if (!is_prime_u64(p)) throw Error(ErrorKind::kNotPrime, std::to_string(p) + " is not prime");
  if (f == 0 || max_level == 0) throw Error(ErrorKind::kInvalidArgument, "degree and max level must be positive");
  std::uint64_t total = 0;
  for (std::uint32_t m = 1; m <= max_level; ++m) {
    if (static_cast<double>(f) * m * std::log2(static_cast<double>(p)) > 31.5)
      throw Error(ErrorKind::kCapExceeded, "level " + std::to_string(m) + " does not fit in 32-bit codes");
    total += ipow(p, f * m);
    if (total > element_cap)
      throw Error(ErrorKind::kCapExceeded, "tower tables need " + std::to_string(total) +
                                               " elements, cap is " + std::to_string(element_cap));
  }
  q_ = ipow(p, f);
  pow_p_.resize(f * max_level + 1);
  for (std::uint32_t i = 0; i < pow_p_.size(); ++i) pow_p_[i] = ipow(p, i);
  conductor_ = p;
  levels_.reserve(max_level);
  for (std::uint32_t m = 1; m <= max_level; ++m) {
    build_level(m);
    conductor_ = lcm_u64(conductor_, order(m));
  }
}

const FieldTower::Level& FieldTower::level(std::uint32_t m) const {
  if (!has_level(m))
    throw Error(ErrorKind::kLevelMissing, "level " + std::to_string(m) + " not in tower (max " +
                                              std::to_string(levels_.size()) + ")");
  return levels_[m - 1];
}

Code FieldTower::raw_add(const Level& lv, Code a, Code b) const {
  if (p_ == 2) return a ^ b;
  Code out = 0;
  for (std::uint32_t i = 0; i < lv.degree && (a | b); ++i) {
    std::uint32_t da = a % p_, db = b % p_;
    a /= p_;
    b /= p_;
    std::uint32_t s = da + db;
    if (s >= p_) s -= p_;
    out += static_cast<Code>(s * pow_p_[i]);
  }
  return out;
}

Code FieldTower::raw_mul(const Level& lv, Code a, Code b) const {
  if (a == 0 || b == 0) return 0;
  const std::uint64_t ord = lv.size - 1;
  return lv.exp[(static_cast<std::uint64_t>(lv.log[a]) + lv.log[b]) % ord];
}

Code FieldTower::eval_poly_at(const Level& lv, const std::vector<std::uint32_t>& poly, Code y) const {
  // Horner on the monic polynomial x^n + sum poly[i] x^i.
  Code acc = 1;
  for (std::size_t i = poly.size(); i-- > 0;) {
    acc = raw_mul(lv, acc, y);
    acc = raw_add(lv, acc, from_fp(poly[i]));
  }
  return acc;
}

bool FieldTower::fill_exp_table(Level& lv) const {
  const std::uint64_t ord = lv.size - 1;
  lv.exp.assign(ord, 0);
  lv.log.assign(lv.size, UINT32_MAX);
  const std::uint32_t n = lv.degree;
  // Multiply by x in digit form: shift up, fold the top digit through P.
  std::vector<std::uint32_t> digits(n, 0);
  digits[0] = 1;
  for (std::uint64_t k = 0; k < ord; ++k) {
    Code code = 0;
    for (std::uint32_t i = 0; i < n; ++i) code += static_cast<Code>(digits[i] * pow_p_[i]);
    if (code == 0 || lv.log[code] != UINT32_MAX) return false;
    lv.exp[k] = code;
    lv.log[code] = static_cast<std::uint32_t>(k);
    std::uint32_t top = digits[n - 1];
    for (std::uint32_t i = n - 1; i > 0; --i) digits[i] = digits[i - 1];
    digits[0] = 0;
    if (top != 0) {
      for (std::uint32_t i = 0; i < n; ++i)
        digits[i] = static_cast<std::uint32_t>((digits[i] + static_cast<std::uint64_t>(p_ - top) * lv.poly[i]) % p_);
    }
  }
  // After q^n - 1 steps we must be back at 1.
  return std::all_of(digits.begin() + 1, digits.end(), [](std::uint32_t d) { return d == 0; }) && digits[0] == 1;
}

bool FieldTower::compatible_with_lower(std::uint32_t m, const Level& candidate) const {
  for (std::uint32_t a = 1; a < m; ++a) {
    if (m % a != 0) continue;
    const Level& low = levels_[a - 1];
    std::uint64_t e = (candidate.size - 1) / (low.size - 1);
    Code y = candidate.exp[e % (candidate.size - 1)];
    if (eval_poly_at(candidate, low.poly, y) != 0) return false;
  }
  return true;
}

void FieldTower::build_level(std::uint32_t m) {
  Level lv;
  lv.degree = f_ * m;
  lv.size = ipow(p_, lv.degree);
  const std::uint64_t ord = lv.size - 1;
  const auto factors = prime_factors(ord);
  const std::uint32_t n = lv.degree;
  lv.poly.assign(n, 0);
  const std::uint64_t candidates = ipow(p_, n);
  bool found = false;
  for (std::uint64_t idx = 0; idx < candidates && !found; ++idx) {
    // c_0 is the most significant digit of idx.
    std::uint64_t t = idx;
    for (std::uint32_t i = n; i-- > 0;) {
      lv.poly[i] = static_cast<std::uint32_t>(t % p_);
      t /= p_;
    }
    if (lv.poly[0] == 0) continue;
    if (!is_one(powmod_x(ord, lv.poly, p_))) continue;
    bool primitive = true;
    for (std::uint64_t r : factors) {
      if (is_one(powmod_x(ord / r, lv.poly, p_))) {
        primitive = false;
        break;
      }
    }
    if (!primitive) continue;
    if (!fill_exp_table(lv)) continue;
    if (!compatible_with_lower(m, lv)) continue;
    found = true;
  }
  if (!found)
    throw Error(ErrorKind::kInvalidArgument, "no compatible primitive polynomial at level " + std::to_string(m));

  lv.basis_trace.assign(n, 0);
  // Tr(x^i) = sum over Frobenius conjugates; computed once per basis vector.
  levels_.push_back(lv);
  Level& stored = levels_.back();
  for (std::uint32_t i = 0; i < n; ++i) {
    Code xi = static_cast<Code>(pow_p_[i]);
    Code acc = 0, cur = xi;
    for (std::uint32_t j = 0; j < n; ++j) {
      acc = raw_add(stored, acc, cur);
      // cur^p
      cur = stored.exp[(static_cast<std::uint64_t>(stored.log[cur]) * p_) % ord];
    }
    if (acc >= p_) throw Error(ErrorKind::kInvalidArgument, "trace left the prime field");
    stored.basis_trace[i] = acc;
  }
  stored.trace_of_log.assign(ord, 0);
  for (std::uint64_t k = 0; k < ord; ++k) {
    Code c = stored.exp[k];
    std::uint64_t s = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      s += static_cast<std::uint64_t>(c % p_) * stored.basis_trace[i];
      c /= p_;
    }
    stored.trace_of_log[k] = static_cast<std::uint8_t>(s % p_);
  }
}

Code FieldTower::add(std::uint32_t m, Code a, Code b) const { return raw_add(level(m), a, b); }

Code FieldTower::neg(std::uint32_t m, Code a) const {
  const Level& lv = level(m);
  if (p_ == 2) return a;
  Code out = 0;
  for (std::uint32_t i = 0; i < lv.degree && a; ++i) {
    std::uint32_t d = a % p_;
    a /= p_;
    if (d) out += static_cast<Code>((p_ - d) * pow_p_[i]);
  }
  return out;
}

Code FieldTower::sub(std::uint32_t m, Code a, Code b) const { return add(m, a, neg(m, b)); }

Code FieldTower::mul(std::uint32_t m, Code a, Code b) const { return raw_mul(level(m), a, b); }

Code FieldTower::inv(std::uint32_t m, Code a) const {
  const Level& lv = level(m);
  if (a == 0) throw Error(ErrorKind::kDivisionByZero, "inverse of zero");
  const std::uint64_t ord = lv.size - 1;
  return lv.exp[(ord - lv.log[a]) % ord];
}

Code FieldTower::div(std::uint32_t m, Code a, Code b) const { return mul(m, a, inv(m, b)); }

Code FieldTower::pow(std::uint32_t m, Code a, std::int64_t e) const {
  const Level& lv = level(m);
  if (a == 0) {
    if (e < 0) throw Error(ErrorKind::kDivisionByZero, "negative power of zero");
    return e == 0 ? 1 : 0;
  }
  const std::int64_t ord = static_cast<std::int64_t>(lv.size - 1);
  std::int64_t k = static_cast<std::int64_t>((static_cast<__int128>(lv.log[a]) * e) % ord);
  if (k < 0) k += ord;
  return lv.exp[static_cast<std::uint64_t>(k)];
}

std::uint64_t FieldTower::dlog(std::uint32_t m, Code a) const {
  const Level& lv = level(m);
  if (a == 0 || a >= lv.size) throw Error(ErrorKind::kInvalidArgument, "dlog of zero or out-of-range code");
  return lv.log[a];
}

Code FieldTower::exp(std::uint32_t m, std::uint64_t k) const {
  const Level& lv = level(m);
  return lv.exp[k % (lv.size - 1)];
}

std::uint64_t FieldTower::log_scale(std::uint32_t a, std::uint32_t b) const {
  if (b % a != 0) throw Error(ErrorKind::kInvalidArgument, "level " + std::to_string(a) + " does not divide " + std::to_string(b));
  return order(b) / order(a);
}

Code FieldTower::embed(std::uint32_t a, std::uint32_t b, Code x) const {
  std::uint64_t s = log_scale(a, b);
  if (x == 0) return 0;
  return exp(b, dlog(a, x) * s);
}

bool FieldTower::in_subfield(std::uint32_t b, std::uint32_t a, Code x) const {
  std::uint64_t s = log_scale(a, b);
  if (x == 0) return true;
  return dlog(b, x) % s == 0;
}

Code FieldTower::descend(std::uint32_t b, std::uint32_t a, Code x) const {
  std::uint64_t s = log_scale(a, b);
  if (x == 0) return 0;
  std::uint64_t k = dlog(b, x);
  if (k % s != 0)
    throw Error(ErrorKind::kInvalidArgument, "element not in subfield of level " + std::to_string(a));
  return exp(a, k / s);
}

Code FieldTower::frobenius(std::uint32_t m, Code x, std::uint32_t i) const {
  const Level& lv = level(m);
  if (x == 0) return 0;
  const std::uint64_t ord = lv.size - 1;
  std::uint64_t k = lv.log[x];
  for (std::uint32_t j = 0; j < i; ++j) k = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k) * q_) % ord);
  return lv.exp[k];
}

Code FieldTower::trace_to_fq(std::uint32_t m, Code x) const {
  Code acc = 0, cur = x;
  for (std::uint32_t i = 0; i < m; ++i) {
    acc = add(m, acc, cur);
    cur = frobenius(m, cur, 1);
  }
  return descend(m, 1, acc);
}

Code FieldTower::norm_to_fq(std::uint32_t m, Code x) const {
  if (x == 0) return 0;
  return exp(1, dlog(m, x));
}

std::uint32_t FieldTower::trace_to_fp(std::uint32_t m, Code x) const {
  if (x == 0) return 0;
  return trace_to_fp_of_log(m, dlog(m, x));
}

std::string FieldTower::element_to_string(std::uint32_t m, Code x) const {
  const Level& lv = level(m);
  if (lv.degree == 1) return std::to_string(x);
  std::ostringstream os;
  bool first = true;
  for (std::uint32_t i = lv.degree; i-- > 0;) {
    std::uint32_t d = static_cast<std::uint32_t>((x / pow_p_[i]) % p_);
    if (d == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0 || d != 1) os << d;
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

std::string FieldTower::describe_json() const {
  std::ostringstream os;
  os << "{\"p\":" << p_ << ",\"f\":" << f_ << ",\"levels\":[";
  for (std::uint32_t m = 1; m <= max_level(); ++m) {
    const Level& lv = levels_[m - 1];
    if (m > 1) os << ",";
    os << "{\"level\":" << m << ",\"size\":" << lv.size << ",\"poly_low_first\":[";
    for (std::size_t i = 0; i < lv.poly.size(); ++i) os << (i ? "," : "") << lv.poly[i];
    os << ",1]}";
  }
  os << "],\"conductor\":" << conductor_ << "}";
  return os.str();
}

}  // namespace gammatrace
