#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gammatrace {

// An element of a level is encoded by its coefficient vector over F_p in the
// polynomial basis 1, x, ..., x^{n-1}, packed as base-p digits (coefficient of
// x^i is digit i). Zero is code 0 and one is code 1 at every level.
using Code = std::uint32_t;

inline constexpr std::uint64_t kDefaultElementCap = std::uint64_t{1} << 24;

std::uint64_t ipow(std::uint64_t base, unsigned exp);
std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);
std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);
bool is_prime_u64(std::uint64_t n);

/// Compatible finite fields F_{q^m}, m = 1..M, with q = p^f.
///
/// Each level is F_p[x]/(P_m) with P_m primitive, so x itself generates the
/// multiplicative group and discrete logs are relative to x. P_m is the
/// smallest monic primitive polynomial (coefficient tuple (c_0, ..., c_{n-1})
/// compared lexicographically, c_0 first) such that x^{(q^m-1)/(q^a-1)} is a
/// root of P_a for every level a dividing m. That root condition makes the
/// embedding F_{q^a} -> F_{q^m} a plain rescaling of discrete logs.
class FieldTower {
 public:
  FieldTower(std::uint32_t p, std::uint32_t f, std::uint32_t max_level,
             std::uint64_t element_cap = kDefaultElementCap);

  std::uint32_t p() const { return p_; }
  std::uint32_t f() const { return f_; }
  std::uint64_t q() const { return q_; }
  std::uint32_t max_level() const { return static_cast<std::uint32_t>(levels_.size()); }
  bool has_level(std::uint32_t m) const { return m >= 1 && m <= levels_.size(); }

  std::uint64_t size(std::uint32_t m) const { return level(m).size; }
  /// q^m - 1, the order of the multiplicative group at level m.
  std::uint64_t order(std::uint32_t m) const { return level(m).size - 1; }
  std::uint32_t degree_over_fp(std::uint32_t m) const { return level(m).degree; }
  /// Low-degree-first coefficients c_0..c_{n-1} of the monic defining polynomial.
  const std::vector<std::uint32_t>& defining_poly(std::uint32_t m) const { return level(m).poly; }

  /// lcm(p, q^m - 1 for all m): every character value of every level lives in
  /// the N-th cyclotomic field for this N.
  std::uint64_t conductor() const { return conductor_; }

  Code add(std::uint32_t m, Code a, Code b) const;
  Code sub(std::uint32_t m, Code a, Code b) const;
  Code neg(std::uint32_t m, Code a) const;
  Code mul(std::uint32_t m, Code a, Code b) const;
  Code inv(std::uint32_t m, Code a) const;
  Code div(std::uint32_t m, Code a, Code b) const;
  Code pow(std::uint32_t m, Code a, std::int64_t e) const;
  /// Element of the prime field, c in [0, p).
  Code from_fp(std::uint32_t c) const { return c % p_; }

  /// Discrete log relative to the level generator; throws on zero.
  std::uint64_t dlog(std::uint32_t m, Code a) const;
  Code exp(std::uint32_t m, std::uint64_t k) const;
  Code generator(std::uint32_t m) const { return exp(m, 1); }

  /// Image of a level-a element in level b (a | b).
  Code embed(std::uint32_t a, std::uint32_t b, Code x) const;
  bool in_subfield(std::uint32_t b, std::uint32_t a, Code x) const;
  /// Inverse of embed; throws InvalidArgument if x is not in the subfield.
  Code descend(std::uint32_t b, std::uint32_t a, Code x) const;
  /// Scale factor (q^b - 1)/(q^a - 1) used by embeddings on discrete logs.
  std::uint64_t log_scale(std::uint32_t a, std::uint32_t b) const;

  /// x^{q^i}.
  Code frobenius(std::uint32_t m, Code x, std::uint32_t i = 1) const;
  /// Trace and norm down to F_q, returned as level-1 codes.
  Code trace_to_fq(std::uint32_t m, Code x) const;
  Code norm_to_fq(std::uint32_t m, Code x) const;
  /// Absolute trace to F_p as an integer in [0, p).
  std::uint32_t trace_to_fp(std::uint32_t m, Code x) const;
  /// Absolute trace of exp(m, k); table lookup.
  std::uint32_t trace_to_fp_of_log(std::uint32_t m, std::uint64_t k) const {
    const Level& lv = level(m);
    return lv.trace_of_log[k % (lv.size - 1)];
  }

  std::string element_to_string(std::uint32_t m, Code x) const;
  /// Defining polynomials and generators, for reproducibility records.
  std::string describe_json() const;

 private:
  struct Level {
    std::uint32_t degree = 0;
    std::uint64_t size = 0;
    std::vector<std::uint32_t> poly;
    std::vector<Code> exp;
    std::vector<std::uint32_t> log;
    std::vector<std::uint8_t> trace_of_log;
    std::vector<std::uint32_t> basis_trace;  // Tr_{/F_p}(x^i), i < degree
  };

  const Level& level(std::uint32_t m) const;
  void build_level(std::uint32_t m);
  bool fill_exp_table(Level& lv) const;
  bool compatible_with_lower(std::uint32_t m, const Level& candidate) const;
  Code eval_poly_at(const Level& lv, const std::vector<std::uint32_t>& poly, Code y) const;
  Code raw_add(const Level& lv, Code a, Code b) const;
  Code raw_mul(const Level& lv, Code a, Code b) const;

  std::uint32_t p_;
  std::uint32_t f_;
  std::uint64_t q_;
  std::uint64_t conductor_;
  std::vector<std::uint64_t> pow_p_;
  std::vector<Level> levels_;
};

}  // namespace gammatrace
