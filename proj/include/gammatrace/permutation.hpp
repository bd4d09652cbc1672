#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gammatrace {

/// Permutation of {0, ..., n-1} stored by images. Composition is
/// (a * b)(i) = a(b(i)).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> image);

  static Permutation identity(std::size_t n);
  static Permutation transposition(std::size_t n, std::uint32_t i, std::uint32_t j);
  /// All permutations of n points in lexicographic order of image vectors.
  static std::vector<Permutation> all(std::size_t n);

  std::size_t size() const { return image_.size(); }
  std::uint32_t operator()(std::uint32_t i) const { return image_[i]; }
  const std::vector<std::uint32_t>& image() const { return image_; }

  Permutation operator*(const Permutation& o) const;
  Permutation inverse() const;
  int sign() const;
  bool is_identity() const;
  /// Cycles (i, s(i), s^2(i), ...) each starting at its smallest element,
  /// ordered by that element; fixed points are length-1 cycles.
  std::vector<std::vector<std::uint32_t>> cycles() const;
  /// lcm of cycle lengths.
  std::uint64_t order() const;

  bool operator==(const Permutation& o) const { return image_ == o.image_; }
  bool operator!=(const Permutation& o) const { return image_ != o.image_; }
  bool operator<(const Permutation& o) const { return image_ < o.image_; }
  std::string to_string() const;

 private:
  std::vector<std::uint32_t> image_;
};

}  // namespace gammatrace
