#include "gammatrace/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "gammatrace/error.hpp"
#include "gammatrace/field_tower.hpp"

namespace gammatrace {

Permutation::Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::uint32_t v : image_) {
    if (v >= image_.size() || seen[v]) throw Error(ErrorKind::kInvalidArgument, "not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0u);
  return Permutation(std::move(img));
}

Permutation Permutation::transposition(std::size_t n, std::uint32_t i, std::uint32_t j) {
  Permutation p = identity(n);
  std::swap(p.image_[i], p.image_[j]);
  return p;
}

std::vector<Permutation> Permutation::all(std::size_t n) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0u);
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

Permutation Permutation::operator*(const Permutation& o) const {
  if (o.size() != size()) throw Error(ErrorKind::kInvalidArgument, "permutation size mismatch");
  std::vector<std::uint32_t> img(size());
  for (std::size_t i = 0; i < size(); ++i) img[i] = image_[o.image_[i]];
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<std::uint32_t> img(size());
  for (std::size_t i = 0; i < size(); ++i) img[image_[i]] = static_cast<std::uint32_t>(i);
  return Permutation(std::move(img));
}

int Permutation::sign() const {
  int s = 1;
  for (const auto& c : cycles())
    if (c.size() % 2 == 0) s = -s;
  return s;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (image_[i] != i) return false;
  return true;
}

std::vector<std::vector<std::uint32_t>> Permutation::cycles() const {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<bool> seen(size(), false);
  for (std::uint32_t i = 0; i < size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::uint32_t> c;
    for (std::uint32_t j = i; !seen[j]; j = image_[j]) {
      seen[j] = true;
      c.push_back(j);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::uint64_t Permutation::order() const {
  std::uint64_t l = 1;
  for (const auto& c : cycles()) l = lcm_u64(l, c.size());
  return l;
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < size(); ++i) os << (i ? "," : "") << image_[i];
  os << "]";
  return os.str();
}

}  // namespace gammatrace
