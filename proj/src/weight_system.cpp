#include "gammatrace/weight_system.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <regex>

#include "gammatrace/error.hpp"

namespace gammatrace {

namespace {

std::string weight_str(const Weight& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

std::vector<Permutation> product_of_symmetric_groups(std::size_t n, const std::vector<std::uint32_t>& starts,
                                                     const std::vector<std::uint32_t>& sizes) {
  std::vector<Permutation> out{Permutation::identity(n)};
  for (std::size_t b = 0; b < starts.size(); ++b) {
    if (sizes[b] < 2) continue;
    auto local = Permutation::all(sizes[b]);
    std::vector<Permutation> next;
    for (const auto& base : out) {
      for (const auto& l : local) {
        std::vector<std::uint32_t> img = base.image();
        for (std::uint32_t i = 0; i < sizes[b]; ++i) img[starts[b] + i] = starts[b] + l(i);
        next.emplace_back(std::move(img));
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Weight act(const Permutation& w, const Weight& lambda) {
  Weight out(lambda.size());
  for (std::uint32_t j = 0; j < lambda.size(); ++j) out[w(j)] = lambda[j];
  return out;
}

std::uint32_t integer_rank(const std::vector<Weight>& rows, std::uint32_t cols) {
  std::vector<std::vector<mpq_class>> m(rows.size(), std::vector<mpq_class>(cols));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::uint32_t j = 0; j < cols; ++j) m[i][j] = static_cast<long>(rows[i][j]);
  std::uint32_t rank = 0;
  for (std::uint32_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (m[i][c] == 0) continue;
      mpq_class f = m[i][c] / m[rank][c];
      for (std::uint32_t j = c; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

std::vector<Permutation> WeightSystem::weyl_group() const {
  return product_of_symmetric_groups(d, factor_start, shape);
}

std::vector<Permutation> WeightSystem::factor_weyl_group(std::uint32_t j) const {
  if (j >= shape.size()) throw Error(ErrorKind::kInvalidArgument, "factor index out of range");
  return product_of_symmetric_groups(d, {factor_start[j]}, {shape[j]});
}

std::vector<Permutation> WeightSystem::slot_stabilizer() const {
  return product_of_symmetric_groups(r(), block_start, multiplicity);
}

bool WeightSystem::multiplicity_free() const {
  return std::all_of(multiplicity.begin(), multiplicity.end(), [](std::uint32_t m) { return m == 1; });
}

WeightSystem validate_weight_system(const std::vector<std::uint32_t>& shape, const std::vector<Weight>& weights,
                                    const std::string& name) {
  WeightSystem ws;
  ws.name = name;
  ws.shape = shape;
  if (shape.empty()) throw Error(ErrorKind::kInvalidArgument, "empty group shape");
  for (std::uint32_t n : shape) {
    if (n == 0) throw Error(ErrorKind::kInvalidArgument, "factor of size 0");
    ws.factor_start.push_back(ws.d);
    for (std::uint32_t i = 0; i < n; ++i) ws.factor_of_coord.push_back(static_cast<std::uint32_t>(ws.factor_start.size() - 1));
    ws.d += n;
  }
  if (weights.empty()) throw Error(ErrorKind::kInvalidArgument, "no weights");
  for (const auto& w : weights)
    if (w.size() != ws.d)
      throw Error(ErrorKind::kInvalidArgument, "weight " + weight_str(w) + " has wrong length for torus rank " +
                                                   std::to_string(ws.d));

  for (const auto& w : weights) {
    std::int64_t total = 0;
    for (std::size_t k = 0; k < shape.size(); ++k) {
      std::int64_t s = 0;
      for (std::uint32_t i = 0; i < shape[k]; ++i) s += w[ws.factor_start[k] + i];
      if (s < 0)
        throw Error(ErrorKind::kNotSigmaPositive, "weight " + weight_str(w) + " has negative degree on factor " +
                                                      std::to_string(k));
      total += s;
    }
    if (total <= 0) throw Error(ErrorKind::kNotSigmaPositive, "weight " + weight_str(w) + " pairs non-positively with det");
  }

  std::map<Weight, std::uint32_t> counts;
  for (const auto& w : weights) ++counts[w];
  for (std::size_t k = 0; k < shape.size(); ++k) {
    for (std::uint32_t i = 0; i + 1 < shape[k]; ++i) {
      Permutation s = Permutation::transposition(ws.d, ws.factor_start[k] + i, ws.factor_start[k] + i + 1);
      std::map<Weight, std::uint32_t> moved;
      for (const auto& [w, c] : counts) moved[act(s, w)] += c;
      if (moved != counts) throw Error(ErrorKind::kNotWStable, "weights are not stable under the Weyl group");
    }
  }

  for (const auto& w : weights) {
    auto it = std::find(ws.distinct.begin(), ws.distinct.end(), w);
    if (it == ws.distinct.end()) {
      ws.distinct.push_back(w);
      ws.multiplicity.push_back(1);
    } else {
      ++ws.multiplicity[static_cast<std::size_t>(it - ws.distinct.begin())];
    }
  }
  for (std::size_t b = 0; b < ws.distinct.size(); ++b) {
    ws.block_start.push_back(static_cast<std::uint32_t>(ws.slots.size()));
    for (std::uint32_t i = 0; i < ws.multiplicity[b]; ++i) {
      ws.slots.push_back(ws.distinct[b]);
      ws.block_of_slot.push_back(static_cast<std::uint32_t>(b));
    }
  }

  ws.rank = integer_rank(ws.slots, ws.d);
  if (ws.rank < ws.d)
    throw Error(ErrorKind::kNotSurjective, "weight matrix has rank " + std::to_string(ws.rank) + " < " +
                                               std::to_string(ws.d) + "; the representation factors through det");
  return ws;
}

WeightSystem named_weight_system(const std::vector<std::uint32_t>& shape, const std::string& name) {
  std::uint32_t d = 0;
  for (std::uint32_t n : shape) d += n;
  std::vector<std::uint32_t> start;
  for (std::uint32_t s = 0, k = 0; k < shape.size(); s += shape[k++]) start.push_back(s);

  std::vector<Weight> weights;
  static const std::regex det_re(R"(std(\*det(\^(-?\d+))?|_tensor_det_(-?\d+)))");
  std::smatch m;
  if (name == "std") {
    for (std::uint32_t j = 0; j < d; ++j) {
      Weight w(d, 0);
      w[j] = 1;
      weights.push_back(w);
    }
  } else if (name == "sym2") {
    for (std::size_t k = 0; k < shape.size(); ++k)
      for (std::uint32_t i = 0; i < shape[k]; ++i)
        for (std::uint32_t j = i; j < shape[k]; ++j) {
          Weight w(d, 0);
          w[start[k] + i] += 1;
          w[start[k] + j] += 1;
          weights.push_back(w);
        }
  } else if (std::regex_match(name, m, det_re)) {
    std::int64_t k = 1;
    if (m[3].matched) k = std::stoll(m[3].str());
    if (m[4].matched) k = std::stoll(m[4].str());
    for (std::size_t f = 0; f < shape.size(); ++f)
      for (std::uint32_t i = 0; i < shape[f]; ++i) {
        Weight w(d, 0);
        for (std::uint32_t j = 0; j < shape[f]; ++j) w[start[f] + j] = k;
        w[start[f] + i] += 1;
        weights.push_back(w);
      }
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown representation name '" + name + "'");
  }
  return validate_weight_system(shape, weights, name);
}

bool is_lift(const WeightSystem& ws, const Permutation& w, const Permutation& xi) {
  if (xi.size() != ws.r() || w.size() != ws.d) return false;
  for (std::uint32_t i = 0; i < ws.r(); ++i)
    if (ws.slots[xi(i)] != act(w, ws.slots[i])) return false;
  return true;
}

WeylLift weyl_lift(const WeightSystem& ws, const Permutation& w) {
  if (w.size() != ws.d) throw Error(ErrorKind::kInvalidArgument, "Weyl element has wrong size");
  std::vector<std::uint32_t> img(ws.r());
  for (std::size_t b = 0; b < ws.distinct.size(); ++b) {
    Weight target = act(w, ws.distinct[b]);
    auto it = std::find(ws.distinct.begin(), ws.distinct.end(), target);
    if (it == ws.distinct.end()) throw Error(ErrorKind::kNotWStable, "image weight " + weight_str(target) + " missing");
    std::size_t tb = static_cast<std::size_t>(it - ws.distinct.begin());
    if (ws.multiplicity[tb] != ws.multiplicity[b]) throw Error(ErrorKind::kNotWStable, "multiplicities differ across a W-orbit");
    for (std::uint32_t i = 0; i < ws.multiplicity[b]; ++i) img[ws.block_start[b] + i] = ws.block_start[tb] + i;
  }
  WeylLift lift;
  lift.xi = Permutation(std::move(img));
  lift.sign_r = lift.xi.sign();
  lift.sign_w = w.sign();
  lift.epsilon = lift.sign_r * lift.sign_w;
  return lift;
}

}  // namespace gammatrace
