#include "gammatrace/gl2_table.hpp"

#include "gammatrace/error.hpp"
#include "gammatrace/mirabolic.hpp"

namespace gammatrace {

namespace {

bool is_scalar(const Matrix& g) { return g(0, 1) == 0 && g(1, 0) == 0 && g(0, 0) == g(1, 1); }

}  // namespace

Gl2CharacterTable::Gl2CharacterTable(const FieldTower& tower) : tower_(&tower), q_(tower.q()) {
  if (q_ > 11) throw Error(ErrorKind::kCapExceeded, "GL(2) character table is limited to q <= 11");
  if (!tower.has_level(2)) throw Error(ErrorKind::kTowerTooShallow, "GL(2) character table needs F_{q^2}");
  MatOps ops(tower);
  const std::uint64_t q = q_, n1 = q - 1, n2 = q * q - 1;

  for (std::uint64_t a = 0; a < n1; ++a) {
    const Code x = tower.exp(1, a);
    classes_.push_back({Gl2ClassKind::kCentral, a, 0, 1, Matrix(2, 2, {x, 0, 0, x}), "a(" + std::to_string(a) + ")"});
  }
  for (std::uint64_t a = 0; a < n1; ++a) {
    const Code x = tower.exp(1, a);
    classes_.push_back(
        {Gl2ClassKind::kCentralUnipotent, a, 0, n2, Matrix(2, 2, {x, x, 0, x}), "b(" + std::to_string(a) + ")"});
  }
  for (std::uint64_t a = 0; a < n1; ++a)
    for (std::uint64_t b = a + 1; b < n1; ++b)
      classes_.push_back({Gl2ClassKind::kSplit, a, b, q * (q + 1),
                          Matrix(2, 2, {tower.exp(1, a), 0, 0, tower.exp(1, b)}),
                          "c(" + std::to_string(a) + "," + std::to_string(b) + ")"});
  for (std::uint64_t k = 0; k < n2; ++k) {
    if (k % (q + 1) == 0 || (k * q) % n2 < k) continue;
    const Code z = tower.exp(2, k);
    const Code tr = tower.trace_to_fq(2, z), nm = tower.norm_to_fq(2, z);
    classes_.push_back({Gl2ClassKind::kElliptic, k, 0, q * (q - 1), companion(ops, {ops.neg(tr), nm}),
                        "d(" + std::to_string(k) + ")"});
  }

  for (std::uint64_t a = 0; a < n1; ++a) irreps_.push_back({Gl2Family::kOneDim, a, 0, 1, "U(" + std::to_string(a) + ")"});
  for (std::uint64_t a = 0; a < n1; ++a)
    irreps_.push_back({Gl2Family::kSteinbergTwist, a, 0, q, "V(" + std::to_string(a) + ")"});
  for (std::uint64_t a = 0; a < n1; ++a)
    for (std::uint64_t b = a + 1; b < n1; ++b)
      irreps_.push_back(
          {Gl2Family::kPrincipal, a, b, q + 1, "W(" + std::to_string(a) + "," + std::to_string(b) + ")"});
  for (std::uint64_t k = 0; k < n2; ++k) {
    if (k % (q + 1) == 0 || (k * q) % n2 < k) continue;
    irreps_.push_back({Gl2Family::kCuspidal, k, 0, q - 1, "X(" + std::to_string(k) + ")"});
  }

  const auto alpha = [&](std::uint64_t e, std::uint64_t log) {
    return CycNum::root(n1, static_cast<std::int64_t>((e * log) % n1));
  };
  const auto phi = [&](std::uint64_t e, std::uint64_t log2) {
    return CycNum::root(n2, static_cast<std::int64_t>((e * log2) % n2));
  };
  const CycNum qq(static_cast<long>(q));

  values_.assign(irreps_.size(), std::vector<CycNum>(classes_.size()));
  for (std::size_t i = 0; i < irreps_.size(); ++i) {
    const Gl2Irrep& r = irreps_[i];
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      const Gl2Class& k = classes_[c];
      CycNum v;
      switch (r.family) {
        case Gl2Family::kOneDim:
          switch (k.kind) {
            case Gl2ClassKind::kCentral:
            case Gl2ClassKind::kCentralUnipotent: v = alpha(r.a, 2 * k.a); break;
            case Gl2ClassKind::kSplit: v = alpha(r.a, k.a + k.b); break;
            case Gl2ClassKind::kElliptic: v = alpha(r.a, k.a); break;
          }
          break;
        case Gl2Family::kSteinbergTwist:
          switch (k.kind) {
            case Gl2ClassKind::kCentral: v = qq * alpha(r.a, 2 * k.a); break;
            case Gl2ClassKind::kCentralUnipotent: v = CycNum(); break;
            case Gl2ClassKind::kSplit: v = alpha(r.a, k.a + k.b); break;
            case Gl2ClassKind::kElliptic: v = -alpha(r.a, k.a); break;
          }
          break;
        case Gl2Family::kPrincipal:
          switch (k.kind) {
            case Gl2ClassKind::kCentral: v = CycNum(static_cast<long>(q + 1)) * alpha(r.a + r.b, k.a); break;
            case Gl2ClassKind::kCentralUnipotent: v = alpha(r.a + r.b, k.a); break;
            case Gl2ClassKind::kSplit: v = alpha(r.a, k.a) * alpha(r.b, k.b) + alpha(r.a, k.b) * alpha(r.b, k.a); break;
            case Gl2ClassKind::kElliptic: v = CycNum(); break;
          }
          break;
        case Gl2Family::kCuspidal:
          switch (k.kind) {
            case Gl2ClassKind::kCentral: v = CycNum(static_cast<long>(q - 1)) * phi(r.a, k.a * (q + 1)); break;
            case Gl2ClassKind::kCentralUnipotent: v = -phi(r.a, k.a * (q + 1)); break;
            case Gl2ClassKind::kSplit: v = CycNum(); break;
            case Gl2ClassKind::kElliptic: v = -(phi(r.a, k.a) + phi(r.a, k.a * q)); break;
          }
          break;
      }
      values_[i][c] = v;
    }
  }

  for (std::size_t c = 0; c < classes_.size(); ++c)
    lookup_.emplace(std::make_pair(ops.charpoly(classes_[c].rep), is_scalar(classes_[c].rep)), c);
  inverse_.resize(classes_.size());
  for (std::size_t c = 0; c < classes_.size(); ++c) inverse_[c] = class_of(ops.inverse(classes_[c].rep));
}

std::size_t Gl2CharacterTable::class_of(const Matrix& g) const {
  if (g.rows() != 2 || g.cols() != 2) throw Error(ErrorKind::kInvalidArgument, "expected a 2x2 matrix");
  MatOps ops(*tower_);
  auto it = lookup_.find({ops.charpoly(g), is_scalar(g)});
  if (it == lookup_.end()) throw Error(ErrorKind::kInvalidArgument, "matrix is not invertible");
  return it->second;
}

OrthogonalityReport Gl2CharacterTable::verify() const {
  OrthogonalityReport rep;
  const CycNum order(static_cast<long>(group_order()));
  std::vector<std::vector<CycNum>> conj(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i)
    for (const auto& v : values_[i]) conj[i].push_back(v.conj());

  rep.rows = true;
  for (std::size_t i = 0; i < irreps_.size() && rep.rows; ++i)
    for (std::size_t j = i; j < irreps_.size() && rep.rows; ++j) {
      CycNum s;
      for (std::size_t c = 0; c < classes_.size(); ++c)
        s += (values_[i][c] * conj[j][c]).scaled(static_cast<long>(classes_[c].size));
      rep.rows = s == (i == j ? order : CycNum());
    }
  rep.columns = true;
  for (std::size_t c = 0; c < classes_.size() && rep.columns; ++c)
    for (std::size_t d = c; d < classes_.size() && rep.columns; ++d) {
      CycNum s;
      for (std::size_t i = 0; i < irreps_.size(); ++i) s += values_[i][c] * conj[i][d];
      const CycNum expect =
          c == d ? CycNum::rational(mpq_class(static_cast<long>(group_order() / classes_[c].size))) : CycNum();
      rep.columns = s == expect;
    }
  std::uint64_t dims = 0, sizes = 0;
  for (const auto& r : irreps_) dims += r.dim * r.dim;
  for (const auto& c : classes_) sizes += c.size;
  rep.dimensions = dims == group_order();
  rep.class_sizes = sizes == group_order();
  return rep;
}

}  // namespace gammatrace
