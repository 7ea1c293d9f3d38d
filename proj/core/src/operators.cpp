#include "gaprel/operators.hpp"

#include <string>

#include "gaprel/error.hpp"

namespace gaprel {

FnOnSpace FnOnSpace::zero(std::size_t universe) { return {std::vector<ExtReal>(universe), std::nullopt}; }

FnOnSpace FnOnSpace::constant(std::size_t universe, ExtReal v) {
  return {std::vector<ExtReal>(universe, v), std::nullopt};
}

FnOnSpace FnOnSpace::indicator(const PointSet& set) {
  FnOnSpace f = zero(set.universe());
  for (PointId x : set.to_vector()) f.values[x] = 1.0;
  return f;
}

FnOnSpace FnOnSpace::point_indicator(std::size_t universe, PointId x) {
  FnOnSpace f = zero(universe);
  f.values.at(x) = 1.0;
  return f;
}

FnOnSpace FnOnSpace::from_doubles(const std::vector<double>& v) {
  FnOnSpace f = zero(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) f.values[i] = v[i];
  return f;
}

FnOnSpace operator*(const FnOnSpace& f, const FnOnSpace& g) {
  if (f.size() != g.size()) throw Error(ErrorCode::MalformedStructure, "function size mismatch");
  FnOnSpace r = FnOnSpace::zero(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r.values[i] = f.values[i] * g.values[i];
  return r;
}

FnOnSpace operator+(const FnOnSpace& f, const FnOnSpace& g) {
  if (f.size() != g.size()) throw Error(ErrorCode::MalformedStructure, "function size mismatch");
  FnOnSpace r = FnOnSpace::zero(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) r.values[i] = f.values[i] + g.values[i];
  return r;
}

bool approx_equal(const FnOnSpace& f, const FnOnSpace& g, double rel_tol, double abs_floor) {
  if (f.size() != g.size()) return false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!approx_equal(f.values[i], g.values[i], rel_tol, abs_floor)) return false;
  }
  return true;
}

ExtReal ZetaEntry::as_ext() const {
  switch (state) {
    case ZetaState::Finite: return ExtReal(value);
    case ZetaState::Infinite: return ExtReal::infinity();
    case ZetaState::Unknown: break;
  }
  throw Error(ErrorCode::UnresolvedZeta, "zeta value unknown at the given budget");
}

void validate_overrides(const GapStructure& g, const ZetaOverrides& overrides) {
  for (const auto& [n, set] : overrides.declared) {
    if (n == 0) {
      throw Error(ErrorCode::NonInvariantOverride, "zeta_0 = 1 everywhere; level 0 cannot be overridden");
    }
    if (n > g.depth()) {
      throw Error(ErrorCode::NonInvariantOverride,
                  "override at level " + std::to_string(n) + " beyond depth " + std::to_string(g.depth()));
    }
    if (!set.is_subset_of(g.domain(n))) {
      throw Error(ErrorCode::NonInvariantOverride,
                  "override set at level " + std::to_string(n) + " leaves U_n");
    }
    for (PointId x : set.to_vector()) {
      for (PointId y : g.relation(n).class_of(x)) {
        if (!set.contains(y)) {
          throw Error(ErrorCode::NonInvariantOverride,
                      "override set at level " + std::to_string(n) + " is not R_n-invariant (" +
                          std::to_string(x) + " ~ " + std::to_string(y) + ")");
        }
      }
    }
  }
}

std::vector<PointSet> propagate_overrides(const GapStructure& g, const ZetaOverrides& overrides) {
  validate_overrides(g, overrides);
  std::vector<PointSet> z(g.depth() + 1, PointSet(g.size()));
  for (std::size_t m = 1; m <= g.depth(); ++m) {
    PointSet seed = z[m - 1] & g.domain(m);
    for (const auto& [n, set] : overrides.declared) {
      if (n == m) seed |= set;
    }
    for (PointId x : seed.to_vector()) {
      for (PointId y : g.relation(m).class_of(x)) z[m].insert(y);
    }
  }
  return z;
}

std::optional<double> ListEnumerator::next() {
  if (pos_ >= weights_.size()) return std::nullopt;
  return weights_[pos_++];
}

ZetaEntry zeta_budgeted(ClassEnumerator& cls, std::optional<std::size_t> budget) {
  double sum = 0.0;
  std::size_t taken = 0;
  while (!budget || taken < *budget) {
    auto w = cls.next();
    if (!w) return {ZetaState::Finite, sum};
    sum += *w;
    ++taken;
  }
  // Budget spent: the class is finite only if nothing is left.
  if (!cls.next()) return {ZetaState::Finite, sum};
  return {ZetaState::Unknown, sum};
}

namespace {

std::vector<std::optional<ZetaEntry>> zeta_level(const GapStructure& g, const CocycleTable& ct,
                                                 std::size_t n, std::optional<std::size_t> budget,
                                                 const PointSet& infinite) {
  std::vector<std::optional<ZetaEntry>> out(g.size());
  for (const auto& cls : g.relation(n).classes()) {
    ZetaEntry entry;
    if (infinite.contains(cls.front())) {
      entry = {ZetaState::Infinite, 0.0};
    } else {
      std::vector<double> weights;
      weights.reserve(cls.size());
      for (PointId y : cls) weights.push_back(ct.rho(n, y));
      ListEnumerator e(std::move(weights));
      entry = zeta_budgeted(e, budget);
    }
    for (PointId y : cls) out[y] = entry;
  }
  return out;
}

}  // namespace

std::vector<std::optional<ZetaEntry>> zeta(const GapStructure& g, const CocycleTable& ct, std::size_t n,
                                           std::optional<std::size_t> budget,
                                           const ZetaOverrides& overrides) {
  if (n > g.depth()) return std::vector<std::optional<ZetaEntry>>(g.size());
  const auto z = propagate_overrides(g, overrides);
  return zeta_level(g, ct, n, budget, z[n]);
}

ZetaProfile zeta_profile(const GapStructure& g, const CocycleTable& ct, std::optional<std::size_t> budget,
                         const ZetaOverrides& overrides) {
  const auto z = propagate_overrides(g, overrides);
  ZetaProfile zp;
  for (std::size_t n = 0; n <= g.depth(); ++n) zp.levels.push_back(zeta_level(g, ct, n, budget, z[n]));
  return zp;
}

LevelSets level_sets(const ZetaProfile& zp, const DomainChain& chain) {
  LevelSets ls;
  const std::size_t size = chain.universe();
  for (std::size_t n = 0; n < zp.levels.size(); ++n) {
    PointSet z(size);
    for (PointId x = 0; x < size; ++x) {
      const auto& e = zp.levels[n].at(x);
      if (!e) continue;
      if (e->state == ZetaState::Unknown) {
        throw Error(ErrorCode::UnresolvedZeta,
                    "zeta_" + std::to_string(n) + " unresolved at point " + std::to_string(x));
      }
      if (e->state == ZetaState::Infinite) z.insert(x);
    }
    ls.Y.push_back(chain.level(n) - z);
    ls.Z.push_back(std::move(z));
  }
  if (!ls.Z.empty() && !ls.Z[0].empty()) throw Error(ErrorCode::AxiomViolation, "Z_0 must be empty");
  for (std::size_t n = 0; n < ls.Z.size(); ++n) {
    for (std::size_t m = n + 1; m < ls.Z.size(); ++m) {
      if (!(ls.Z[n] & chain.level(m)).is_subset_of(ls.Z[m]) || !ls.Y[m].is_subset_of(ls.Y[n])) {
        throw Error(ErrorCode::AxiomViolation,
                    "Z/Y monotonicity fails between levels " + std::to_string(n) + " and " +
                        std::to_string(m));
      }
    }
  }
  return ls;
}

Calculus::Calculus(GapStructure g, CocycleTable ct, ZetaOverrides overrides)
    : gap_(std::move(g)), cocycle_(std::move(ct)), overrides_(std::move(overrides)) {
  if (cocycle_.depth() != gap_.depth() || cocycle_.size() != gap_.size()) {
    throw Error(ErrorCode::MalformedStructure, "cocycle table does not match the GAP structure");
  }
  zeta_ = zeta_profile(gap_, cocycle_, std::nullopt, overrides_);
  levels_ = level_sets(zeta_, gap_.chain());
  empty_ = PointSet(gap_.size());
}

const PointSet& Calculus::Z(std::size_t n) const { return n < levels_.Z.size() ? levels_.Z[n] : empty_; }
const PointSet& Calculus::Y(std::size_t n) const { return n < levels_.Y.size() ? levels_.Y[n] : empty_; }

PointSet Calculus::Z_all() const {
  PointSet z(size());
  for (const auto& s : levels_.Z) z |= s;
  return z;
}

ExtReal Calculus::zeta_at(std::size_t n, PointId x) const {
  if (n > depth() || !zeta_.levels[n].at(x)) {
    throw Error(ErrorCode::OutsideDomain,
                "zeta_" + std::to_string(n) + " undefined at point " + std::to_string(x));
  }
  return zeta_.levels[n][x]->as_ext();
}

double Calculus::normalized_weight(std::size_t n, PointId x) const {
  const ExtReal z = zeta_at(n, x);
  if (z.is_infinite()) return 0.0;
  return rho(n, x) / z.value();
}

FnOnSpace expectation(const GapStructure& g, std::size_t n, const FnOnSpace& f) {
  if (f.size() != g.size()) throw Error(ErrorCode::MalformedStructure, "function size mismatch");
  FnOnSpace out = FnOnSpace::zero(g.size());
  out.support_level = n;
  for (const auto& cls : g.relation(n).classes()) {
    ExtReal s;
    for (PointId y : cls) s += f.values[y];
    for (PointId y : cls) out.values[y] = s;
  }
  return out;
}

FnOnSpace projector(const Calculus& calc, std::size_t n, const FnOnSpace& f) {
  if (f.size() != calc.size()) throw Error(ErrorCode::MalformedStructure, "function size mismatch");
  FnOnSpace out = FnOnSpace::zero(calc.size());
  out.support_level = n;
  for (const auto& cls : calc.gap().relation(n).classes()) {
    ExtReal s;
    for (PointId y : cls) s += f.values[y] * ExtReal(calc.normalized_weight(n, y));
    for (PointId y : cls) out.values[y] = s;
  }
  return out;
}

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::F: return "F";
    case OperatorKind::ERho: return "E_rho";
    case OperatorKind::PRho: return "P_rho";
    case OperatorKind::Q: return "Q";
  }
  return "?";
}

std::optional<OperatorKind> parse_operator_kind(const std::string& name) {
  if (name == "F") return OperatorKind::F;
  if (name == "E_rho" || name == "E") return OperatorKind::ERho;
  if (name == "P_rho" || name == "P") return OperatorKind::PRho;
  if (name == "Q") return OperatorKind::Q;
  return std::nullopt;
}

namespace {

FnOnSpace rho_function(const Calculus& calc, std::size_t n) {
  FnOnSpace r = FnOnSpace::zero(calc.size());
  r.support_level = n;
  for (PointId x : calc.U(n).to_vector()) r.values[x] = calc.rho(n, x);
  return r;
}

}  // namespace

FnOnSpace apply_operator(const Calculus& calc, const OperatorHandle& op, const FnOnSpace& f) {
  switch (op.kind) {
    case OperatorKind::F: return expectation(calc.gap(), op.level, f);
    case OperatorKind::ERho: return expectation(calc.gap(), op.level, f * rho_function(calc, op.level));
    case OperatorKind::PRho:
    case OperatorKind::Q: return projector(calc, op.level, f);
  }
  throw Error(ErrorCode::Unsupported, "unknown operator");
}

Measure dual_apply(const Calculus& calc, const OperatorHandle& op, const Measure& nu) {
  if (nu.universe() != calc.size()) throw Error(ErrorCode::MalformedStructure, "measure size mismatch");
  const std::size_t n = op.level;
  if (op.kind == OperatorKind::PRho && !nu.lives_in(calc.U(n))) {
    throw Error(ErrorCode::OutsideDomain, "P_rho* needs a measure living on U_" + std::to_string(n));
  }
  std::vector<double> w(calc.size(), 0.0);
  for (const auto& cls : calc.gap().relation(n).classes()) {
    double class_mass = 0.0;
    for (PointId y : cls) class_mass += nu.weight(y);
    for (PointId x : cls) {
      switch (op.kind) {
        case OperatorKind::F: w[x] = class_mass; break;
        case OperatorKind::ERho: w[x] = calc.rho(n, x) * class_mass; break;
        case OperatorKind::PRho:
        case OperatorKind::Q: w[x] = calc.normalized_weight(n, x) * class_mass; break;
      }
    }
  }
  if (op.kind == OperatorKind::PRho) return Measure(std::move(w), calc.U(n));
  return Measure(std::move(w));
}

DenseMatrix dense_matrix(const Calculus& calc, const OperatorHandle& op) {
  const std::size_t size = calc.size();
  DenseMatrix m{size, size, std::vector<double>(size * size, 0.0)};
  for (PointId t = 0; t < size; ++t) {
    const FnOnSpace col = apply_operator(calc, op, FnOnSpace::point_indicator(size, t));
    for (PointId x = 0; x < size; ++x) m.entries[x * size + t] = col.values[x].value();
  }
  return m;
}

}  // namespace gaprel
