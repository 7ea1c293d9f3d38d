#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaprel/extreal.hpp"
#include "gaprel/gap.hpp"
#include "gaprel/measure.hpp"
#include "gaprel/potential.hpp"

namespace gaprel {

/// A [0, +inf]-valued function on every point; anything defined on U_n only
/// is stored zero-extended.
struct FnOnSpace {
  std::vector<ExtReal> values;
  /// When set, the function is known to vanish off U_n.
  std::optional<std::size_t> support_level;

  static FnOnSpace zero(std::size_t universe);
  static FnOnSpace constant(std::size_t universe, ExtReal v);
  static FnOnSpace indicator(const PointSet& set);
  static FnOnSpace point_indicator(std::size_t universe, PointId x);
  static FnOnSpace from_doubles(const std::vector<double>& v);

  std::size_t size() const noexcept { return values.size(); }
  const ExtReal& operator[](PointId x) const { return values.at(x); }
};

FnOnSpace operator*(const FnOnSpace& f, const FnOnSpace& g);
FnOnSpace operator+(const FnOnSpace& f, const FnOnSpace& g);

/// Pointwise closeness with a relative tolerance; infinities must match.
bool approx_equal(const FnOnSpace& f, const FnOnSpace& g, double rel_tol, double abs_floor = 0.0);

enum class ZetaState { Finite, Infinite, Unknown };

/// One partition-function value. For Unknown, `value` is the partial sum
/// reached when the budget ran out: a certified lower bound.
struct ZetaEntry {
  ZetaState state = ZetaState::Finite;
  double value = 0.0;

  ExtReal as_ext() const;
};

/// zeta_n on U_n for each level; entries off U_n are empty.
struct ZetaProfile {
  std::vector<std::vector<std::optional<ZetaEntry>>> levels;

  std::size_t depth() const noexcept { return levels.empty() ? 0 : levels.size() - 1; }
};

/// Declared sets on which zeta_n is pinned to +inf (stand-ins for infinite
/// classes a finite model cannot produce).
struct ZetaOverrides {
  std::vector<std::pair<std::size_t, PointSet>> declared;
};

/// Throws NonInvariantOverride unless each declared set is an R_n-invariant
/// subset of U_n with 1 <= n <= depth.
void validate_overrides(const GapStructure& g, const ZetaOverrides& overrides);

/// Per-level infinity sets implied by the declarations:
/// Z_m = R_m-closure(declared_m ∪ (Z_{m-1} ∩ U_m)), Z_0 = empty.
std::vector<PointSet> propagate_overrides(const GapStructure& g, const ZetaOverrides& overrides);

/// Source of the weights rho(y) of one class, enumerated lazily. Returns
/// nullopt once the class is exhausted (never, for an infinite class).
class ClassEnumerator {
 public:
  virtual ~ClassEnumerator() = default;
  virtual std::optional<double> next() = 0;
};

class ListEnumerator final : public ClassEnumerator {
 public:
  explicit ListEnumerator(std::vector<double> weights) : weights_(std::move(weights)) {}
  std::optional<double> next() override;

 private:
  std::vector<double> weights_;
  std::size_t pos_ = 0;
};

/// Infinite class whose i-th member has weight term(i).
class GeneratedEnumerator final : public ClassEnumerator {
 public:
  explicit GeneratedEnumerator(std::function<double(std::size_t)> term) : term_(std::move(term)) {}
  std::optional<double> next() override { return term_(index_++); }

 private:
  std::function<double(std::size_t)> term_;
  std::size_t index_ = 0;
};

/// Sums a class in enumeration order. Finite when the class is exhausted
/// within `budget` members, Unknown(partial sum) otherwise. No divergence or
/// convergence is ever inferred.
ZetaEntry zeta_budgeted(ClassEnumerator& cls, std::optional<std::size_t> budget);

/// zeta_n(x) = sum of rho_n over R_n(x), ascending point order, for x in U_n.
/// Points in declared (propagated) override sets get Infinite.
std::vector<std::optional<ZetaEntry>> zeta(const GapStructure& g, const CocycleTable& ct, std::size_t n,
                                           std::optional<std::size_t> budget = std::nullopt,
                                           const ZetaOverrides& overrides = {});

ZetaProfile zeta_profile(const GapStructure& g, const CocycleTable& ct,
                         std::optional<std::size_t> budget = std::nullopt,
                         const ZetaOverrides& overrides = {});

/// Z_n (zeta_n = inf) and Y_n = U_n \ Z_n.
struct LevelSets {
  std::vector<PointSet> Z;
  std::vector<PointSet> Y;

  std::size_t depth() const noexcept { return Z.empty() ? 0 : Z.size() - 1; }
};

/// Throws UnresolvedZeta if any entry is Unknown. Re-verifies Z_0 = empty and
/// the monotonicity Z_n ∩ U_m ⊆ Z_m, Y_m ⊆ Y_n (AxiomViolation otherwise).
LevelSets level_sets(const ZetaProfile& zp, const DomainChain& chain);

/// Immutable bundle of the structures every operator needs: the GAP, the
/// cocycle tables, a fully resolved zeta profile and its level sets.
class Calculus {
 public:
  Calculus(GapStructure g, CocycleTable ct, ZetaOverrides overrides = {});

  const GapStructure& gap() const noexcept { return gap_; }
  const CocycleTable& cocycle() const noexcept { return cocycle_; }
  const ZetaProfile& zeta() const noexcept { return zeta_; }
  const LevelSets& levels() const noexcept { return levels_; }
  const ZetaOverrides& overrides() const noexcept { return overrides_; }
  bool has_overrides() const noexcept { return !overrides_.declared.empty(); }

  std::size_t depth() const noexcept { return gap_.depth(); }
  std::size_t size() const noexcept { return gap_.size(); }
  const PointSet& U(std::size_t n) const { return gap_.domain(n); }
  const PointSet& Z(std::size_t n) const;
  const PointSet& Y(std::size_t n) const;
  /// Z = union of all Z_n.
  PointSet Z_all() const;

  ExtReal zeta_at(std::size_t n, PointId x) const;
  double rho(std::size_t n, PointId x) const { return cocycle_.rho(n, x); }
  /// rho_n(x) * zeta_n(x)^{-1}; zero on Z_n.
  double normalized_weight(std::size_t n, PointId x) const;

 private:
  GapStructure gap_;
  CocycleTable cocycle_;
  ZetaOverrides overrides_;
  ZetaProfile zeta_;
  LevelSets levels_;
  PointSet empty_;
};

/// F_n(f): sum of f over R_n(x) for x in U_n, zero elsewhere.
FnOnSpace expectation(const GapStructure& g, std::size_t n, const FnOnSpace& f);

/// Q_n(f): sum of f * rho_n * zeta_n^{-1} over R_n(x) for x in U_n, zero
/// elsewhere.
FnOnSpace projector(const Calculus& calc, std::size_t n, const FnOnSpace& f);

enum class OperatorKind {
  F,     ///< F_n
  ERho,  ///< f -> F_n(rho_n f)
  PRho,  ///< P_{rho_n} acting on functions/measures over U_n
  Q,     ///< Q_n
};

struct OperatorHandle {
  OperatorKind kind = OperatorKind::Q;
  std::size_t level = 0;
};

std::string to_string(OperatorKind kind);
std::optional<OperatorKind> parse_operator_kind(const std::string& name);

/// T(f) for the operator described by the handle.
FnOnSpace apply_operator(const Calculus& calc, const OperatorHandle& op, const FnOnSpace& f);

/// T*(nu), the measure with integral of f equal to the integral of T(f) dnu.
/// For PRho the argument must live on U_n and the result has domain U_n.
Measure dual_apply(const Calculus& calc, const OperatorHandle& op, const Measure& nu);

/// Row-major matrix with entry (x, t) = T(1_t)(x), so T(f) = M f and
/// T*(nu) = M^T nu.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;

  double operator()(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
};

/// Built column by column from T applied to point indicators.
DenseMatrix dense_matrix(const Calculus& calc, const OperatorHandle& op);

}  // namespace gaprel
