#pragma once

#include <optional>
#include <vector>

#include "gaprel/gap.hpp"
#include "gaprel/space.hpp"
#include "gaprel/validation.hpp"

namespace gaprel {

/// Real-valued function defined on part of the points (e.g. h on dom sigma).
using PartialFunction = std::vector<std::optional<double>>;

/// {k_n}_{n>=1}, each k_n defined on U_n. There is no k_0.
class Potential {
 public:
  Potential() = default;
  /// levels[i] holds k_{i+1}.
  explicit Potential(std::vector<PartialFunction> levels) : levels_(std::move(levels)) {}

  /// Number of stored levels (the largest n with a k_n).
  std::size_t depth() const noexcept { return levels_.size(); }
  bool empty() const noexcept { return levels_.empty(); }

  /// k_n(x); throws MissingPotentialValue when undefined.
  double k(std::size_t n, PointId x) const;
  std::optional<double> try_k(std::size_t n, PointId x) const;
  const PartialFunction& level(std::size_t n) const;

 private:
  std::vector<PartialFunction> levels_;
};

/// h_n, rho_n = e^{h_n} and c_n(x,y) = h_n(x) - h_n(y), n = 0..depth.
class CocycleTable {
 public:
  CocycleTable() = default;
  CocycleTable(std::vector<std::vector<double>> h, std::vector<PointSet> domains);

  std::size_t depth() const noexcept { return h_.empty() ? 0 : h_.size() - 1; }
  std::size_t size() const noexcept { return h_.empty() ? 0 : h_.front().size(); }

  /// h_n(x) for x in U_n; throws OutsideDomain otherwise.
  double h(std::size_t n, PointId x) const;
  double rho(std::size_t n, PointId x) const;
  /// c_n(x, y); the caller is responsible for (x, y) lying in R_n.
  double c(std::size_t n, PointId x, PointId y) const { return h(n, x) - h(n, y); }
  /// D_n(x, y) = rho_n(x) / rho_n(y)
  double D(std::size_t n, PointId x, PointId y) const { return rho(n, x) / rho(n, y); }

  const PointSet& domain(std::size_t n) const;

 private:
  std::vector<std::vector<double>> h_;
  std::vector<std::vector<double>> rho_;
  std::vector<PointSet> domains_;
  PointSet empty_;
};

/// k_n(x) = h(sigma^{n-1}(x)) for x in U_n, 1 <= n <= depth.
Potential potential_from_h(const SpaceModel& model, const PartialFunction& h, std::size_t depth);

/// Invariance of each k_n on R_{n-1} ∩ (U_n × U_n), plus the identity
/// R_{n-1} ∩ (U_n × U_n) = R_{n-1} ∩ R_n, by exhaustive pair scan.
ValidationReport validate_potential(const GapStructure& g, const Potential& p);

/// Tables for n = 0..g.depth(). Checks that c_n and c_m agree on every pair in
/// R_n ∩ R_m and throws CocycleMismatch with the offending pair otherwise.
CocycleTable build_cocycle(const GapStructure& g, const Potential& p);

/// b(x, k-l, y) = sum_{i<k} h(sigma^i x) - sum_{i<l} h(sigma^i y). Throws
/// InvalidWitness unless (k, l) witnesses the element. The value is
/// cross-checked against the minimal witness of the same element and
/// CocycleMismatch is raised on disagreement.
double rd_cocycle_value(const SpaceModel& model, const PartialFunction& h,
                        const GroupoidElement& elem, std::size_t k, std::size_t l);

/// Exhaustive witness-independence of b over every enumerated element and
/// every witness (k, l) with k, l <= depth.
ValidationReport check_rd_witness_independence(const SpaceModel& model, const PartialFunction& h,
                                               std::size_t depth);

}  // namespace gaprel
