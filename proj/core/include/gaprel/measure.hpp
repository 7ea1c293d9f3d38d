#pragma once

#include <vector>

#include "gaprel/space.hpp"

namespace gaprel {

/// Finite nonnegative weights on the points of a domain.
///
/// Zero-weight points are kept: a measure restricted by indicator multiplication
/// still lives on the whole space, while a domain restriction changes the
/// domain itself. Weights off the domain are always zero.
class Measure {
 public:
  Measure() = default;
  /// Zero measure over the full space.
  explicit Measure(std::size_t universe);
  explicit Measure(std::vector<double> weights);
  Measure(std::vector<double> weights, PointSet domain);

  static Measure dirac(std::size_t universe, PointId x, double mass = 1.0);

  std::size_t universe() const noexcept { return weights_.size(); }
  const PointSet& domain() const noexcept { return domain_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(PointId x) const { return weights_.at(x); }
  void set_weight(PointId x, double w);

  double mass() const;
  double mass(const PointSet& set) const;
  PointSet support() const;
  bool lives_in(const PointSet& set) const { return support().is_subset_of(set); }
  bool is_zero() const;

 private:
  std::vector<double> weights_;
  PointSet domain_;
};

enum class RestrictMode { DomainRestrict, IndicatorMultiply };

/// IndicatorMultiply: 1_Y * mu on the same domain. DomainRestrict: mu seen as
/// a measure on Y (domain becomes Y ∩ domain).
Measure restrict(const Measure& mu, const PointSet& set, RestrictMode mode);

Measure scaled(const Measure& mu, double factor);
Measure sum(const Measure& a, const Measure& b);

/// mu / mu(X); throws ZeroMass when the total mass vanishes.
Measure normalized(const Measure& mu);

/// l1 distance sum_x |a(x) - b(x)| (twice the usual total-variation norm of
/// the difference for probability measures).
double tv_distance(const Measure& a, const Measure& b);

/// tv_distance(a, b) <= tol * max(a(X), b(X)).
bool approx_equal(const Measure& a, const Measure& b, double tol);

}  // namespace gaprel
