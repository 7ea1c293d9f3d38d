#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "gaprel/gap.hpp"
#include "gaprel/measure.hpp"
#include "gaprel/operators.hpp"
#include "gaprel/potential.hpp"
#include "gaprel/space.hpp"

namespace gaprel::testing {

using Rng = std::mt19937_64;

inline constexpr double kDensities[] = {0.3, 0.6, 0.9};

/// A sigma-derived instance with everything the operators need.
struct Instance {
  SpaceModel model;
  PartialFunction h;
  std::size_t depth = 0;
  GapStructure gap;
  Potential potential;
  CocycleTable cocycle;
  std::optional<Calculus> calc;
};

/// Partial map on `points` points: each point is in dom(sigma) with
/// probability `density`, its image uniform over the points (or over a pool
/// of `pool` points when nonzero, which makes large classes likely).
/// h is uniform in [-2, 2] on every point.
Instance random_instance(Rng& rng, std::size_t points, double density, std::size_t depth, std::size_t pool = 0);

/// Same, plus up to `count` override declarations on random R_n-classes.
Instance random_override_instance(Rng& rng, std::size_t points, double density, std::size_t depth,
                                  std::size_t count);

/// Builds gap, potential, cocycle and calculus from model/h/depth.
Instance make_instance(SpaceModel model, PartialFunction h, std::size_t depth, ZetaOverrides overrides = {});

/// The running example: 0 <- {1, 2}, 1 <- 3, h(1) = ln 2, h = 0 elsewhere.
Instance m0(std::size_t depth = 3);

Measure random_measure(Rng& rng, std::size_t size, double fill = 0.7);
FnOnSpace random_function(Rng& rng, std::size_t size);

/// A measure satisfying Q*_n(mu) = 1_{U_n} mu at every level, assembled
/// piecewise over W_0..W_{D-1}, W_inf with random seeds.
Measure random_dlr_measure(Rng& rng, const Calculus& calc);

// Independent oracles: plain loops over the model, no use of the library's
// GAP, cocycle or operator code.

std::optional<PointId> oracle_sigma_pow(const SpaceModel& m, PointId x, std::size_t n);
bool oracle_related(const SpaceModel& m, std::size_t n, PointId x, PointId y);
/// h_n(x) = sum_{i<n} h(sigma^i x)
double oracle_h(const SpaceModel& m, const PartialFunction& h, std::size_t n, PointId x);
/// sum of e^{h_n} over {y : sigma^n y = sigma^n x}
double oracle_zeta(const SpaceModel& m, const PartialFunction& h, std::size_t n, PointId x);

using Dense = std::vector<std::vector<double>>;

/// Matrices with [x][t] = T(1_t)(x). `infinite` marks zeta = inf points.
Dense oracle_matrix_f(const SpaceModel& m, std::size_t n);
Dense oracle_matrix_erho(const SpaceModel& m, const PartialFunction& h, std::size_t n);
Dense oracle_matrix_q(const SpaceModel& m, const PartialFunction& h, std::size_t n, const PointSet& infinite);

/// Relative closeness with a floor of 1 on the scale.
bool close(double a, double b, double tol);

}  // namespace gaprel::testing
