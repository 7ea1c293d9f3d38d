#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gaprel/gap.hpp"
#include "gaprel/measure.hpp"
#include "gaprel/measures.hpp"
#include "gaprel/operators.hpp"
#include "gaprel/potential.hpp"

namespace gaprel {

/// The iterated transfer structure: for each level n and target x, the
/// sources t with L_n(f)(x) = sum of f(t) over the fiber.
///
/// Built from a partial map (fiber = sigma^-n(x)) or from the cylinder
/// presentation of a full shift, where points are words of length m and
/// the fiber of x at level n is every word whose suffix from position n equals
/// the first m - n letters of x.
class TransferSystem {
 public:
  TransferSystem() = default;
  /// fibers[n][x], n = 0..depth; fibers[0] must be the identity.
  TransferSystem(std::size_t universe, std::vector<std::vector<std::vector<PointId>>> fibers);

  static TransferSystem from_sigma(const SpaceModel& model, std::size_t depth);

  std::size_t size() const noexcept { return universe_; }
  std::size_t depth() const noexcept { return fibers_.empty() ? 0 : fibers_.size() - 1; }
  const std::vector<PointId>& fiber(std::size_t n, PointId x) const;
  /// U_n: every point occurring as a source at level n.
  const PointSet& domain(std::size_t n) const;
  /// The least target of t at level n (sigma^n(t) for a partial map), or
  /// nullopt off U_n.
  std::optional<PointId> target(std::size_t n, PointId t) const;

 private:
  std::size_t universe_ = 0;
  std::vector<std::vector<std::vector<PointId>>> fibers_;
  std::vector<std::vector<std::optional<PointId>>> targets_;
  std::vector<PointSet> domains_;
  PointSet empty_;
};

/// Full shift on `alphabet` symbols seen through words of length `length`,
/// with a potential depending on the first symbol only. Depth = length.
struct FullShiftInstance {
  std::size_t alphabet = 0;
  std::size_t length = 0;
  std::vector<std::string> ids;
  GapStructure gap;
  Potential potential;
  TransferSystem transfer;
};

FullShiftInstance full_shift_cylinders(std::size_t alphabet, std::size_t length, const std::vector<double>& h);

/// L_n(f), unweighted; vanishes off the targets of U_n.
FnOnSpace transfer_apply(const TransferSystem& ts, std::size_t n, const FnOnSpace& f);

/// L_n(rho_n f).
FnOnSpace ruelle_apply(const TransferSystem& ts, const CocycleTable& ct, std::size_t n, const FnOnSpace& f);

/// alpha_n(g)(x) = g(target_n(x)) on U_n, zero elsewhere. Exact for partial
/// maps; on cylinders, for g depending on the first m - n letters only.
FnOnSpace compose_alpha(const TransferSystem& ts, std::size_t n, const FnOnSpace& g);

/// rho_n = rho * alpha(rho) * ... * alpha_{n-1}(rho) on U_n, rho = rho_1.
/// Throws CocycleMismatch if it departs from e^{h_n} (relative 1e-12).
FnOnSpace rho_product(const TransferSystem& ts, const CocycleTable& ct, std::size_t n);

/// Entry (x, t) = rho_n(t) for t in the level-n fiber of x.
DenseMatrix transfer_matrix(const TransferSystem& ts, const CocycleTable& ct, std::size_t n);

/// (L_rho)*(nu)(t) = rho(t) nu(targets of t).
Measure ruelle_dual(const TransferSystem& ts, const CocycleTable& ct, const Measure& nu);

enum class EigenStatus { Converged, NoConvergence, Extinct };

std::string to_string(EigenStatus s);

struct EigenResult {
  EigenStatus status = EigenStatus::NoConvergence;
  double lambda = 0.0;
  /// probability measure (last iterate)
  Measure mu;
  /// || L_rho*(mu) - lambda mu ||_1 / lambda
  double residual = 0.0;
  std::size_t iterations = 0;
};

struct EigenOptions {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
};

/// Power iteration on L_rho* with l1 normalization, from `start` (uniform if
/// absent). lambda is the mass-growth ratio of the last step. Extinct means
/// the mass vanished (nilpotent dual), reported with lambda = 0.
EigenResult solve_eigenmeasure(const TransferSystem& ts, const CocycleTable& ct,
                               const std::optional<Measure>& start = std::nullopt, const EigenOptions& opt = {});

struct ReducibilityProbe {
  bool reducible = false;
  std::size_t runs = 0;
  std::size_t converged_runs = 0;
  std::size_t distinct_limits = 0;
};

/// Reruns the power iteration from every Dirac start and counts distinct
/// converged limits (l1 distance above `separation`).
ReducibilityProbe probe_reducibility(const TransferSystem& ts, const CocycleTable& ct, const EigenOptions& opt = {},
                                     double separation = 1e-6);

/// Three layers for each level n <= depth and each point indicator f = 1_t:
/// (a) integral of L_n(rho_n f) = lambda^n times integral over U_n of f,
/// (b) zeta_n(t) mu(t) = rho_n(t) mu(R_n(t)),
/// (c) Q*_n(mu) = 1_{U_n} mu,
/// plus "chain": (a) implies (b) implies (c).
QiReport verify_eigen_dlr(const TransferSystem& ts, const Calculus& calc, const Measure& mu, double lambda,
                          double tol = 1e-9);

}  // namespace gaprel
