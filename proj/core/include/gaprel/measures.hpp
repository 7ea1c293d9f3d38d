#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaprel/measure.hpp"
#include "gaprel/operators.hpp"
#include "gaprel/potential.hpp"
#include "gaprel/validation.hpp"

namespace gaprel {

/// Result of a quasi-invariance style check.
///
/// `verdicts` keeps the named conditions in evaluation order. A false verdict
/// is always accompanied by at least one witness naming its condition.
struct QiReport {
  std::string check;
  std::optional<std::size_t> level;
  std::vector<std::pair<std::string, bool>> verdicts;
  std::vector<Witness> witnesses;
  double tolerance = 0.0;
  std::optional<std::size_t> truncation_depth;
  /// largest relative residual seen over all compared identities
  double max_residual = 0.0;
  std::map<std::string, double> values;
  std::vector<std::string> notes;

  bool verdict() const;
  std::optional<bool> verdict_of(const std::string& name) const;
};

/// X = Z ⊔ W_0 ⊔ ... ⊔ W_{D-1} ⊔ W_inf at truncation depth D, where
/// V_n = U_n \ U_{n+1}, V_inf = U_D, Z = ∪ Z_n and W = V \ Z.
struct PartitionXWZ {
  std::size_t depth = 0;
  std::vector<PointSet> V;
  std::vector<PointSet> W;
  PointSet Vinf;
  PointSet Winf;
  PointSet Z;
  /// disjoint-cover and R-invariance checks
  ValidationReport checks;
};

/// mu(x0) = D_n(x0, y0) mu(y0) for every pair of R_n. On zeta-override
/// classes (stand-ins for infinite classes) mu must also vanish.
QiReport check_qi_direct(const Calculus& calc, const Measure& mu, std::size_t n, double tol = 1e-9);

/// The five equivalent conditions for mu restricted to U_n and the proper
/// relation R_n with weight rho_n, each over its spanning family of point
/// indicators. Throws InconsistentVerdicts if they disagree, or if they hold
/// while mu charges Z_n.
QiReport check_main_result(const Calculus& calc, const Measure& mu, std::size_t n, double tol = 1e-9);

/// mu = E*_{rho_n}(nu). Throws ZetaNotIntegrable when nu charges Z_n.
Measure construct_qi_from_nu(const Calculus& calc, const Measure& nu, std::size_t n);

/// Q*_n(mu) = 1_{U_n} mu for n = 0..depth, cross-checked against
/// P*_{rho_n}(mu|U_n) = mu|U_n.
QiReport check_main_for_q(const Calculus& calc, const Measure& mu, double tol = 1e-9);

PartitionXWZ partition_xwz(const Calculus& calc);

/// (i) mu(Z) = 0, (ii) Q*_k(mu_k) = mu_k for 1 <= k < D, (iii) Q*_i(mu_inf)
/// = mu_inf for 1 <= i <= D, with mu_k = 1_{W_k} mu. Throws
/// InconsistentVerdicts if the outcome differs from check_main_for_q.
QiReport check_charac_dlr(const Calculus& calc, const Measure& mu, double tol = 1e-9);

/// Q*_n(seed) for a probability seed living in W_n (default: Dirac mass at
/// the least point of W_n).
Measure construct_qi_on_wn(const Calculus& calc, std::size_t n,
                           const std::optional<Measure>& seed = std::nullopt);

struct WinfConstruction {
  Measure mu;
  std::size_t levels_used = 0;
  /// tv distance between successive iterates mu_n, mu_{n-1}
  std::vector<double> distances;
  bool converged = false;
  std::vector<std::string> notes;
};

/// mu_n = Q*_n(seed) for n up to min(depth, max_iter); the seed is normalized
/// and must live in W_inf. All levels are visited, since a deeper level can
/// still merge classes. converged reports whether the last step moved less
/// than tol; a result that has not settled is returned as such.
WinfConstruction construct_qi_on_winf(const Calculus& calc, const std::optional<Measure>& seed,
                                      double tol = 1e-9, std::size_t max_iter = 100000);

/// Quasi-invariance for e^b on the groupoid truncated at `depth`:
/// mu(x) = e^{b(x,n,y)} mu(y) over every enumerated triple. `infinite`, when
/// given, marks points in zeta-override classes, which must carry no mass.
QiReport check_conformal(const SpaceModel& model, const PartialFunction& h, const Measure& mu,
                         std::size_t depth, double tol = 1e-9, const PointSet* infinite = nullptr);

}  // namespace gaprel
