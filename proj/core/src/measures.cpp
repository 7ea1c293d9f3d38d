#include "gaprel/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaprel/error.hpp"
#include "tally.hpp"

namespace gaprel {

bool QiReport::verdict() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.second; });
}

std::optional<bool> QiReport::verdict_of(const std::string& name) const {
  for (const auto& [n, v] : verdicts) {
    if (n == name) return v;
  }
  return std::nullopt;
}

namespace {

using detail::Tally;

// Identities that hold by construction (not by hypothesis) are re-checked at
// this tolerance.
constexpr double kExactTol = 1e-12;

void check_size(const Calculus& calc, const Measure& mu) {
  if (mu.universe() != calc.size()) throw Error(ErrorCode::MalformedStructure, "measure size mismatch");
}

void check_level(const Calculus& calc, std::size_t n) {
  if (n > calc.depth()) {
    throw Error(ErrorCode::BadLevels,
                "level " + std::to_string(n) + " exceeds depth " + std::to_string(calc.depth()));
  }
}

double class_mass(const Measure& mu, const std::vector<PointId>& cls) {
  double s = 0.0;
  for (PointId y : cls) s += mu.weight(y);
  return s;
}

// Largest pointwise gap between two measures, as a witness.
Witness measure_gap_witness(const Measure& a, const Measure& b, std::size_t n, const std::string& note) {
  PointId worst = 0;
  double gap = -1.0;
  for (PointId x = 0; x < a.universe(); ++x) {
    const double d = std::fabs(a.weight(x) - b.weight(x));
    if (d > gap) {
      gap = d;
      worst = x;
    }
  }
  return {"", static_cast<long long>(n), {}, {worst}, a.weight(worst), b.weight(worst), note};
}

}  // namespace

QiReport check_qi_direct(const Calculus& calc, const Measure& mu, std::size_t n, double tol) {
  check_size(calc, mu);
  check_level(calc, n);
  QiReport report;
  report.check = "qi_direct";
  report.level = n;
  report.tolerance = tol;
  const PointSet& zn = calc.Z(n);
  Tally t(report, tol, mu.mass(calc.U(n)));
  t.begin("direct");
  const auto ln = static_cast<long long>(n);
  for (const auto& cls : calc.gap().relation(n).classes()) {
    if (zn.contains(cls.front())) {
      for (PointId z : cls) t.z_clause(mu.weight(z), n, z);
      continue;
    }
    // every pair, through the first member: D is multiplicative on a class
    for (PointId x : cls) {
      for (PointId y : cls) {
        if (x == y) continue;
        const double d = calc.cocycle().D(n, x, y);
        t.compare(mu.weight(x), d * mu.weight(y), {"mu(x) = D(x,y) mu(y)", ln, {}, {x, y}, {}, {}, ""});
      }
    }
  }
  report.values["mass_on_Z"] = mu.mass(zn);
  return report;
}

QiReport check_main_result(const Calculus& calc, const Measure& mu, std::size_t n, double tol) {
  check_size(calc, mu);
  check_level(calc, n);
  QiReport report;
  report.check = "main_result";
  report.level = n;
  report.tolerance = tol;
  const PointSet& un = calc.U(n);
  const PointSet& zn = calc.Z(n);
  const auto ln = static_cast<long long>(n);
  Tally t(report, tol, mu.mass(un));
  const auto& classes = calc.gap().relation(n).classes();
  auto in_z = [&](const std::vector<PointId>& cls) { return zn.contains(cls.front()); };

  // (i) mu(x0) = D(x0, y0) mu(y0)
  t.begin("i_direct");
  for (const auto& cls : classes) {
    if (in_z(cls)) {
      for (PointId z : cls) t.z_clause(mu.weight(z), n, z);
      continue;
    }
    for (PointId x : cls) {
      for (PointId y : cls) {
        if (x != y) {
          t.compare(mu.weight(x), calc.cocycle().D(n, x, y) * mu.weight(y),
                    {"mu(x) = D(x,y) mu(y)", ln, {}, {x, y}, {}, {}, ""});
        }
      }
    }
  }

  // (ii) with f = 1_a, g = 1_b: mu(a) rho(b) = rho(a) mu(b) when a ~ b
  t.begin("ii_symmetry");
  for (const auto& cls : classes) {
    if (in_z(cls)) {
      for (PointId z : cls) t.z_clause(mu.weight(z), n, z);
      continue;
    }
    for (PointId a : cls) {
      for (PointId b : cls) {
        if (a < b) {
          t.compare(mu.weight(a) * calc.rho(n, b), calc.rho(n, a) * mu.weight(b),
                    {"mu(a) rho(b) = rho(a) mu(b)", ln, {}, {a, b}, {}, {}, ""});
        }
      }
    }
  }

  // (iii) with f = 1_z: zeta(z) mu(z) = rho(z) mu(R(z))
  t.begin("iii_harmonic");
  for (const auto& cls : classes) {
    const double cm = class_mass(mu, cls);
    for (PointId z : cls) {
      if (in_z(cls)) {
        t.z_clause(mu.weight(z), n, z);
        continue;
      }
      t.compare(calc.zeta_at(n, z).value() * mu.weight(z), calc.rho(n, z) * cm,
                {"zeta(z) mu(z) = rho(z) mu(R(z))", ln, {}, {z}, {}, {}, ""});
    }
  }

  // (iv) with f = 1_z: mu(z) = rho(z) zeta(z)^-1 mu(R(z))
  t.begin("iv_fixed_point");
  for (const auto& cls : classes) {
    const double cm = class_mass(mu, cls);
    for (PointId z : cls) {
      if (in_z(cls)) {
        t.z_clause(mu.weight(z), n, z);
        continue;
      }
      t.compare(mu.weight(z), calc.normalized_weight(n, z) * cm,
                {"mu(z) = rho zeta^-1(z) mu(R(z))", ln, {}, {z}, {}, {}, ""});
    }
  }

  // (v) nu = zeta^-1 mu, then mu(z) = rho(z) nu(R(z))
  t.begin("v_built");
  std::vector<double> nu(calc.size(), 0.0);
  double zeta_nu = 0.0;
  for (PointId y : un.to_vector()) {
    if (zn.contains(y)) continue;
    nu[y] = mu.weight(y) / calc.zeta_at(n, y).value();
    zeta_nu += calc.zeta_at(n, y).value() * nu[y];
  }
  for (const auto& cls : classes) {
    double nu_cls = 0.0;
    for (PointId y : cls) nu_cls += nu[y];
    for (PointId z : cls) {
      if (in_z(cls)) {
        t.z_clause(mu.weight(z), n, z);
        continue;
      }
      t.compare(mu.weight(z), calc.rho(n, z) * nu_cls,
                {"mu(z) = rho(z) nu(R(z))", ln, {}, {z}, {}, {}, ""});
    }
  }

  const double mass_z = mu.mass(zn);
  report.values["mass_on_Z"] = mass_z;
  report.values["zeta_integral_nu"] = zeta_nu;

  const bool first = report.verdicts.front().second;
  for (const auto& [name, v] : report.verdicts) {
    if (v != first) {
      throw Error(ErrorCode::InconsistentVerdicts,
                  "condition " + name + " disagrees with i_direct at level " + std::to_string(n));
    }
  }
  if (first && mass_z > tol * std::max(mu.mass(un), 0.0)) {
    throw Error(ErrorCode::InconsistentVerdicts, "conditions hold while mu charges Z_" + std::to_string(n));
  }
  return report;
}

Measure construct_qi_from_nu(const Calculus& calc, const Measure& nu, std::size_t n) {
  check_size(calc, nu);
  check_level(calc, n);
  const PointSet& zn = calc.Z(n);
  for (PointId y : nu.support().to_vector()) {
    if (zn.contains(y)) {
      throw Error(ErrorCode::ZetaNotIntegrable,
                  "nu charges point " + std::to_string(y) + " where zeta_" + std::to_string(n) + " is infinite");
    }
  }
  // Only the part of nu on U_n is seen by E_rho_n.
  const Measure nu_n = restrict(nu, calc.U(n), RestrictMode::IndicatorMultiply);
  Measure mu = dual_apply(calc, {OperatorKind::ERho, n}, nu_n);

  double zeta_integral = 0.0;
  for (PointId y : nu_n.support().to_vector()) zeta_integral += calc.zeta_at(n, y).value() * nu_n.weight(y);
  if (std::fabs(mu.mass() - zeta_integral) > kExactTol * std::max(1.0, zeta_integral)) {
    throw Error(ErrorCode::InconsistentVerdicts, "mass of E*_rho(nu) differs from the zeta integral");
  }
  if (!check_qi_direct(calc, mu, n, 1e-9).verdict()) {
    throw Error(ErrorCode::InconsistentVerdicts, "E*_rho(nu) is not quasi-invariant");
  }
  return mu;
}

QiReport check_main_for_q(const Calculus& calc, const Measure& mu, double tol) {
  check_size(calc, mu);
  QiReport report;
  report.check = "main_for_q";
  report.tolerance = tol;
  report.truncation_depth = calc.depth();
  Tally t(report, tol, 0.0);
  for (std::size_t n = 0; n <= calc.depth(); ++n) {
    const PointSet& un = calc.U(n);
    const Measure lhs = dual_apply(calc, {OperatorKind::Q, n}, mu);
    const Measure rhs = restrict(mu, un, RestrictMode::IndicatorMultiply);

    // Q*_n(mu) restricted to U_n against P*_{rho_n}(mu|U_n): identical by
    // construction.
    const Measure mu_un = restrict(mu, un, RestrictMode::DomainRestrict);
    const Measure pstar = dual_apply(calc, {OperatorKind::PRho, n}, mu_un);
    if (tv_distance(lhs, pstar) > kExactTol * std::max(1.0, lhs.mass())) {
      throw Error(ErrorCode::InconsistentVerdicts,
                  "Q*_" + std::to_string(n) + "(mu) differs from P*(mu|U_n) on U_n");
    }

    const double scale = std::max(lhs.mass(), rhs.mass());
    const double dist = tv_distance(lhs, rhs);
    report.max_residual = std::max(report.max_residual, scale > 0.0 ? dist / scale : 0.0);
    t.begin("level_" + std::to_string(n));
    if (!approx_equal(lhs, rhs, tol)) {
      t.fail(measure_gap_witness(lhs, rhs, n, "Q*_n(mu) != 1_{U_n} mu"));
    }
  }
  return report;
}

PartitionXWZ partition_xwz(const Calculus& calc) {
  const std::size_t d = calc.depth();
  const std::size_t size = calc.size();
  PartitionXWZ p;
  p.depth = d;
  p.Z = calc.Z_all();
  for (std::size_t n = 0; n < d; ++n) {
    PointSet v = calc.U(n) - calc.U(n + 1);
    p.W.push_back(v - p.Z);
    p.V.push_back(std::move(v));
  }
  p.Vinf = calc.U(d);
  p.Winf = p.Vinf - p.Z;

  p.checks.subject = "partition_xwz";
  Check cover{"disjoint_cover", true, {}};
  std::vector<int> hits(size, 0);
  auto mark = [&](const PointSet& s) {
    for (PointId x : s.to_vector()) ++hits[x];
  };
  mark(p.Z);
  for (const auto& w : p.W) mark(w);
  mark(p.Winf);
  for (PointId x = 0; x < size; ++x) {
    if (hits[x] != 1) {
      cover.passed = false;
      if (cover.witnesses.size() < 8) {
        cover.witnesses.push_back({"each point in exactly one piece", {}, {}, {x}, static_cast<double>(hits[x]),
                                   1.0, ""});
      }
    }
  }

  Check inv{"r_invariance", true, {}};
  std::vector<std::pair<std::string, const PointSet*>> pieces;
  pieces.emplace_back("Z", &p.Z);
  for (std::size_t n = 0; n < d; ++n) {
    pieces.emplace_back("V_" + std::to_string(n), &p.V[n]);
    pieces.emplace_back("W_" + std::to_string(n), &p.W[n]);
  }
  pieces.emplace_back("V_inf", &p.Vinf);
  pieces.emplace_back("W_inf", &p.Winf);
  for (std::size_t n = 0; n <= d; ++n) {
    for (const auto& cls : calc.gap().relation(n).classes()) {
      for (const auto& [name, set] : pieces) {
        const bool in = set->contains(cls.front());
        for (PointId y : cls) {
          if (set->contains(y) != in) {
            inv.passed = false;
            if (inv.witnesses.size() < 8) {
              inv.witnesses.push_back({name + " invariant under R_n", static_cast<long long>(n), {},
                                       {cls.front(), y}, {}, {}, ""});
            }
            break;
          }
        }
      }
    }
  }
  p.checks.checks = {std::move(cover), std::move(inv)};
  return p;
}

QiReport check_charac_dlr(const Calculus& calc, const Measure& mu, double tol) {
  check_size(calc, mu);
  const PartitionXWZ p = partition_xwz(calc);
  const std::size_t d = calc.depth();
  QiReport report;
  report.check = "charac_dlr";
  report.tolerance = tol;
  report.truncation_depth = d;
  Tally t(report, tol, mu.mass());

  t.begin("i_mu_Z_zero");
  for (PointId z : p.Z.to_vector()) {
    t.compare(mu.weight(z), 0.0, {"mu(Z) = 0", {}, {}, {z}, {}, {}, ""});
  }
  report.values["mass_on_Z"] = mu.mass(p.Z);

  t.begin("ii_Wk_fixed");
  for (std::size_t k = 1; k < d; ++k) {
    const Measure mk = restrict(mu, p.W[k], RestrictMode::IndicatorMultiply);
    const Measure q = dual_apply(calc, {OperatorKind::Q, k}, mk);
    if (!approx_equal(q, mk, tol)) {
      Witness w = measure_gap_witness(q, mk, k, "Q*_k(mu_k) != mu_k");
      t.fail(std::move(w));
    }
  }

  t.begin("iii_Winf_fixed");
  const Measure minf = restrict(mu, p.Winf, RestrictMode::IndicatorMultiply);
  for (std::size_t i = 1; i <= d; ++i) {
    const Measure q = dual_apply(calc, {OperatorKind::Q, i}, minf);
    if (!approx_equal(q, minf, tol)) {
      t.fail(measure_gap_witness(q, minf, i, "Q*_i(mu_inf) != mu_inf"));
    }
  }

  const bool main_q = check_main_for_q(calc, mu, tol).verdict();
  report.values["main_for_q"] = main_q ? 1.0 : 0.0;
  if (main_q != report.verdict()) {
    throw Error(ErrorCode::InconsistentVerdicts,
                std::string("level-set characterization gives ") + (report.verdict() ? "true" : "false") +
                    " but Q*_n(mu) = 1_{U_n} mu gives " + (main_q ? "true" : "false"));
  }
  return report;
}

namespace {

Measure prepare_seed(const Calculus& calc, const std::optional<Measure>& seed, const PointSet& home,
                     ErrorCode off_home, const std::string& home_name) {
  Measure s = seed ? *seed : Measure::dirac(calc.size(), home.to_vector().front());
  check_size(calc, s);
  if (!s.lives_in(home)) {
    throw Error(off_home, "seed does not live in " + home_name);
  }
  return normalized(s);
}

}  // namespace

Measure construct_qi_on_wn(const Calculus& calc, std::size_t n, const std::optional<Measure>& seed) {
  const std::size_t d = calc.depth();
  if (n >= d) {
    throw Error(ErrorCode::BadLevels,
                "W_" + std::to_string(n) + " is not a finite-level piece at depth " + std::to_string(d));
  }
  const PartitionXWZ p = partition_xwz(calc);
  const PointSet& wn = p.W[n];
  if (wn.empty()) throw Error(ErrorCode::EmptyWn, "W_" + std::to_string(n) + " is empty");
  const Measure s = prepare_seed(calc, seed, wn, ErrorCode::OutsideDomain, "W_" + std::to_string(n));
  Measure mu = dual_apply(calc, {OperatorKind::Q, n}, s);

  if (!mu.lives_in(wn) || std::fabs(mu.mass() - 1.0) > kExactTol) {
    throw Error(ErrorCode::InconsistentVerdicts, "Q*_n(seed) is not a probability measure on W_n");
  }
  if (!check_charac_dlr(calc, mu, 1e-9).verdict()) {
    throw Error(ErrorCode::InconsistentVerdicts, "Q*_n(seed) fails the DLR characterization");
  }
  return mu;
}

WinfConstruction construct_qi_on_winf(const Calculus& calc, const std::optional<Measure>& seed, double tol,
                                      std::size_t max_iter) {
  const PartitionXWZ p = partition_xwz(calc);
  if (p.Winf.empty()) throw Error(ErrorCode::EmptyWinf, "W_inf is empty");
  if (const Check* c = p.checks.find("r_invariance"); c && !c->passed) {
    throw Error(ErrorCode::NotInvariantK, "W_inf is not R-invariant");
  }
  const Measure s = prepare_seed(calc, seed, p.Winf, ErrorCode::NotInvariantK, "W_inf");

  WinfConstruction out;
  out.notes.push_back("K = W_inf; continuity of zeta_n^-1 on K assumed (automatic on a finite model)");
  const std::size_t last = std::min(calc.depth(), max_iter);
  Measure prev = s;
  for (std::size_t n = 1; n <= last; ++n) {
    Measure cur = dual_apply(calc, {OperatorKind::Q, n}, s);
    out.distances.push_back(tv_distance(cur, prev));
    prev = std::move(cur);
  }
  out.mu = std::move(prev);
  out.levels_used = last;
  out.converged = out.distances.empty() || out.distances.back() < tol;
  if (last < calc.depth()) {
    out.notes.push_back("stopped at level " + std::to_string(last) + " of " + std::to_string(calc.depth()));
  }
  if (!out.converged) {
    out.notes.push_back("successive iterates still moving at the last level; no limit is claimed");
  }
  return out;
}

QiReport check_conformal(const SpaceModel& model, const PartialFunction& h, const Measure& mu, std::size_t depth,
                         double tol, const PointSet* infinite) {
  if (mu.universe() != model.size()) throw Error(ErrorCode::MalformedStructure, "measure size mismatch");
  QiReport report;
  report.check = "conformal";
  report.tolerance = tol;
  report.truncation_depth = depth;
  report.notes.push_back("groupoid truncated to witnesses (k, l) with k, l <= " + std::to_string(depth));
  Tally t(report, tol, mu.mass());
  t.begin("conformal");
  std::size_t triples = 0;
  for (const auto& w : enumerate_groupoid_witnessed(model, depth)) {
    const auto& [k, l] = w.witnesses.front();
    const double b = rd_cocycle_value(model, h, w.element, k, l);
    ++triples;
    if (w.element.x == w.element.y && w.element.n == 0) continue;
    t.compare(mu.weight(w.element.x), std::exp(b) * mu.weight(w.element.y),
              {"mu(x) = e^b(x,n,y) mu(y)", w.element.n, {}, {w.element.x, w.element.y}, {}, {},
               "witness (" + std::to_string(k) + ", " + std::to_string(l) + ")"});
  }
  if (infinite) {
    for (PointId z : infinite->to_vector()) t.z_clause(mu.weight(z), 0, z);
  }
  report.values["triples"] = static_cast<double>(triples);
  return report;
}

}  // namespace gaprel
