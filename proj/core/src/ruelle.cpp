#include "gaprel/ruelle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaprel/error.hpp"
#include "tally.hpp"

namespace gaprel {

TransferSystem::TransferSystem(std::size_t universe, std::vector<std::vector<std::vector<PointId>>> fibers)
    : universe_(universe), fibers_(std::move(fibers)), empty_(universe) {
  if (fibers_.empty()) throw Error(ErrorCode::MalformedStructure, "transfer system needs level 0");
  for (std::size_t n = 0; n < fibers_.size(); ++n) {
    if (fibers_[n].size() != universe_) {
      throw Error(ErrorCode::MalformedStructure, "fiber table of level " + std::to_string(n) + " has wrong size");
    }
    std::vector<std::optional<PointId>> least(universe_);
    PointSet dom(universe_);
    for (PointId x = 0; x < universe_; ++x) {
      auto& fib = fibers_[n][x];
      std::sort(fib.begin(), fib.end());
      if (std::adjacent_find(fib.begin(), fib.end()) != fib.end()) {
        throw Error(ErrorCode::MalformedStructure, "repeated source in a fiber");
      }
      if (n == 0 && (fib.size() != 1 || fib.front() != x)) {
        throw Error(ErrorCode::MalformedStructure, "level-0 fibers must be the identity");
      }
      for (PointId t : fib) {
        if (t >= universe_) throw Error(ErrorCode::MalformedStructure, "fiber source out of range");
        dom.insert(t);
        if (!least[t]) least[t] = x;
      }
    }
    if (n > 0 && !dom.is_subset_of(domains_.back())) {
      throw Error(ErrorCode::MalformedStructure, "transfer domains must decrease");
    }
    targets_.push_back(std::move(least));
    domains_.push_back(std::move(dom));
  }
}

TransferSystem TransferSystem::from_sigma(const SpaceModel& model, std::size_t depth) {
  const DomainChain chain = build_domain_chain(model, depth);
  const std::size_t size = model.size();
  std::vector<std::vector<std::vector<PointId>>> fibers(chain.depth() + 1,
                                                        std::vector<std::vector<PointId>>(size));
  for (std::size_t n = 0; n <= chain.depth(); ++n) {
    for (PointId t : chain.level(n).to_vector()) fibers[n][iterate(model, t, n)].push_back(t);
  }
  return TransferSystem(size, std::move(fibers));
}

const std::vector<PointId>& TransferSystem::fiber(std::size_t n, PointId x) const {
  if (n > depth()) throw Error(ErrorCode::BadLevels, "no transfer level " + std::to_string(n));
  return fibers_[n].at(x);
}

const PointSet& TransferSystem::domain(std::size_t n) const { return n <= depth() ? domains_[n] : empty_; }

std::optional<PointId> TransferSystem::target(std::size_t n, PointId t) const {
  if (n > depth()) return std::nullopt;
  return targets_[n].at(t);
}

FullShiftInstance full_shift_cylinders(std::size_t alphabet, std::size_t length, const std::vector<double>& h) {
  if (alphabet < 1 || alphabet > 26) throw Error(ErrorCode::MalformedStructure, "alphabet size must be 1..26");
  if (length < 1) throw Error(ErrorCode::MalformedStructure, "word length must be positive");
  if (h.size() != alphabet) throw Error(ErrorCode::MalformedStructure, "need one potential value per symbol");
  std::vector<std::size_t> pow(length + 1, 1);
  for (std::size_t i = 1; i <= length; ++i) {
    pow[i] = pow[i - 1] * alphabet;
    if (pow[i] > (1U << 20)) throw Error(ErrorCode::MalformedStructure, "too many words");
  }
  const std::size_t size = pow[length];
  // letter i of word x (0 = leftmost)
  auto letter = [&](std::size_t x, std::size_t i) { return (x / pow[length - 1 - i]) % alphabet; };

  FullShiftInstance inst;
  inst.alphabet = alphabet;
  inst.length = length;
  for (std::size_t x = 0; x < size; ++x) {
    std::string id;
    for (std::size_t i = 0; i < length; ++i) id.push_back(static_cast<char>('a' + letter(x, i)));
    inst.ids.push_back(std::move(id));
  }

  // R_n: same letters from position n on
  std::vector<Partition> rel;
  for (std::size_t n = 0; n <= length; ++n) {
    std::vector<std::int64_t> keys(size);
    for (std::size_t x = 0; x < size; ++x) keys[x] = static_cast<std::int64_t>(x % pow[length - n]);
    rel.push_back(Partition::from_keys(keys));
  }
  inst.gap = GapStructure(size, std::move(rel));

  std::vector<PartialFunction> k;
  for (std::size_t n = 1; n <= length; ++n) {
    PartialFunction kn(size);
    for (std::size_t x = 0; x < size; ++x) kn[x] = h[letter(x, n - 1)];
    k.push_back(std::move(kn));
  }
  inst.potential = Potential(std::move(k));

  std::vector<std::vector<std::vector<PointId>>> fibers(length + 1, std::vector<std::vector<PointId>>(size));
  for (std::size_t n = 0; n <= length; ++n) {
    for (std::size_t x = 0; x < size; ++x) {
      const std::size_t tail = x / pow[n];
      for (std::size_t u = 0; u < pow[n]; ++u) {
        fibers[n][x].push_back(static_cast<PointId>(u * pow[length - n] + tail));
      }
    }
  }
  inst.transfer = TransferSystem(size, std::move(fibers));
  return inst;
}

namespace {

void check_fn(const TransferSystem& ts, const FnOnSpace& f) {
  if (f.size() != ts.size()) throw Error(ErrorCode::MalformedStructure, "function size mismatch");
}

}  // namespace

FnOnSpace transfer_apply(const TransferSystem& ts, std::size_t n, const FnOnSpace& f) {
  check_fn(ts, f);
  FnOnSpace out = FnOnSpace::zero(ts.size());
  for (PointId x = 0; x < ts.size(); ++x) {
    ExtReal s;
    for (PointId t : ts.fiber(n, x)) s = s + f[t];
    out.values[x] = s;
  }
  return out;
}

FnOnSpace ruelle_apply(const TransferSystem& ts, const CocycleTable& ct, std::size_t n, const FnOnSpace& f) {
  check_fn(ts, f);
  FnOnSpace weighted = FnOnSpace::zero(ts.size());
  for (PointId t : ts.domain(n).to_vector()) weighted.values[t] = ExtReal(ct.rho(n, t)) * f[t];
  return transfer_apply(ts, n, weighted);
}

FnOnSpace compose_alpha(const TransferSystem& ts, std::size_t n, const FnOnSpace& g) {
  check_fn(ts, g);
  if (n > ts.depth()) throw Error(ErrorCode::BadLevels, "no transfer level " + std::to_string(n));
  FnOnSpace out = FnOnSpace::zero(ts.size());
  for (PointId x : ts.domain(n).to_vector()) out.values[x] = g[*ts.target(n, x)];
  out.support_level = n;
  return out;
}

FnOnSpace rho_product(const TransferSystem& ts, const CocycleTable& ct, std::size_t n) {
  if (n == 0 || n > ts.depth()) throw Error(ErrorCode::BadLevels, "rho_n needs 1 <= n <= depth");
  FnOnSpace out = FnOnSpace::zero(ts.size());
  for (PointId x : ts.domain(n).to_vector()) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= ct.rho(1, *ts.target(i, x));
    const double expected = ct.rho(n, x);
    if (std::fabs(p - expected) > 1e-12 * std::max(p, expected)) {
      throw Error(ErrorCode::CocycleMismatch,
                  "product of rho along the orbit differs from e^{h_n} at point " + std::to_string(x));
    }
    out.values[x] = p;
  }
  out.support_level = n;
  return out;
}

DenseMatrix transfer_matrix(const TransferSystem& ts, const CocycleTable& ct, std::size_t n) {
  const std::size_t size = ts.size();
  DenseMatrix m{size, size, std::vector<double>(size * size, 0.0)};
  for (PointId x = 0; x < size; ++x) {
    for (PointId t : ts.fiber(n, x)) m.entries[x * size + t] = ct.rho(n, t);
  }
  return m;
}

Measure ruelle_dual(const TransferSystem& ts, const CocycleTable& ct, const Measure& nu) {
  if (nu.universe() != ts.size()) throw Error(ErrorCode::MalformedStructure, "measure size mismatch");
  if (ts.depth() < 1) throw Error(ErrorCode::BadLevels, "transfer system has no level 1");
  std::vector<double> w(ts.size(), 0.0);
  for (PointId x = 0; x < ts.size(); ++x) {
    const double nx = nu.weight(x);
    if (nx == 0.0) continue;
    for (PointId t : ts.fiber(1, x)) w[t] += nx;
  }
  for (PointId t = 0; t < ts.size(); ++t) {
    if (w[t] != 0.0) w[t] *= ct.rho(1, t);
  }
  return Measure(std::move(w));
}

std::string to_string(EigenStatus s) {
  switch (s) {
    case EigenStatus::Converged: return "converged";
    case EigenStatus::NoConvergence: return "no_convergence";
    case EigenStatus::Extinct: return "extinct";
  }
  return "unknown";
}

EigenResult solve_eigenmeasure(const TransferSystem& ts, const CocycleTable& ct, const std::optional<Measure>& start,
                               const EigenOptions& opt) {
  if (!(opt.tol > 0.0)) throw Error(ErrorCode::MalformedStructure, "tolerance must be positive");
  const Measure s = start ? *start : Measure(std::vector<double>(ts.size(), 1.0));
  if (s.universe() != ts.size()) throw Error(ErrorCode::MalformedStructure, "start measure size mismatch");
  if (!(s.mass() > 0.0)) throw Error(ErrorCode::ZeroStartMass, "start measure has zero mass");

  EigenResult r;
  Measure nu = normalized(s);
  for (std::size_t it = 1;; ++it) {
    const Measure w = ruelle_dual(ts, ct, nu);
    const double m = w.mass();
    if (!(m > 0.0)) {
      // L_rho*(nu) = 0: nu is an eigenvector for 0
      r.status = EigenStatus::Extinct;
      r.lambda = 0.0;
      r.mu = nu;
      r.residual = 0.0;
      r.iterations = it;
      return r;
    }
    Measure next = scaled(w, 1.0 / m);
    const double step = tv_distance(next, nu);
    nu = std::move(next);
    r.iterations = it;
    if (step < opt.tol || it >= opt.max_iter) {
      r.status = step < opt.tol ? EigenStatus::Converged : EigenStatus::NoConvergence;
      break;
    }
  }
  // lambda and the residual are read off the returned measure itself
  const Measure w = ruelle_dual(ts, ct, nu);
  r.lambda = w.mass();
  r.mu = nu;
  if (!(r.lambda > 0.0)) {
    r.status = EigenStatus::Extinct;
    r.lambda = 0.0;
    r.residual = 0.0;
    return r;
  }
  r.residual = tv_distance(w, scaled(nu, r.lambda)) / r.lambda;
  return r;
}

ReducibilityProbe probe_reducibility(const TransferSystem& ts, const CocycleTable& ct, const EigenOptions& opt,
                                     double separation) {
  ReducibilityProbe p;
  std::vector<Measure> limits;
  for (PointId x = 0; x < ts.size(); ++x) {
    const EigenResult r = solve_eigenmeasure(ts, ct, Measure::dirac(ts.size(), x), opt);
    ++p.runs;
    if (r.status != EigenStatus::Converged) continue;
    ++p.converged_runs;
    const bool seen = std::any_of(limits.begin(), limits.end(),
                                  [&](const Measure& m) { return tv_distance(m, r.mu) <= separation; });
    if (!seen) limits.push_back(r.mu);
  }
  p.distinct_limits = limits.size();
  p.reducible = limits.size() > 1;
  return p;
}

QiReport verify_eigen_dlr(const TransferSystem& ts, const Calculus& calc, const Measure& mu, double lambda,
                          double tol) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::MalformedStructure, "lambda must be positive and finite");
  }
  if (ts.size() != calc.size() || mu.universe() != calc.size()) {
    throw Error(ErrorCode::MalformedStructure, "size mismatch between transfer system, calculus and measure");
  }
  const std::size_t d = std::min(ts.depth(), calc.depth());
  for (std::size_t n = 0; n <= d; ++n) {
    if (!(ts.domain(n) == calc.U(n))) {
      throw Error(ErrorCode::MalformedStructure, "transfer domain U_" + std::to_string(n) + " differs from the GAP");
    }
  }

  QiReport report;
  report.check = "eigen_dlr";
  report.tolerance = tol;
  report.truncation_depth = d;
  report.values["lambda"] = lambda;
  detail::Tally t(report, tol, 0.0);
  const std::size_t size = calc.size();

  t.begin("a_half_step");
  double lambda_n = 1.0;
  for (std::size_t n = 0; n <= d; ++n) {
    const PointSet& un = calc.U(n);
    t.set_scale(lambda_n * mu.mass(un));
    for (PointId s = 0; s < size; ++s) {
      const FnOnSpace lf = ruelle_apply(ts, calc.cocycle(), n, FnOnSpace::point_indicator(size, s));
      double lhs = 0.0;
      for (PointId x = 0; x < size; ++x) lhs += lf[x].value() * mu.weight(x);
      const double rhs = un.contains(s) ? lambda_n * mu.weight(s) : 0.0;
      t.compare(lhs, rhs, {"integral of L_n(rho_n 1_t) = lambda^n mu(t)", static_cast<long long>(n), {}, {s}, {},
                           {}, ""});
    }
    lambda_n *= lambda;
  }

  t.begin("b_balance");
  for (std::size_t n = 0; n <= d; ++n) {
    const PointSet& un = calc.U(n);
    t.set_scale(mu.mass(un));
    FnOnSpace rho_n = FnOnSpace::zero(size);
    for (PointId x : un.to_vector()) rho_n.values[x] = calc.rho(n, x);
    const FnOnSpace e_rho = expectation(calc.gap(), n, rho_n);
    for (const auto& cls : calc.gap().relation(n).classes()) {
      double cm = 0.0;
      for (PointId y : cls) cm += mu.weight(y);
      for (PointId s : cls) {
        t.compare(e_rho[s].value() * mu.weight(s), calc.rho(n, s) * cm,
                  {"E_n(rho_n)(t) mu(t) = rho_n(t) mu(R_n(t))", static_cast<long long>(n), {}, {s}, {}, {}, ""});
      }
    }
  }

  t.begin("c_dlr");
  const QiReport q = check_main_for_q(calc, mu, tol);
  for (const auto& w : q.witnesses) t.fail(w);

  const bool a = *report.verdict_of("a_half_step");
  const bool b = *report.verdict_of("b_balance");
  const bool c = *report.verdict_of("c_dlr");
  t.begin("chain");
  if ((a && !b) || (b && !c)) {
    t.fail({"", {}, {}, {}, {}, {}, a && !b ? "(a) holds but (b) fails" : "(b) holds but (c) fails"});
  }
  return report;
}

}  // namespace gaprel
