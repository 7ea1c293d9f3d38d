#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace gaprel::testing {

Instance make_instance(SpaceModel model, PartialFunction h, std::size_t depth, ZetaOverrides overrides) {
  Instance inst;
  inst.model = std::move(model);
  inst.h = std::move(h);
  inst.gap = gap_from_sigma(inst.model, depth);
  inst.depth = inst.gap.depth();
  inst.potential = potential_from_h(inst.model, inst.h, inst.depth);
  inst.cocycle = build_cocycle(inst.gap, inst.potential);
  inst.calc.emplace(inst.gap, inst.cocycle, std::move(overrides));
  return inst;
}

namespace {

std::vector<std::string> numbered_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return ids;
}

}  // namespace

Instance random_instance(Rng& rng, std::size_t points, double density, std::size_t depth, std::size_t pool) {
  std::bernoulli_distribution in_domain(density);
  const std::size_t range = pool == 0 ? points : std::min(pool, points);
  std::uniform_int_distribution<PointId> target(0, static_cast<PointId>(range - 1));
  std::uniform_real_distribution<double> hv(-2.0, 2.0);
  std::vector<std::optional<PointId>> sigma(points);
  PartialFunction h(points);
  for (std::size_t x = 0; x < points; ++x) {
    if (in_domain(rng)) sigma[x] = target(rng);
    h[x] = hv(rng);
  }
  return make_instance(SpaceModel(numbered_ids(points), std::move(sigma)), std::move(h), depth);
}

Instance random_override_instance(Rng& rng, std::size_t points, double density, std::size_t depth,
                                  std::size_t count) {
  Instance base = random_instance(rng, points, density, depth, std::max<std::size_t>(2, points / 3));
  ZetaOverrides ov;
  if (base.depth >= 1) {
    std::uniform_int_distribution<std::size_t> level(1, base.depth);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t n = level(rng);
      const auto& classes = base.gap.relation(n).classes();
      if (classes.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
      ov.declared.emplace_back(n, PointSet::of(points, classes[pick(rng)]));
    }
  }
  return make_instance(base.model, base.h, depth, std::move(ov));
}

Instance m0(std::size_t depth) {
  SpaceModel model({"0", "1", "2", "3"}, {std::nullopt, PointId{0}, PointId{0}, PointId{1}});
  PartialFunction h{0.0, std::log(2.0), 0.0, 0.0};
  return make_instance(std::move(model), std::move(h), depth);
}

Measure random_measure(Rng& rng, std::size_t size, double fill) {
  std::bernoulli_distribution on(fill);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::vector<double> weights(size, 0.0);
  for (auto& x : weights) {
    if (on(rng)) x = w(rng);
  }
  return Measure(std::move(weights));
}

FnOnSpace random_function(Rng& rng, std::size_t size) {
  std::uniform_real_distribution<double> w(0.0, 3.0);
  std::vector<double> v(size);
  for (auto& x : v) x = w(rng);
  return FnOnSpace::from_doubles(v);
}

Measure random_dlr_measure(Rng& rng, const Calculus& calc) {
  const std::size_t size = calc.size();
  const std::size_t d = calc.depth();
  PointSet z = calc.Z_all();
  std::uniform_real_distribution<double> w(0.1, 1.0);
  std::vector<double> total(size, 0.0);
  auto add_piece = [&](const PointSet& piece, std::size_t level) {
    if (piece.empty()) return;
    std::vector<double> seed(size, 0.0);
    for (PointId x : piece.to_vector()) seed[x] = w(rng);
    const Measure mu = dual_apply(calc, {OperatorKind::Q, level}, Measure(seed));
    for (PointId x = 0; x < size; ++x) total[x] += mu.weight(x);
  };
  for (std::size_t n = 0; n < d; ++n) add_piece((calc.U(n) - calc.U(n + 1)) - z, n);
  add_piece(calc.U(d) - z, d);
  return Measure(std::move(total));
}

std::optional<PointId> oracle_sigma_pow(const SpaceModel& m, PointId x, std::size_t n) {
  std::optional<PointId> cur = x;
  for (std::size_t i = 0; i < n && cur; ++i) cur = m.sigma_map()[*cur];
  return cur;
}

bool oracle_related(const SpaceModel& m, std::size_t n, PointId x, PointId y) {
  auto a = oracle_sigma_pow(m, x, n);
  auto b = oracle_sigma_pow(m, y, n);
  return a && b && *a == *b;
}

double oracle_h(const SpaceModel& m, const PartialFunction& h, std::size_t n, PointId x) {
  double s = 0.0;
  PointId cur = x;
  for (std::size_t i = 0; i < n; ++i) {
    s += *h[cur];
    cur = *m.sigma_map()[cur];
  }
  return s;
}

double oracle_zeta(const SpaceModel& m, const PartialFunction& h, std::size_t n, PointId x) {
  double s = 0.0;
  for (PointId y = 0; y < m.size(); ++y) {
    if (oracle_related(m, n, x, y)) s += std::exp(oracle_h(m, h, n, y));
  }
  return s;
}

Dense oracle_matrix_f(const SpaceModel& m, std::size_t n) {
  const std::size_t size = m.size();
  Dense d(size, std::vector<double>(size, 0.0));
  for (PointId x = 0; x < size; ++x) {
    for (PointId t = 0; t < size; ++t) d[x][t] = oracle_related(m, n, x, t) ? 1.0 : 0.0;
  }
  return d;
}

Dense oracle_matrix_erho(const SpaceModel& m, const PartialFunction& h, std::size_t n) {
  Dense d = oracle_matrix_f(m, n);
  for (PointId x = 0; x < d.size(); ++x) {
    for (PointId t = 0; t < d.size(); ++t) {
      if (d[x][t] != 0.0) d[x][t] = std::exp(oracle_h(m, h, n, t));
    }
  }
  return d;
}

Dense oracle_matrix_q(const SpaceModel& m, const PartialFunction& h, std::size_t n, const PointSet& infinite) {
  Dense d = oracle_matrix_erho(m, h, n);
  for (PointId x = 0; x < d.size(); ++x) {
    for (PointId t = 0; t < d.size(); ++t) {
      if (d[x][t] == 0.0) continue;
      // zeta^-1 of the class, 0 when it is infinite
      d[x][t] = infinite.contains(t) ? 0.0 : d[x][t] / oracle_zeta(m, h, n, t);
    }
  }
  return d;
}

bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace gaprel::testing
