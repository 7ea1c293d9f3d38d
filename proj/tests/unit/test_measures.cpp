#include <cmath>

#include "doctest.h"
#include "gaprel/error.hpp"
#include "gaprel/measures.hpp"
#include "support.hpp"

using namespace gaprel;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Unsupported;
}

Measure weights(std::vector<double> w) { return Measure(std::move(w)); }

PointSet set_of(std::size_t size, std::vector<PointId> pts) { return PointSet::of(size, pts); }

// every report with a false verdict names a witness for it, and vice versa
void check_witness_contract(const QiReport& r) {
  for (const auto& [name, v] : r.verdicts) {
    bool has = false;
    for (const auto& w : r.witnesses) has = has || w.condition.compare(0, name.size(), name) == 0;
    CHECK(has == !v);
  }
}

}  // namespace

TEST_CASE("restriction semantics") {
  const Measure mu = weights({1, 2});
  const PointSet y = set_of(2, {1});
  const Measure ind = restrict(mu, y, RestrictMode::IndicatorMultiply);
  CHECK(ind.weight(0) == 0.0);
  CHECK(ind.weight(1) == 2.0);
  CHECK(ind.domain() == PointSet::full(2));
  const Measure dom = restrict(mu, y, RestrictMode::DomainRestrict);
  CHECK(dom.domain() == y);
  CHECK(dom.weight(1) == 2.0);
  for (auto mode : {RestrictMode::IndicatorMultiply, RestrictMode::DomainRestrict}) {
    const Measure full = restrict(mu, PointSet::full(2), mode);
    CHECK(full.weights() == mu.weights());
  }
  CHECK(code_of([] { normalized(Measure(3)); }) == ErrorCode::ZeroMass);
}

TEST_CASE("direct quasi-invariance on the running example") {
  const auto inst = testing::m0();
  const Calculus& c = *inst.calc;
  const auto pass = check_qi_direct(c, weights({0, 2, 1, 0}), 1);
  CHECK(pass.verdict());
  check_witness_contract(pass);
  const auto fail = check_qi_direct(c, weights({0, 1, 1, 0}), 1);
  CHECK_FALSE(fail.verdict());
  REQUIRE_FALSE(fail.witnesses.empty());
  CHECK(fail.witnesses.front().points == std::vector<PointId>{1, 2});
  check_witness_contract(fail);
  CHECK(check_qi_direct(c, weights({5, 1, 3, 2}), 0).verdict());
}

TEST_CASE("main result: five agreeing verdicts") {
  const auto inst = testing::m0();
  const Calculus& c = *inst.calc;
  const auto good = check_main_result(c, weights({0, 2, 1, 0}), 1);
  CHECK(good.verdicts.size() == 5);
  for (const auto& [name, v] : good.verdicts) CHECK(v);
  CHECK(good.values.at("mass_on_Z") == 0.0);
  const auto bad = check_main_result(c, weights({0, 1, 1, 0}), 1);
  for (const auto& [name, v] : bad.verdicts) CHECK_FALSE(v);
  check_witness_contract(bad);
  CHECK(check_main_result(c, Measure(4), 1).verdict());
}

TEST_CASE("construct from nu") {
  const auto inst = testing::m0();
  const Calculus& c = *inst.calc;
  const Measure mu = construct_qi_from_nu(c, Measure::dirac(4, 1, 1.0 / 3.0), 1);
  CHECK(mu.weight(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(mu.weight(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mu.mass() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(construct_qi_from_nu(c, Measure(4), 1).is_zero());

  ZetaOverrides ov;
  ov.declared.emplace_back(1, set_of(4, {1, 2}));
  const Calculus co(inst.gap, inst.cocycle, ov);
  CHECK(code_of([&] { construct_qi_from_nu(co, Measure::dirac(4, 1), 1); }) == ErrorCode::ZetaNotIntegrable);
}

TEST_CASE("main result for Q") {
  const auto inst = testing::m0();
  const Calculus& c = *inst.calc;
  CHECK(check_main_for_q(c, Measure::dirac(4, 0)).verdict());
  const auto r = check_main_for_q(c, Measure::dirac(4, 1));
  CHECK_FALSE(r.verdict());
  CHECK(r.verdict_of("level_1") == false);
  CHECK(r.verdict_of("level_0") == true);
  check_witness_contract(r);
  CHECK(check_main_for_q(c, weights({0, 2, 1, 0})).verdict());
}

TEST_CASE("V/W/Z partition") {
  const auto inst = testing::m0();
  const auto p = partition_xwz(*inst.calc);
  REQUIRE(p.V.size() == 3);
  CHECK(p.V[0] == set_of(4, {0}));
  CHECK(p.V[1] == set_of(4, {1, 2}));
  CHECK(p.V[2] == set_of(4, {3}));
  CHECK(p.Vinf.empty());
  CHECK(p.Z.empty());
  for (std::size_t n = 0; n < 3; ++n) CHECK(p.W[n] == p.V[n]);
  CHECK(p.checks.ok());

  // total map: every finite level piece is empty
  const SpaceModel total({"a", "b"}, {PointId{1}, PointId{1}});
  const auto ti = testing::make_instance(total, PartialFunction{0.3, -0.1}, 3);
  const auto pt = partition_xwz(*ti.calc);
  for (const auto& v : pt.V) CHECK(v.empty());
  CHECK(pt.Vinf == PointSet::full(2));

  ZetaOverrides ov;
  ov.declared.emplace_back(1, set_of(4, {1, 2}));
  const Calculus co(inst.gap, inst.cocycle, ov);
  const auto po = partition_xwz(co);
  CHECK(po.Z == set_of(4, {1, 2}));
  CHECK(po.W[1].empty());
  CHECK(po.checks.ok());
}

TEST_CASE("DLR characterization") {
  const auto inst = testing::m0();
  const Calculus& c = *inst.calc;
  CHECK(check_charac_dlr(c, Measure::dirac(4, 0)).verdict());
  CHECK(check_charac_dlr(c, weights({0.5, 2, 1, 0.25})).verdict());
  CHECK_FALSE(check_charac_dlr(c, Measure::dirac(4, 1)).verdict());

  ZetaOverrides ov;
  ov.declared.emplace_back(1, set_of(4, {1, 2}));
  const Calculus co(inst.gap, inst.cocycle, ov);
  const auto r = check_charac_dlr(co, weights({0, 2, 1, 0}));
  CHECK(r.verdict_of("i_mu_Z_zero") == false);
  CHECK_FALSE(r.verdict());
}

TEST_CASE("constructions on W_n and W_inf") {
  const auto inst = testing::m0();
  const Calculus& c = *inst.calc;
  const Measure mu = construct_qi_on_wn(c, 1, Measure::dirac(4, 1));
  CHECK(mu.weight(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(mu.weight(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(construct_qi_on_wn(c, 0).weights() == Measure::dirac(4, 0).weights());

  ZetaOverrides ov;
  ov.declared.emplace_back(1, set_of(4, {1, 2}));
  const Calculus co(inst.gap, inst.cocycle, ov);
  CHECK(code_of([&] { construct_qi_on_wn(co, 1); }) == ErrorCode::EmptyWn);
  CHECK(code_of([&] { construct_qi_on_winf(c, std::nullopt); }) == ErrorCode::EmptyWinf);

  // two points, sigma total and collapsing: one class from level 1 on
  const SpaceModel total({"a", "b"}, {PointId{1}, PointId{1}});
  const double ha = 0.7;
  const double hb = -0.4;
  const auto ti = testing::make_instance(total, PartialFunction{ha, hb}, 4);
  const auto w = construct_qi_on_winf(*ti.calc, Measure::dirac(2, 0));
  CHECK(w.converged);
  CHECK(w.levels_used == 4);
  // rho_n(a) / rho_n(b) = e^{ha - hb}, the tail along b being shared
  const double ra = std::exp(ha - hb);
  CHECK(w.mu.weight(0) == doctest::Approx(ra / (1 + ra)).epsilon(1e-12));
  CHECK(check_main_for_q(*ti.calc, w.mu).verdict());

  const auto t0 = testing::make_instance(total, PartialFunction{ha, hb}, 0);
  const Measure seed(std::vector<double>{0.25, 0.75});
  CHECK(construct_qi_on_winf(*t0.calc, seed).mu.weights() == seed.weights());

  const SpaceModel mixed({"a", "b", "c"}, {PointId{1}, PointId{1}, std::nullopt});
  const auto mi = testing::make_instance(mixed, PartialFunction{0.1, 0.2, 0.0}, 3);
  CHECK(code_of([&] { construct_qi_on_winf(*mi.calc, Measure::dirac(3, 2)); }) == ErrorCode::NotInvariantK);
}

TEST_CASE("conformal measures") {
  // sigma-fixed point with h = 0, isolated from the rest
  const SpaceModel m({"x", "p", "q"}, {PointId{0}, PointId{2}, std::nullopt});
  const PartialFunction h{0.0, 0.5, -0.25};
  for (std::size_t depth : {1u, 3u, 6u}) {
    const auto r = check_conformal(m, h, Measure::dirac(3, 0), depth);
    CHECK(r.verdict());
    CHECK(r.truncation_depth == depth);
  }

  // DLR but not conformal: delta at 0 on the running example
  const auto inst = testing::m0();
  const Measure d0 = Measure::dirac(4, 0);
  CHECK(check_main_for_q(*inst.calc, d0).verdict());
  const auto conf = check_conformal(inst.model, inst.h, d0, 3);
  CHECK_FALSE(conf.verdict());
  check_witness_contract(conf);
}

TEST_CASE("invariant pieces of a DLR measure stay DLR") {
  testing::Rng rng(51);
  for (int seed = 0; seed < 30; ++seed) {
    const auto inst = testing::random_override_instance(rng, 30 + seed, testing::kDensities[seed % 3], 5, 2);
    const Calculus& c = *inst.calc;
    const Measure mu = testing::random_dlr_measure(rng, c);
    REQUIRE(check_main_for_q(c, mu).verdict());
    const auto p = partition_xwz(c);
    for (const auto& w : p.W) CHECK(check_main_for_q(c, restrict(mu, w, RestrictMode::IndicatorMultiply)).verdict());
    CHECK(check_main_for_q(c, restrict(mu, p.Winf, RestrictMode::IndicatorMultiply)).verdict());
  }
}

TEST_CASE("P_rho* suite at each level") {
  testing::Rng rng(61);
  for (int seed = 0; seed < 30; ++seed) {
    const auto inst = testing::random_override_instance(rng, 25 + seed, testing::kDensities[seed % 3], 5, 2);
    const Calculus& c = *inst.calc;
    const Measure nu = testing::random_measure(rng, c.size());
    for (std::size_t n = 0; n <= c.depth(); ++n) {
      const Measure nu_n = restrict(nu, c.U(n), RestrictMode::DomainRestrict);
      const Measure p = dual_apply(c, {OperatorKind::PRho, n}, nu_n);
      CHECK(approx_equal(dual_apply(c, {OperatorKind::PRho, n}, p), p, 1e-12));
      CHECK(check_qi_direct(c, p, n).verdict());
      // invariant sets: single classes
      for (const auto& cls : c.gap().relation(n).classes()) {
        const PointSet a = PointSet::of(c.size(), cls);
        CHECK(testing::close(p.mass(a), nu_n.mass(a - c.Z(n)), 1e-12));
      }
    }
  }
}
