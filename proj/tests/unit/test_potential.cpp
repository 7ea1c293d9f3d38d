#include <cmath>

#include "doctest.h"
#include "gaprel/error.hpp"
#include "gaprel/potential.hpp"
#include "support.hpp"

using namespace gaprel;

namespace {

const double kLn2 = std::log(2.0);

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Unsupported;
}

}  // namespace

TEST_CASE("potential from h on the running example") {
  const auto inst = testing::m0();
  const Potential& p = inst.potential;
  CHECK(p.k(1, 1) == kLn2);
  CHECK(p.k(1, 2) == 0.0);
  CHECK(p.k(1, 3) == 0.0);
  CHECK(p.k(2, 3) == kLn2);
  CHECK(potential_from_h(inst.model, inst.h, 0).empty());
  CHECK(code_of([&] { (void)p.k(2, 1); }) == ErrorCode::MissingPotentialValue);

  PartialFunction partial = inst.h;
  partial[1].reset();
  CHECK(code_of([&] { potential_from_h(inst.model, partial, 2); }) == ErrorCode::MissingPotentialValue);
}

TEST_CASE("potential validation") {
  const auto inst = testing::m0();
  CHECK(validate_potential(inst.gap, inst.potential).ok());

  // s and t form one R_1 class inside U_2 but get different k_2
  const SpaceModel m({"r", "a", "s", "t"}, {std::nullopt, PointId{0}, PointId{1}, PointId{1}});
  const auto g = gap_from_sigma(m, 2);
  Potential bad({PartialFunction{std::nullopt, 0.0, 0.0, 0.0},
                 PartialFunction{std::nullopt, std::nullopt, 1.0, 2.0}});
  const auto r = validate_potential(g, bad);
  CHECK_FALSE(r.ok());
  const Check* inv = r.find("potential_invariance");
  REQUIRE(inv != nullptr);
  CHECK_FALSE(inv->passed);
  REQUIRE_FALSE(inv->witnesses.empty());
  CHECK(inv->witnesses.front().level == 2);
}

TEST_CASE("cocycle tables") {
  const auto inst = testing::m0();
  const CocycleTable& ct = inst.cocycle;
  CHECK(ct.h(1, 1) == kLn2);
  CHECK(ct.rho(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ct.rho(1, 2) == 1.0);
  CHECK(ct.c(1, 1, 2) == kLn2);
  CHECK(ct.D(1, 1, 2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ct.rho(2, 3) == doctest::Approx(2.0).epsilon(1e-15));
  for (PointId x : inst.gap.domain(1).to_vector()) CHECK(ct.c(1, x, x) == 0.0);
  CHECK(code_of([&] { (void)ct.h(2, 1); }) == ErrorCode::OutsideDomain);
}

TEST_CASE("gluing failure is reported") {
  // Explicit GAP where 1 ~ 2 at levels 1 and 2, with k_2 breaking the
  // agreement c_1 = c_2 on that pair.
  std::vector<Partition> rel{Partition::identity(PointSet::full(3)), Partition::from_classes(3, {{1, 2}}),
                             Partition::from_classes(3, {{1, 2}})};
  GapStructure g(3, std::move(rel));
  Potential p({PartialFunction{std::nullopt, 0.0, 0.0}, PartialFunction{std::nullopt, 1.0, 0.0}});
  CHECK(code_of([&] { build_cocycle(g, p); }) == ErrorCode::CocycleMismatch);
}

TEST_CASE("Renault-Deaconu cocycle values") {
  const auto inst = testing::m0();
  CHECK(rd_cocycle_value(inst.model, inst.h, {2, 0, 2}, 0, 0) == 0.0);
  CHECK(rd_cocycle_value(inst.model, inst.h, {1, 0, 2}, 1, 1) == kLn2);
  CHECK(rd_cocycle_value(inst.model, inst.h, {3, 1, 1}, 1, 0) == 0.0);
  CHECK(code_of([&] { rd_cocycle_value(inst.model, inst.h, {1, 0, 3}, 1, 1); }) == ErrorCode::InvalidWitness);
  CHECK(check_rd_witness_independence(inst.model, inst.h, 3).ok());
}

TEST_CASE("random potentials: sums, cocycle identities, agreement with b") {
  testing::Rng rng(31);
  for (int seed = 0; seed < 50; ++seed) {
    const auto inst = testing::random_instance(rng, 25 + seed, testing::kDensities[seed % 3], 6, 8);
    REQUIRE(validate_potential(inst.gap, inst.potential).ok());
    const auto& ct = inst.cocycle;
    for (std::size_t n = 0; n <= inst.depth; ++n) {
      for (PointId x : inst.gap.domain(n).to_vector()) {
        double sum = 0.0;
        for (std::size_t i = 1; i <= n; ++i) sum += inst.potential.k(i, x);
        CHECK(testing::close(ct.h(n, x), sum, 1e-12));
        CHECK(testing::close(ct.h(n, x), testing::oracle_h(inst.model, inst.h, n, x), 1e-12));
      }
      for (const auto& cls : inst.gap.relation(n).classes()) {
        for (PointId x : cls) {
          for (PointId y : cls) {
            CHECK(ct.c(n, x, y) == -ct.c(n, y, x));
            CHECK(testing::close(std::exp(ct.c(n, x, y)), ct.rho(n, x) / ct.rho(n, y), 1e-12));
            CHECK(testing::close(rd_cocycle_value(inst.model, inst.h, {x, 0, y}, n, n), ct.c(n, x, y), 1e-12));
            for (PointId z : cls) CHECK(testing::close(ct.c(n, x, y) + ct.c(n, y, z), ct.c(n, x, z), 1e-12));
          }
        }
      }
    }
    CHECK(check_rd_witness_independence(inst.model, inst.h, inst.depth).ok());
  }
}
