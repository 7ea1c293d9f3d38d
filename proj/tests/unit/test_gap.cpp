#include <algorithm>
#include <set>

#include "doctest.h"
#include "gaprel/error.hpp"
#include "gaprel/gap.hpp"
#include "support.hpp"

using namespace gaprel;
using Pts = std::vector<PointId>;

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

// R_1 = {1,2},{3} on U_1 = {1,2,3}; R_2 splits 1 and 2 on U_2 = {1,2}.
GapStructure coarse_then_fine() {
  std::vector<Partition> rel{Partition::identity(PointSet::full(4)),
                             Partition::from_classes(4, {{1, 2}, {3}}),
                             Partition::from_classes(4, {{1}, {2}})};
  return GapStructure(4, std::move(rel));
}

}  // namespace

TEST_CASE("relations of the running example") {
  const auto g = gap_from_sigma(testing::m0().model, 2);
  CHECK(g.relation(1).classes() == std::vector<Pts>{{1, 2}, {3}});
  CHECK(g.relation(2).classes() == std::vector<Pts>{{3}});
  CHECK(gap_from_sigma(testing::m0().model, 0).relation(0).classes() == std::vector<Pts>{{0}, {1}, {2}, {3}});

  const SpaceModel empty({"a", "b"}, {std::nullopt, std::nullopt});
  const auto ge = gap_from_sigma(empty, 1);
  CHECK(ge.domain(1).empty());
  CHECK(ge.relation(1).classes().empty());
}

TEST_CASE("class_of, union_class, decompose_class") {
  const auto g = gap_from_sigma(testing::m0().model, 3);
  CHECK(class_of(g, 1, 1) == Pts{1, 2});
  CHECK(class_of(g, 0, 2) == Pts{2});
  CHECK(code_of([&] { class_of(g, 2, 0); }) == ErrorCode::OutsideDomain);

  CHECK(union_class(g, 1) == Pts{1, 2});
  CHECK(union_class(g, 0) == Pts{0});

  auto blocks = decompose_class(g, 0, 1, 1);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].members == Pts{1});
  CHECK(blocks[1].members == Pts{2});
  CHECK(decompose_class(g, 1, 1, 1).size() == 1);
  blocks = decompose_class(g, 1, 2, 3);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].members == Pts{3});
  CHECK(code_of([&] { decompose_class(g, 2, 1, 3); }) == ErrorCode::BadLevels);
  CHECK(code_of([&] { decompose_class(g, 0, 1, 0); }) == ErrorCode::OutsideDomain);

  const SpaceModel identity_only({"a", "b", "c"}, {std::nullopt, std::nullopt, std::nullopt});
  CHECK(union_class(gap_from_sigma(identity_only, 2), 2) == Pts{2});
}

TEST_CASE("validation passes for sigma-derived structures and flags violations") {
  CHECK(validate_gap(gap_from_sigma(testing::m0().model, 3)).ok());

  const auto bad = validate_gap(coarse_then_fine());
  CHECK_FALSE(bad.ok());
  const Check* iii = bad.find("axiom_iii");
  REQUIRE(iii != nullptr);
  CHECK_FALSE(iii->passed);
  REQUIRE_FALSE(iii->witnesses.empty());
  CHECK(iii->witnesses.front().points == Pts{1, 2});

  std::vector<Partition> only_id{Partition::identity(PointSet::full(3))};
  CHECK(validate_gap(GapStructure(3, std::move(only_id))).ok());
}

TEST_CASE("R_0 must be the identity") {
  std::vector<Partition> rel{Partition::from_classes(2, {{0, 1}})};
  CHECK_THROWS_AS(GapStructure(2, std::move(rel)), Error);
}

TEST_CASE("groupoid enumeration") {
  const auto m = testing::m0().model;
  const auto g0 = enumerate_groupoid(m, 0);
  CHECK(g0.size() == 4);
  for (const auto& e : g0) CHECK((e.x == e.y && e.n == 0));

  const auto g1 = enumerate_groupoid(m, 1);
  auto has = [&](GroupoidElement e) { return std::find(g1.begin(), g1.end(), e) != g1.end(); };
  CHECK(has({3, 1, 1}));
  CHECK(has({1, 0, 2}));
  CHECK(has({1, -1, 3}));
  CHECK_FALSE(has({0, 0, 1}));
}

TEST_CASE("random structures: axioms, oracle relation, decomposition, union, groupoid kernel") {
  testing::Rng rng(21);
  for (int seed = 0; seed < 40; ++seed) {
    const auto inst = testing::random_instance(rng, 30 + seed, testing::kDensities[seed % 3], 6, 12);
    const auto& g = inst.gap;
    REQUIRE(validate_gap(g).ok());
    const std::size_t size = inst.model.size();
    for (std::size_t n = 0; n <= g.depth(); ++n) {
      for (PointId x = 0; x < size; ++x) {
        for (PointId y = 0; y < size; ++y) {
          REQUIRE(g.related(n, x, y) == testing::oracle_related(inst.model, n, x, y));
        }
      }
    }
    for (std::size_t m = 0; m <= g.depth(); ++m) {
      for (PointId x : g.domain(m).to_vector()) {
        for (std::size_t n = 0; n <= m; ++n) {
          const auto blocks = decompose_class(g, n, m, x);
          Pts all;
          bool x_rep = false;
          for (const auto& b : blocks) {
            all.insert(all.end(), b.members.begin(), b.members.end());
            x_rep = x_rep || b.representative == x;
            CHECK(b.members == class_of(g, n, b.representative));
          }
          std::sort(all.begin(), all.end());
          CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
          CHECK(all == class_of(g, m, x));
          CHECK(x_rep);
        }
      }
    }
    for (PointId x = 0; x < size; ++x) {
      const Pts cls = union_class(g, x);
      for (PointId y : cls) CHECK(union_class(g, y) == cls);
    }
    // k = l triples are exactly the union relation
    std::set<std::pair<PointId, PointId>> kernel;
    for (const auto& w : enumerate_groupoid_witnessed(inst.model, g.depth())) {
      for (auto [k, l] : w.witnesses) {
        CHECK(static_cast<long long>(k) - static_cast<long long>(l) == w.element.n);
        if (k == l) kernel.emplace(w.element.x, w.element.y);
      }
    }
    std::set<std::pair<PointId, PointId>> rel;
    for (std::size_t n = 0; n <= g.depth(); ++n) {
      for (const auto& cls : g.relation(n).classes()) {
        for (PointId a : cls) {
          for (PointId b : cls) rel.emplace(a, b);
        }
      }
    }
    CHECK(kernel == rel);
  }
}
