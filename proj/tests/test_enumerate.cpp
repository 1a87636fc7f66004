#include <catch2/catch_amalgamated.hpp>

#include "returnset/enumerate.hpp"

using namespace returnset;

TEST_CASE("preorder counts up to isomorphism") {
  // finite topologies on n points up to homeomorphism
  CHECK(all_preorders_up_to_iso(1).size() == 1);
  CHECK(all_preorders_up_to_iso(2).size() == 3);
  CHECK(all_preorders_up_to_iso(3).size() == 9);
  CHECK(all_preorders_up_to_iso(4).size() == 33);
}

TEST_CASE("monotone map and down-set counts on simple spaces") {
  const auto disc = FinitePreorder::discrete(3);
  CHECK(all_monotone_maps(disc).size() == 27);
  CHECK(all_down_sets(disc).size() == 8);

  const auto chain = FinitePreorder::from_pairs(3, {{0, 1}, {1, 2}, {0, 2}});
  // order-preserving self-maps of the 3-chain: C(2*3-1, 3) = 10
  CHECK(all_monotone_maps(chain).size() == 10);
  // down-sets of a chain: one per cut
  CHECK(all_down_sets(chain).size() == 4);
}

TEST_CASE("exhaustive verification on one and two points") {
  const auto r1 = exhaustive_verify(1, 1u << 20);
  CHECK(r1.ok());
  CHECK(r1.per_points.at(1).spaces == 1);

  const auto r2 = exhaustive_verify(2, 1u << 20);
  CHECK(r2.ok());
  CHECK(r2.per_points.at(2).spaces == 3);
}

TEST_CASE("exhaustive verification on three points") {
  const auto r = exhaustive_verify(3, 1u << 24);
  CHECK(r.ok());
  CHECK(r.certificates.empty());
  CHECK(r.per_points.at(3).spaces == 9);
  CHECK(r.per_points.at(3).forward_instances > 0);
  CHECK(r.per_points.at(3).backward_instances > 0);
  CHECK(r.per_points.at(3).partial_instances > 0);
}

TEST_CASE("budget exhaustion yields a partial report") {
  try {
    exhaustive_verify(3, 50);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.partial.budget_exceeded);
    CHECK(e.partial.instances_used > 50);
    CHECK(e.partial.budget == 50);
  }
}

TEST_CASE("max_points guard") {
  CHECK_THROWS_AS(exhaustive_verify(0, 100), OutOfRange);
  CHECK_THROWS_AS(exhaustive_verify(9, 100), OutOfRange);
}
