#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "returnset/backward.hpp"
#include "returnset/preorder.hpp"

using namespace returnset;

namespace {

FinitePreorder random_preorder(std::mt19937_64& rng, std::size_t n) {
  std::vector<PointSet> down(n);
  for (std::size_t x = 0; x < n; ++x) down[x] = singleton(static_cast<int>(x));
  std::uniform_int_distribution<std::size_t> pt(0, n - 1);
  std::uniform_int_distribution<int> cnt(0, static_cast<int>(n));
  for (int i = cnt(rng); i > 0; --i)
    down[pt(rng)] |= singleton(static_cast<int>(pt(rng)));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (in_set(down[x], static_cast<int>(y)) && (down[y] & ~down[x])) {
          down[x] |= down[y];
          changed = true;
        }
  }
  return FinitePreorder(n, std::move(down));
}

std::vector<int> random_monotone_map(std::mt19937_64& rng,
                                     const FinitePreorder& sp) {
  const std::size_t n = sp.size();
  std::uniform_int_distribution<int> pt(0, static_cast<int>(n) - 1);
  for (int attempt = 0; attempt < 400; ++attempt) {
    std::vector<int> f(n);
    for (auto& v : f) v = pt(rng);
    if (is_continuous(sp, f)) return f;
  }
  return std::vector<int>(n, pt(rng));
}

}  // namespace

TEST_CASE("two-point swap has a single backward orbit") {
  const auto sp = FinitePreorder::discrete(2);
  const ContinuousSelfMap swap(sp, {1, 0});
  const auto en = enumerate_backward_orbits(sp, swap, 0, 8);
  REQUIRE(en.orbits.size() == 1);
  CHECK_FALSE(en.truncated);
  CHECK(en.orbits[0].preperiod().empty());
  CHECK(en.orbits[0].cycle() == std::vector<int>{0, 1});
}

TEST_CASE("constant map backward orbit sits on the fixed point") {
  const auto sp = FinitePreorder::discrete(2);
  const ContinuousSelfMap constant(sp, {0, 0});
  const auto en = enumerate_backward_orbits(sp, constant, 0, 8);
  REQUIRE(en.orbits.size() == 1);
  CHECK(en.orbits[0].cycle() == std::vector<int>{0});
  // the other point has no preimage at all
  CHECK_THROWS_AS(enumerate_backward_orbits(sp, constant, 1, 8),
                  NoBackwardOrbit);
}

TEST_CASE("non-periodic points admit no backward orbit") {
  const auto sp = FinitePreorder::discrete(3);
  // 0 -> 1 -> 2 -> 2: only 2 is periodic
  const ContinuousSelfMap f(sp, {1, 2, 2});
  CHECK_THROWS_AS(enumerate_backward_orbits(sp, f, 0, 8), NoBackwardOrbit);
  CHECK_THROWS_AS(enumerate_backward_orbits(sp, f, 1, 8), NoBackwardOrbit);
  const auto en = enumerate_backward_orbits(sp, f, 2, 8);
  REQUIRE(en.orbits.size() == 1);
  CHECK(en.orbits[0].cycle() == std::vector<int>{2});
}

TEST_CASE("max_count zero flags truncation") {
  const auto sp = FinitePreorder::discrete(2);
  const ContinuousSelfMap swap(sp, {1, 0});
  const auto en = enumerate_backward_orbits(sp, swap, 0, 0);
  CHECK(en.orbits.empty());
  CHECK(en.truncated);
}

TEST_CASE("backward orbit coherence validation") {
  const auto sp = FinitePreorder::discrete(3);
  const ContinuousSelfMap rot(sp, {1, 2, 0});
  // valid: cycle read backward is 0, 2, 1
  CHECK_NOTHROW(BackwardOrbit(rot, {}, {0, 2, 1}));
  CHECK_THROWS_AS(BackwardOrbit(rot, {}, {0, 1, 2}), OutOfRange);
  // unrolled representation: x0 = 1 = rot(0), preperiod then the cycle
  CHECK_NOTHROW(BackwardOrbit(rot, {1}, {0, 2, 1}));
  CHECK_THROWS_AS(BackwardOrbit(rot, {2}, {0, 2, 1}), OutOfRange);
}

TEST_CASE("backward return set of the swap") {
  const auto sp = FinitePreorder::discrete(2);
  const ContinuousSelfMap swap(sp, {1, 0});
  const BackwardOrbit orbit(swap, {}, {0, 1});
  const auto [win, dec] = backward_return_set(orbit, singleton(0), 11);
  CHECK(win.members() == std::vector<u64>{0, 2, 4, 6, 8, 10});
  REQUIRE(dec.structured.progressions().size() == 1);
  CHECK(dec.structured.progressions()[0] == Progression{0, 2, 0});
  CHECK(dec.residual.empty());
}

TEST_CASE("three-cycle with one covered point") {
  const auto sp = FinitePreorder::discrete(3);
  const ContinuousSelfMap rot(sp, {1, 2, 0});
  const BackwardOrbit orbit(rot, {}, {0, 2, 1});
  const auto [win, dec] = backward_return_set(orbit, singleton(2), 12);
  CHECK(win.members() == std::vector<u64>{1, 4, 7, 10});
  REQUIRE(dec.structured.progressions().size() == 1);
  CHECK(dec.structured.progressions()[0] == Progression{1, 3, 1});
}

TEST_CASE("seeded lassos match direct simulation") {
  std::mt19937_64 rng(909090);
  int tested = 0;
  for (int trial = 0; trial < 4000 && tested < 1500; ++trial) {
    std::uniform_int_distribution<std::size_t> n_d(1, 6);
    const std::size_t n = n_d(rng);
    const auto sp = random_preorder(rng, n);
    const ContinuousSelfMap map(sp, random_monotone_map(rng, sp));
    std::uniform_int_distribution<int> pt(0, static_cast<int>(n) - 1);
    const int x = pt(rng);
    BackwardOrbitEnumeration en;
    try {
      en = enumerate_backward_orbits(sp, map, x, 4);
    } catch (const NoBackwardOrbit&) {
      continue;
    }
    REQUIRE(en.orbits.size() == 1);
    const auto& base = en.orbits[0];
    const u64 c = base.cycle_length();

    // unrolled representations of the same sequence
    std::uniform_int_distribution<u64> unroll_d(0, 2 * c);
    const u64 unroll = unroll_d(rng);
    std::vector<int> pre, cyc;
    for (u64 i = 0; i < unroll; ++i) pre.push_back(base.at(i));
    for (u64 j = 0; j < c; ++j) cyc.push_back(base.at(unroll + j));
    const BackwardOrbit lasso(map, pre, cyc);

    ++tested;
    std::uniform_int_distribution<PointSet> s_d(0, sp.full());
    const PointSet y = sp.closure(s_d(rng));
    const u64 h = unroll + 3 * c + 4;
    const auto [win, dec] = backward_return_set(lasso, y, h);
    CHECK(dec.residual.empty());
    CHECK(reconstruct(dec, h) == win);
    for (u64 m = 0; m < h + 2 * c; ++m) {
      CHECK(dec.structured.member(m) == in_set(y, base.at(m)));
      if (m < h) CHECK(win.contains(m) == in_set(y, base.at(m)));
    }
  }
  CHECK(tested >= 1000);
}
