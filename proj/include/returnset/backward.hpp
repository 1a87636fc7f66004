#pragma once

#include <utility>
#include <vector>

#include "returnset/decompose.hpp"
#include "returnset/errors.hpp"
#include "returnset/finite_system.hpp"
#include "returnset/preorder.hpp"
#include "returnset/window.hpp"

namespace returnset {

// A coherent backward orbit in lasso form: x_{-n} = preperiod[n] for n < t,
// then cycle[(n - t) mod c]. Coherence f(x_{-(n+1)}) = x_{-n} is checked at
// construction, including across the joint and around the cycle.
class BackwardOrbit {
 public:
  BackwardOrbit(const ContinuousSelfMap& map, std::vector<int> preperiod,
                std::vector<int> cycle)
      : preperiod_(std::move(preperiod)), cycle_(std::move(cycle)) {
    if (cycle_.empty()) throw OutOfRange("backward orbit needs a cycle");
    for (std::size_t i = 0; i + 1 < preperiod_.size(); ++i)
      if (map.apply(preperiod_[i + 1]) != preperiod_[i])
        throw OutOfRange("backward orbit is not coherent in the preperiod");
    if (!preperiod_.empty() && map.apply(cycle_[0]) != preperiod_.back())
      throw OutOfRange("backward orbit is not coherent across the joint");
    const std::size_t c = cycle_.size();
    for (std::size_t j = 0; j < c; ++j)
      if (map.apply(cycle_[(j + 1) % c]) != cycle_[j])
        throw OutOfRange("backward orbit is not coherent around the cycle");
  }

  const std::vector<int>& preperiod() const { return preperiod_; }
  const std::vector<int>& cycle() const { return cycle_; }
  u64 preperiod_length() const { return preperiod_.size(); }
  u64 cycle_length() const { return cycle_.size(); }

  int at(u64 n) const {
    if (n < preperiod_.size()) return preperiod_[n];
    return cycle_[(n - preperiod_.size()) % cycle_.size()];
  }

 private:
  std::vector<int> preperiod_;
  std::vector<int> cycle_;
};

struct BackwardOrbitEnumeration {
  std::vector<BackwardOrbit> orbits;
  bool truncated = false;
};

// Walks the preimage tree of x, pruning branches that cannot extend
// indefinitely. In a finite space an infinite coherent backward orbit lives
// entirely in the eventual image, where the map is a bijection, so each
// surviving branch follows a unique inverse cycle.
inline BackwardOrbitEnumeration enumerate_backward_orbits(
    const FinitePreorder& space, const ContinuousSelfMap& map, int x,
    std::size_t max_count) {
  if (!map.total()) throw OutOfRange("backward orbits need a total map");
  const std::size_t n = space.size();
  if (x < 0 || static_cast<std::size_t>(x) >= n)
    throw OutOfRange("start point out of range");

  // Eventual image: points with arbitrarily deep preimage chains.
  PointSet core = space.full();
  for (;;) {
    PointSet next = 0;
    for (std::size_t p = 0; p < n; ++p)
      if (in_set(core, static_cast<int>(p)))
        next |= singleton(map.apply(static_cast<int>(p)));
    if (next == core) break;
    core = next;
  }

  if (!in_set(core, x))
    throw NoBackwardOrbit("every preimage branch of the point dies out");

  // Unique core preimage chain from x back around its cycle.
  std::vector<int> cycle{x};
  for (int cur = x;;) {
    int pre = -1;
    for (std::size_t p = 0; p < n; ++p)
      if (in_set(core, static_cast<int>(p)) &&
          map.apply(static_cast<int>(p)) == cur) {
        pre = static_cast<int>(p);
        break;
      }
    if (pre < 0) throw Error("eventual image lost surjectivity");
    if (pre == x) break;
    cycle.push_back(pre);
    cur = pre;
  }

  BackwardOrbitEnumeration result;
  if (max_count == 0) {
    result.truncated = true;
    return result;
  }
  result.orbits.emplace_back(map, std::vector<int>{}, std::move(cycle));
  return result;
}

// Exact decomposition of S = {n : x_{-n} in Y} straight off the lasso:
// explicit below the preperiod, periodic along the cycle, empty residual.
inline std::pair<IndexWindow, APDecomposition> backward_return_set(
    const BackwardOrbit& orbit, PointSet target, u64 horizon) {
  const u64 t = orbit.preperiod_length();
  const u64 c = orbit.cycle_length();

  std::vector<Progression> progs;
  std::vector<u64> exceptional;
  for (u64 n = 0; n < t; ++n)
    if (in_set(target, orbit.preperiod()[n])) exceptional.push_back(n);
  for (u64 j = 0; j < c; ++j)
    if (in_set(target, orbit.cycle()[j]))
      progs.push_back(Progression{(t + j) % c, c, t + j});

  std::vector<u64> members;
  for (u64 n = 0; n < horizon; ++n)
    if (in_set(target, orbit.at(n))) members.push_back(n);

  APDecomposition dec;
  dec.structured = APSet(std::move(progs), std::move(exceptional));
  dec.residual = IndexWindow(horizon);
  if (horizon > 0)
    dec.residual_density = windowed_density(dec.residual, {horizon});
  return {IndexWindow(horizon, std::move(members)), dec};
}

}  // namespace returnset
