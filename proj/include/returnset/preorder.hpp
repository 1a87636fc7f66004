#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"

namespace returnset {

// Subset of the points of a finite space, as a bitmask. Spaces are capped at
// 64 points.
using PointSet = std::uint64_t;

inline int popcount(PointSet s) { return std::popcount(s); }
inline bool in_set(PointSet s, int x) { return (s >> x) & 1u; }
inline PointSet singleton(int x) { return PointSet(1) << x; }

// Specialization preorder of a finite topological space: y <= x means y lies
// in the closure of {x}. Closed sets are down-sets, open sets are up-sets.
class FinitePreorder {
 public:
  FinitePreorder(std::size_t n, std::vector<PointSet> down)
      : n_(n), down_(std::move(down)) {
    if (n_ == 0 || n_ > 64) throw OutOfRange("point count must lie in [1, 64]");
    if (down_.size() != n_) throw OutOfRange("down-set table size mismatch");
    const PointSet all = full();
    for (std::size_t x = 0; x < n_; ++x) {
      if (down_[x] & ~all) throw OutOfRange("down-set references missing point");
      if (!in_set(down_[x], static_cast<int>(x)))
        throw OutOfRange("preorder is not reflexive");
    }
    for (std::size_t x = 0; x < n_; ++x)
      for (std::size_t y = 0; y < n_; ++y)
        if (in_set(down_[x], static_cast<int>(y)) && (down_[y] & ~down_[x]))
          throw OutOfRange("preorder is not transitive");
    up_.assign(n_, 0);
    for (std::size_t x = 0; x < n_; ++x)
      for (std::size_t y = 0; y < n_; ++y)
        if (in_set(down_[x], static_cast<int>(y)))
          up_[y] |= singleton(static_cast<int>(x));
  }

  static FinitePreorder discrete(std::size_t n) {
    std::vector<PointSet> down(n);
    for (std::size_t x = 0; x < n; ++x) down[x] = singleton(static_cast<int>(x));
    return FinitePreorder(n, std::move(down));
  }

  // pairs are (y, x) with y <= x; reflexive pairs are implied.
  static FinitePreorder from_pairs(std::size_t n,
                                   const std::vector<std::pair<int, int>>& leq) {
    std::vector<PointSet> down(n, 0);
    for (std::size_t x = 0; x < n; ++x) down[x] = singleton(static_cast<int>(x));
    for (auto [y, x] : leq) {
      if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= n ||
          static_cast<std::size_t>(y) >= n)
        throw OutOfRange("leq pair references missing point");
      down[x] |= singleton(y);
    }
    return FinitePreorder(n, std::move(down));
  }

  std::size_t size() const { return n_; }
  PointSet full() const { return n_ == 64 ? ~PointSet(0) : (PointSet(1) << n_) - 1; }

  bool leq(int y, int x) const { return in_set(down_[x], y); }
  PointSet down(int x) const { return down_[x]; }
  PointSet up(int x) const { return up_[x]; }

  PointSet closure(PointSet s) const {
    PointSet c = 0;
    for (std::size_t x = 0; x < n_; ++x)
      if (in_set(s, static_cast<int>(x))) c |= down_[x];
    return c;
  }

  bool is_down_closed(PointSet s) const { return closure(s) == s; }

  bool is_up_closed(PointSet s) const {
    PointSet u = 0;
    for (std::size_t x = 0; x < n_; ++x)
      if (in_set(s, static_cast<int>(x))) u |= up_[x];
    return u == s;
  }

  bool operator==(const FinitePreorder& o) const {
    return n_ == o.n_ && down_ == o.down_;
  }

 private:
  std::size_t n_;
  std::vector<PointSet> down_;
  std::vector<PointSet> up_;
};

inline PointSet closure(const FinitePreorder& space, PointSet subset) {
  return space.closure(subset);
}

// Continuity of a total self-map of a finite space is monotonicity for the
// specialization preorder.
inline bool is_continuous(const FinitePreorder& space,
                          const std::vector<int>& f) {
  const std::size_t n = space.size();
  if (f.size() != n) return false;
  for (std::size_t x = 0; x < n; ++x) {
    if (f[x] < 0 || static_cast<std::size_t>(f[x]) >= n) return false;
    for (std::size_t y = 0; y < n; ++y)
      if (space.leq(static_cast<int>(y), static_cast<int>(x)) &&
          !space.leq(f[y], f[x]))
        return false;
  }
  return true;
}

}  // namespace returnset
