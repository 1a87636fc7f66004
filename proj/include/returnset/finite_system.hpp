#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "returnset/decompose.hpp"
#include "returnset/density.hpp"
#include "returnset/errors.hpp"
#include "returnset/preorder.hpp"
#include "returnset/window.hpp"
#include "returnset/witness.hpp"

namespace returnset {

// Self-map of a finite space, total or restricted to an open domain.
// Continuity (= monotonicity) is checked at construction.
class ContinuousSelfMap {
 public:
  ContinuousSelfMap(const FinitePreorder& space, std::vector<int> image)
      : image_(std::move(image)), domain_(space.full()), total_(true) {
    if (!is_continuous(space, image_))
      throw OutOfRange("map is not continuous (not monotone)");
  }

  ContinuousSelfMap(const FinitePreorder& space, std::vector<int> image,
                    PointSet domain)
      : image_(std::move(image)), domain_(domain), total_(false) {
    const std::size_t n = space.size();
    if (image_.size() != n) throw OutOfRange("image table size mismatch");
    if (domain_ & ~space.full()) throw OutOfRange("domain references missing point");
    if (!space.is_up_closed(domain_))
      throw OutOfRange("partial map domain must be open (up-closed)");
    for (std::size_t x = 0; x < n; ++x) {
      if (!in_set(domain_, static_cast<int>(x))) continue;
      if (image_[x] < 0 || static_cast<std::size_t>(image_[x]) >= n)
        throw OutOfRange("image references missing point");
      for (std::size_t y = 0; y < n; ++y)
        if (in_set(domain_, static_cast<int>(y)) &&
            space.leq(static_cast<int>(y), static_cast<int>(x)) &&
            !space.leq(image_[y], image_[x]))
          throw OutOfRange("partial map is not continuous on its domain");
    }
  }

  bool total() const { return total_; }
  PointSet domain() const { return domain_; }
  bool defined_at(int x) const { return in_set(domain_, x); }
  int apply(int x) const { return image_[x]; }
  const std::vector<int>& image() const { return image_; }

 private:
  std::vector<int> image_;
  PointSet domain_;
  bool total_;
};

struct FiniteSystem {
  FinitePreorder space;
  ContinuousSelfMap map;
  int start;
  PointSet target;

  FiniteSystem(FinitePreorder sp, ContinuousSelfMap m, int x, PointSet y)
      : space(std::move(sp)), map(std::move(m)), start(x), target(y) {
    if (x < 0 || static_cast<std::size_t>(x) >= space.size())
      throw OutOfRange("start point out of range");
    if (target & ~space.full()) throw OutOfRange("target references missing point");
    if (!space.is_down_closed(target))
      throw OutOfRange("target must be closed (down-closed)");
  }
};

namespace detail {

// Rho shape of a forward orbit in a finite space.
struct OrbitRho {
  std::vector<int> seq;  // seq[0..tail+cycle-1]; seq[tail..] is the cycle
  u64 tail = 0;
  u64 cycle = 1;

  int at(u64 n) const {
    if (n < seq.size()) return seq[n];
    return seq[tail + (n - tail) % cycle];
  }
};

inline OrbitRho orbit_rho(const ContinuousSelfMap& map, int start,
                          std::size_t n_points) {
  OrbitRho rho;
  std::vector<int> first_seen(n_points, -1);
  int x = start;
  while (first_seen[x] < 0) {
    first_seen[x] = static_cast<int>(rho.seq.size());
    rho.seq.push_back(x);
    x = map.apply(x);
  }
  rho.tail = static_cast<u64>(first_seen[x]);
  rho.cycle = rho.seq.size() - rho.tail;
  return rho;
}

inline std::pair<IndexWindow, APDecomposition> rho_return_set(
    const OrbitRho& rho, PointSet target, u64 horizon) {
  std::vector<Progression> progs;
  std::vector<u64> exceptional;
  for (u64 n = 0; n < rho.tail; ++n)
    if (in_set(target, rho.seq[n])) exceptional.push_back(n);
  for (u64 j = 0; j < rho.cycle; ++j)
    if (in_set(target, rho.seq[rho.tail + j]))
      progs.push_back(Progression{(rho.tail + j) % rho.cycle, rho.cycle,
                                  rho.tail + j});

  std::vector<u64> members;
  for (u64 n = 0; n < horizon; ++n)
    if (in_set(target, rho.at(n))) members.push_back(n);

  APDecomposition dec;
  dec.structured = APSet(std::move(progs), std::move(exceptional));
  dec.residual = IndexWindow(horizon);
  if (horizon > 0)
    dec.residual_density = windowed_density(dec.residual, {horizon});
  return {IndexWindow(horizon, std::move(members)), dec};
}

}  // namespace detail

// Return set S = {n : map^n(start) in target} below the horizon, plus the
// exact decomposition read off the orbit's rho shape (valid for every n,
// not just below the horizon). Residual is always empty here.
inline std::pair<IndexWindow, APDecomposition> forward_return_set(
    const FiniteSystem& sys, u64 horizon) {
  if (!sys.map.total()) throw OutOfRange("forward_return_set needs a total map");
  const auto rho = detail::orbit_rho(sys.map, sys.start, sys.space.size());
  return detail::rho_return_set(rho, sys.target, horizon);
}

// Noetherian descent behind the infinite-AP existence result: maintain a
// closed W meeting the orbit infinitely often, extract a shift k from the
// observed return window, and either conclude an AP or shrink W.
inline std::optional<std::pair<u64, u64>> find_infinite_ap(
    const FiniteSystem& sys) {
  if (!sys.map.total()) throw OutOfRange("find_infinite_ap needs a total map");
  const auto rho = detail::orbit_rho(sys.map, sys.start, sys.space.size());
  const u64 t = rho.tail, c = rho.cycle;

  PointSet cycle_hits_y = 0;
  for (u64 j = 0; j < c; ++j)
    if (in_set(sys.target, rho.seq[t + j]))
      cycle_hits_y |= singleton(rho.seq[t + j]);
  if (cycle_hits_y == 0) return std::nullopt;  // S is finite

  // Seed W with the closure of the observed return points (a closed subset
  // of the target, so any AP inside T_W lies inside S).
  PointSet w = 0;
  for (u64 n = 0; n < t; ++n)
    if (in_set(sys.target, rho.seq[n])) w |= singleton(rho.seq[n]);
  w = sys.space.closure(w | cycle_hits_y);

  const std::size_t n_points = sys.space.size();
  for (;;) {
    // Hits of W along the cycle; the descent keeps these nonempty.
    u64 hits = 0;
    std::vector<char> cycle_in_w(c, 0);
    for (u64 j = 0; j < c; ++j)
      if (in_set(w, rho.seq[t + j])) {
        cycle_in_w[j] = 1;
        ++hits;
      }
    if (hits == 0) throw Error("descent lost every periodic return");

    // Shift k from witness extraction on the periodic part of the window.
    const Rat d(hits, c);
    const u64 n_blocks = lemma_block_size(d);
    const u64 span = n_blocks * n_blocks * c;
    std::vector<u64> rel;
    for (u64 j = 0; j < span; ++j)
      if (cycle_in_w[j % c]) rel.push_back(j);
    const Witness wt = lemma1_witness(IndexWindow(span, std::move(rel)), d);
    const u64 k = wt.k;

    // Pointwise k-th iterate.
    std::vector<int> fk(n_points);
    for (std::size_t p = 0; p < n_points; ++p) {
      int y = static_cast<int>(p);
      for (u64 s = 0; s < k; ++s) y = sys.map.apply(y);
      fk[p] = y;
    }

    PointSet stable = 0;
    for (std::size_t p = 0; p < n_points; ++p)
      if (in_set(w, static_cast<int>(p)) && in_set(w, fk[p]))
        stable |= singleton(static_cast<int>(p));

    if (stable == w) {
      // W ⊆ map^{-k}(W): T_W is closed under +k, so its least element
      // starts an AP of ratio k inside S.
      for (u64 n = 0;; ++n)
        if (in_set(w, rho.at(n))) return std::make_pair(n, k);
    }
    w = stable;  // strictly smaller closed set; finiteness bounds the loop
  }
}

// Descending closure chain C_i = closure{map^(a n + b)(start) : n >= i};
// returns the first stabilization point and V0 = C_m.
inline std::pair<PointSet, u64> stabilize_closures(const FiniteSystem& sys,
                                                   u64 a, u64 b) {
  if (!sys.map.total()) throw OutOfRange("stabilize_closures needs a total map");
  if (a == 0) throw OutOfRange("modulus must be positive");
  const auto rho = detail::orbit_rho(sys.map, sys.start, sys.space.size());

  // Precondition: {a n + b} ⊆ S. Beyond the tail the orbit position at
  // a n + b cycles in n, so finitely many checks decide every n.
  const u64 first_cycle_n = b >= rho.tail ? 0 : (rho.tail - b + a - 1) / a;
  for (u64 n = 0; n <= first_cycle_n + rho.cycle; ++n)
    if (!in_set(sys.target, rho.at(b + a * n)))
      throw APNotContained("orbit leaves the target at n = " +
                           std::to_string(b + a * n));

  auto sample_closure = [&](u64 i) {
    PointSet pts = 0;
    const u64 stop = std::max(i, first_cycle_n) + rho.cycle;
    for (u64 n = i; n <= stop; ++n) pts |= singleton(rho.at(b + a * n));
    return sys.space.closure(pts);
  };

  PointSet c_i = sample_closure(0);
  for (u64 i = 0;; ++i) {
    const PointSet c_next = sample_closure(i + 1);
    if (c_next == c_i) {
      // Stabilized; the paper's V0. Check map^{-a}(V0) ⊇ V0.
      for (std::size_t p = 0; p < sys.space.size(); ++p)
        if (in_set(c_i, static_cast<int>(p))) {
          int y = static_cast<int>(p);
          for (u64 s = 0; s < a; ++s) y = sys.map.apply(y);
          if (!in_set(c_i, y))
            throw Error("stabilized closure is not backward-invariant");
        }
      return {c_i, i};
    }
    c_i = c_next;
  }
}

// Subsystem on the largest subset of the open domain that the map never
// leaves, with the subspace topology.
struct RestrictedSystem {
  FinitePreorder space;
  ContinuousSelfMap map;
  int start;
  std::vector<int> global_points;  // subsystem index -> original point

  PointSet restrict_set(PointSet global) const {
    PointSet s = 0;
    for (std::size_t i = 0; i < global_points.size(); ++i)
      if (in_set(global, global_points[i])) s |= singleton(static_cast<int>(i));
    return s;
  }
};

inline RestrictedSystem restrict_to_invariant_domain(
    const FinitePreorder& space, const ContinuousSelfMap& partial, int start) {
  PointSet z = partial.domain();
  for (;;) {
    PointSet next = 0;
    for (std::size_t p = 0; p < space.size(); ++p)
      if (in_set(z, static_cast<int>(p)) &&
          in_set(z, partial.apply(static_cast<int>(p))))
        next |= singleton(static_cast<int>(p));
    if (next == z) break;
    z = next;
  }
  if (start < 0 || static_cast<std::size_t>(start) >= space.size() ||
      !in_set(z, start))
    throw OrbitLeavesDomain("orbit of the start point leaves the open domain");

  std::vector<int> points;
  std::vector<int> local(space.size(), -1);
  for (std::size_t p = 0; p < space.size(); ++p)
    if (in_set(z, static_cast<int>(p))) {
      local[p] = static_cast<int>(points.size());
      points.push_back(static_cast<int>(p));
    }
  std::vector<PointSet> down(points.size(), 0);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      if (space.leq(points[j], points[i])) down[i] |= singleton(static_cast<int>(j));
  FinitePreorder sub(points.size(), std::move(down));
  std::vector<int> image(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    image[i] = local[partial.apply(points[i])];
  ContinuousSelfMap sub_map(sub, std::move(image));
  return RestrictedSystem{std::move(sub), std::move(sub_map), local[start],
                          points};
}

}  // namespace returnset
