#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "returnset/backward.hpp"
#include "returnset/errors.hpp"
#include "returnset/finite_system.hpp"
#include "returnset/preorder.hpp"

namespace returnset {

// All preorders on n labeled points, reduced modulo point relabeling by
// canonical-form hashing of the relation matrix.
inline std::vector<FinitePreorder> all_preorders_up_to_iso(std::size_t n) {
  if (n == 0 || n > 6) throw OutOfRange("preorder enumeration supports 1..6 points");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  auto matrix_key = [&](const std::vector<PointSet>& down) {
    u64 key = 0;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        key = (key << 1) | (in_set(down[x], static_cast<int>(y)) ? 1 : 0);
    return key;
  };

  std::vector<FinitePreorder> out;
  std::set<u64> seen;
  const std::size_t off_diag = n * n - n;
  for (u64 mask = 0; mask < (u64(1) << off_diag); ++mask) {
    std::vector<PointSet> down(n);
    std::size_t bit = 0;
    for (std::size_t x = 0; x < n; ++x) {
      down[x] = singleton(static_cast<int>(x));
      for (std::size_t y = 0; y < n; ++y) {
        if (x == y) continue;
        if ((mask >> bit) & 1) down[x] |= singleton(static_cast<int>(y));
        ++bit;
      }
    }
    bool transitive = true;
    for (std::size_t x = 0; x < n && transitive; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (in_set(down[x], static_cast<int>(y)) && (down[y] & ~down[x])) {
          transitive = false;
          break;
        }
    if (!transitive) continue;

    u64 canon = ~u64(0);
    for (const auto& p : perms) {
      std::vector<PointSet> relabeled(n, 0);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (in_set(down[x], static_cast<int>(y)))
            relabeled[p[x]] |= singleton(p[y]);
      canon = std::min(canon, matrix_key(relabeled));
    }
    if (!seen.insert(canon).second) continue;
    out.emplace_back(n, std::move(down));
  }
  return out;
}

inline std::vector<std::vector<int>> all_monotone_maps(
    const FinitePreorder& space) {
  const std::size_t n = space.size();
  std::vector<std::vector<int>> out;
  std::vector<int> f(n, 0);
  for (;;) {
    if (is_continuous(space, f)) out.push_back(f);
    std::size_t i = 0;
    while (i < n && f[i] == static_cast<int>(n) - 1) f[i++] = 0;
    if (i == n) break;
    ++f[i];
  }
  return out;
}

inline std::vector<PointSet> all_down_sets(const FinitePreorder& space) {
  std::vector<PointSet> out;
  for (PointSet s = 0;; ++s) {
    if (space.is_down_closed(s)) out.push_back(s);
    if (s == space.full()) break;
  }
  return out;
}

inline std::vector<PointSet> all_up_sets(const FinitePreorder& space) {
  std::vector<PointSet> out;
  for (PointSet s = 0;; ++s) {
    if (space.is_up_closed(s)) out.push_back(s);
    if (s == space.full()) break;
  }
  return out;
}

struct VerifyCounts {
  u64 spaces = 0;
  u64 monotone_maps = 0;
  u64 closed_targets = 0;
  u64 forward_instances = 0;
  u64 backward_instances = 0;
  u64 partial_instances = 0;
};

struct Certificate {
  std::string kind;
  std::string detail;
};

struct VerifyReport {
  std::size_t max_points = 0;
  std::map<std::size_t, VerifyCounts> per_points;
  std::vector<Certificate> certificates;
  u64 instances_used = 0;
  u64 budget = 0;
  bool budget_exceeded = false;

  bool ok() const { return certificates.empty() && !budget_exceeded; }
};

struct BudgetExceeded : Error {
  VerifyReport partial;
  explicit BudgetExceeded(VerifyReport r)
      : Error("instance budget exceeded"), partial(std::move(r)) {}
};

namespace detail {

inline bool decomposition_matches(const APDecomposition& dec,
                                  const OrbitRho& rho, PointSet target,
                                  u64 check_to) {
  for (u64 n = 0; n < check_to; ++n) {
    const bool direct = in_set(target, rho.at(n));
    const bool from_dec = dec.structured.member(n) || dec.residual.contains(n);
    if (direct != from_dec) return false;
  }
  return true;
}

// Every element of {b + a j} must be a return time; beyond the tail the
// check cycles in j, so a finite prefix decides all of them.
inline bool ap_inside_return_set(const OrbitRho& rho, PointSet target, u64 b,
                                 u64 a) {
  const u64 first_cycle_j = b >= rho.tail ? 0 : (rho.tail - b + a - 1) / a;
  for (u64 j = 0; j <= first_cycle_j + rho.cycle; ++j)
    if (!in_set(target, rho.at(b + a * j))) return false;
  return true;
}

inline std::string describe_instance(std::size_t n, u64 space_idx,
                                     const std::vector<int>& f, PointSet y,
                                     int x) {
  std::ostringstream os;
  os << "points=" << n << " space#" << space_idx << " map=[";
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
  os << "] target=" << y << " start=" << x;
  return os.str();
}

}  // namespace detail

// Enumerates every system on at most max_points points (spaces up to
// isomorphism) and checks the structural claims exhaustively: forward return
// sets are AP unions plus a finite exceptional part, the descent finds an AP
// exactly when S is infinite, backward return sets are exact AP unions, and
// partial-map restriction agrees with direct simulation.
inline VerifyReport exhaustive_verify(std::size_t max_points, u64 budget) {
  if (max_points == 0 || max_points > 5)
    throw OutOfRange("max_points must lie in [1, 5]");

  VerifyReport report;
  report.max_points = max_points;
  report.budget = budget;

  auto charge = [&]() {
    if (++report.instances_used > budget) {
      report.budget_exceeded = true;
      throw BudgetExceeded(report);
    }
  };
  auto fail = [&](std::string kind, std::string detail) {
    report.certificates.push_back({std::move(kind), std::move(detail)});
  };

  for (std::size_t n = 1; n <= max_points; ++n) {
    auto& counts = report.per_points[n];
    const auto spaces = all_preorders_up_to_iso(n);
    counts.spaces = spaces.size();

    u64 space_idx = 0;
    for (const auto& space : spaces) {
      ++space_idx;
      const auto maps = all_monotone_maps(space);
      const auto targets = all_down_sets(space);
      counts.monotone_maps += maps.size();
      counts.closed_targets += targets.size();

      for (const auto& f : maps) {
        const ContinuousSelfMap map(space, f);

        for (int x = 0; x < static_cast<int>(n); ++x) {
          const auto rho = detail::orbit_rho(map, x, n);
          const u64 h = rho.tail + 2 * rho.cycle + 4;
          const u64 h_recheck = rho.tail + 3 * rho.cycle + 9;

          for (PointSet y : targets) {
            charge();
            ++counts.forward_instances;
            const FiniteSystem sys(space, map, x, y);
            const auto [win, dec] = forward_return_set(sys, h);

            if (!dec.residual.empty())
              fail("forward_residual_nonempty",
                   detail::describe_instance(n, space_idx, f, y, x));
            if (reconstruct(dec, h) != win)
              fail("forward_reconstruction_mismatch",
                   detail::describe_instance(n, space_idx, f, y, x));
            if (!detail::decomposition_matches(dec, rho, y, h_recheck))
              fail("forward_membership_mismatch",
                   detail::describe_instance(n, space_idx, f, y, x));
            for (u64 e : dec.structured.exceptional())
              if (e >= rho.tail + rho.cycle)
                fail("forward_exceptional_not_finite_prefix",
                     detail::describe_instance(n, space_idx, f, y, x));

            bool infinite = false;
            for (u64 j = 0; j < rho.cycle; ++j)
              if (in_set(y, rho.seq[rho.tail + j])) infinite = true;
            const auto ap = find_infinite_ap(sys);
            if (ap.has_value() != infinite)
              fail("descent_existence_mismatch",
                   detail::describe_instance(n, space_idx, f, y, x));
            if (ap && !detail::ap_inside_return_set(rho, y, ap->first, ap->second))
              fail("descent_ap_escapes_return_set",
                   detail::describe_instance(n, space_idx, f, y, x));
          }

          // Backward orbits from this start.
          charge();
          ++counts.backward_instances;
          try {
            const auto en = enumerate_backward_orbits(space, map, x, 16);
            for (const auto& orbit : en.orbits) {
              const u64 hb = orbit.preperiod_length() + 2 * orbit.cycle_length() + 4;
              for (PointSet y : targets) {
                const auto [bwin, bdec] = backward_return_set(orbit, y, hb);
                if (!bdec.residual.empty())
                  fail("backward_residual_nonempty",
                       detail::describe_instance(n, space_idx, f, y, x));
                if (reconstruct(bdec, hb) != bwin)
                  fail("backward_reconstruction_mismatch",
                       detail::describe_instance(n, space_idx, f, y, x));
                bool mismatch = false;
                for (u64 m = 0; m < hb + 2 * orbit.cycle_length(); ++m)
                  if (in_set(y, orbit.at(m)) != bdec.structured.member(m))
                    mismatch = true;
                if (mismatch)
                  fail("backward_membership_mismatch",
                       detail::describe_instance(n, space_idx, f, y, x));
              }
            }
          } catch (const NoBackwardOrbit&) {
            // start point has no infinite preimage chain
          }
        }
      }

      // Partial maps on every open domain.
      for (PointSet u : all_up_sets(space)) {
        std::vector<int> pts;
        for (std::size_t p = 0; p < n; ++p)
          if (in_set(u, static_cast<int>(p))) pts.push_back(static_cast<int>(p));
        if (pts.empty()) continue;

        std::vector<int> choice(pts.size(), 0);
        for (;;) {
          std::vector<int> image(n, -1);
          for (std::size_t i = 0; i < pts.size(); ++i) image[pts[i]] = choice[i];

          bool monotone = true;
          for (std::size_t a = 0; a < pts.size() && monotone; ++a)
            for (std::size_t b2 = 0; b2 < pts.size(); ++b2)
              if (space.leq(pts[b2], pts[a]) &&
                  !space.leq(image[pts[b2]], image[pts[a]])) {
                monotone = false;
                break;
              }
          if (monotone) {
            const ContinuousSelfMap partial(space, image, u);
            for (int x = 0; x < static_cast<int>(n); ++x) {
              charge();
              ++counts.partial_instances;

              // Direct simulation: does the orbit of x stay inside U?
              bool stays = true;
              {
                std::vector<char> visited(n, 0);
                int cur = x;
                while (true) {
                  if (!in_set(u, cur)) {
                    stays = false;
                    break;
                  }
                  if (visited[cur]) break;
                  visited[cur] = 1;
                  cur = partial.apply(cur);
                }
              }

              bool restricted_ok = true;
              try {
                const auto sub = restrict_to_invariant_domain(space, partial, x);
                if (!stays) {
                  fail("restriction_accepted_escaping_orbit",
                       detail::describe_instance(n, space_idx, image, u, x));
                  restricted_ok = false;
                }
                if (restricted_ok) {
                  for (PointSet y : all_down_sets(space)) {
                    const PointSet sub_y = sub.restrict_set(y);
                    const FiniteSystem s2(sub.space, sub.map, sub.start, sub_y);
                    const u64 h2 = 2 * n + 6;
                    const auto [w2, d2] = forward_return_set(s2, h2);
                    int cur = x;
                    for (u64 m = 0; m < h2; ++m) {
                      if (in_set(y, cur) != w2.contains(m)) {
                        fail("restriction_simulation_mismatch",
                             detail::describe_instance(n, space_idx, image, u, x));
                        break;
                      }
                      cur = partial.apply(cur);
                    }
                    (void)d2;
                  }
                }
              } catch (const OrbitLeavesDomain&) {
                if (stays)
                  fail("restriction_rejected_invariant_orbit",
                       detail::describe_instance(n, space_idx, image, u, x));
              }
            }
          }

          std::size_t i = 0;
          while (i < pts.size() && choice[i] == static_cast<int>(n) - 1)
            choice[i++] = 0;
          if (i == pts.size()) break;
          ++choice[i];
        }
      }
    }
  }
  return report;
}

}  // namespace returnset
