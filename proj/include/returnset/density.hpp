#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"

namespace returnset {

struct LengthStat {
  Rat value;       // max over placements of |S ∩ [s, s+L)| / L
  u64 start = 0;   // leftmost start attaining the max
};

// Finite stand-in for a limsup over intervals: per-length maxima, with the
// headline taken at the largest swept length.
struct DensityEstimate {
  std::map<u64, LengthStat> per_length;
  Rat headline = 0;
  u64 headline_length = 0;
};

inline DensityEstimate windowed_density(const IndexWindow& w,
                                        std::vector<u64> lengths) {
  if (lengths.empty()) throw EmptySweep();
  std::sort(lengths.begin(), lengths.end());
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());

  const u64 H = w.horizon();
  const auto& ms = w.members();
  DensityEstimate est;
  for (u64 L : lengths) {
    if (L == 0) throw OutOfRange("interval length must be positive");
    if (L > H)
      throw LengthExceedsHorizon("length " + std::to_string(L) +
                                 " exceeds horizon " + std::to_string(H));
    std::size_t lo = 0, hi = 0;
    u64 best_count = 0, best_start = 0;
    for (u64 s = 0; s + L <= H; ++s) {
      while (lo < ms.size() && ms[lo] < s) ++lo;
      while (hi < ms.size() && ms[hi] < s + L) ++hi;
      const u64 count = hi - lo;
      if (count > best_count) {
        best_count = count;
        best_start = s;
      }
    }
    est.per_length[L] = LengthStat{Rat(best_count, L), best_start};
  }
  const u64 top = lengths.back();
  est.headline = est.per_length[top].value;
  est.headline_length = top;
  return est;
}

}  // namespace returnset
