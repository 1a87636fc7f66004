#pragma once

#include <algorithm>
#include <set>
#include <vector>

#include "returnset/apset.hpp"
#include "returnset/density.hpp"
#include "returnset/errors.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"
#include "returnset/witness.hpp"

namespace returnset {

// Finitely many progressions plus a residual window carrying its own density
// curve. "inconclusive" flags a residual still above the threshold after the
// modulus scan is exhausted.
struct APDecomposition {
  APSet structured;
  IndexWindow residual;
  DensityEstimate residual_density;
  bool inconclusive = false;
};

inline IndexWindow reconstruct(const APDecomposition& d, u64 horizon) {
  std::vector<u64> out;
  for (const auto& p : d.structured.progressions())
    for (u64 v = p.threshold; v < horizon; v += p.modulus) out.push_back(v);
  for (u64 e : d.structured.exceptional())
    if (e < horizon) out.push_back(e);
  for (u64 m : d.residual.members())
    if (m < horizon) out.push_back(m);
  return IndexWindow::from_unsorted(horizon, std::move(out));
}

namespace detail {

inline std::vector<u64> density_sweep_lengths(u64 min_len, u64 horizon) {
  const u64 top = std::min(min_len, horizon);
  std::vector<u64> lengths;
  for (u64 l = 1; l < top; l *= 2) lengths.push_back(l);
  lengths.push_back(top);
  return lengths;
}

// Greedy per-modulus extraction. A consistent progression must contain the
// top member of its residue class, and that member must sit within a of the
// horizon; classes are therefore visited through members in [H-a, H).
class ProgressionScan {
 public:
  ProgressionScan(const IndexWindow& w)
      : w_(w), in_window_(w.horizon(), 0), covered_(w.horizon(), 0) {
    for (u64 m : w.members()) in_window_[m] = 1;
  }

  // Extracts every maximal fully-consistent run of modulus a with at least
  // min_hits observed hits and at least one uncovered member.
  bool extract_modulus(u64 a, u64 min_hits,
                       std::vector<Progression>& out) {
    const u64 H = w_.horizon();
    if (a == 0 || a > H) return false;
    bool any = false;
    const auto& ms = w_.members();
    for (auto it = ms.rbegin(); it != ms.rend(); ++it) {
      const u64 top = *it;
      if (top < H - a) break;  // remaining members have class elements above them
      u64 run = 1;
      while (top >= run * a && in_window_[top - run * a]) ++run;
      if (run < min_hits) continue;
      const u64 t = top - (run - 1) * a;
      bool fresh = false;
      for (u64 v = t; v <= top; v += a)
        if (!covered_[v]) {
          fresh = true;
          break;
        }
      if (!fresh) continue;
      for (u64 v = t; v <= top; v += a) covered_[v] = 1;
      out.push_back(Progression{t % a, a, t});
      any = true;
    }
    return any;
  }

  IndexWindow residual() const {
    std::vector<u64> rest;
    for (u64 m : w_.members())
      if (!covered_[m]) rest.push_back(m);
    return IndexWindow(w_.horizon(), std::move(rest));
  }

 private:
  const IndexWindow& w_;
  std::vector<char> in_window_;
  std::vector<char> covered_;
};

}  // namespace detail

// Greedily peels arithmetic progressions fully consistent with the window
// off their tails, stopping once the residual's headline density falls below
// the threshold or no progression of modulus <= H/4 remains. Candidate
// moduli come from iterated witness extraction first, then an ascending
// scan. Lossless: structured + residual reproduce the window exactly.
inline APDecomposition decompose(const IndexWindow& w,
                                 const Rat& density_threshold, u64 min_len) {
  if (!(density_threshold > 0 && density_threshold < 1))
    throw OutOfRange("density threshold must lie in (0, 1)");

  const u64 H = w.horizon();
  if (H == 0)
    return APDecomposition{APSet{}, IndexWindow(0), DensityEstimate{}, false};

  const auto lengths = detail::density_sweep_lengths(min_len, H);
  constexpr u64 kMinHits = 4;  // fewer observed hits is noise, not evidence
  const u64 modulus_cap = H / 4;

  detail::ProgressionScan scan(w);
  std::vector<Progression> extracted;
  IndexWindow residual = w;
  DensityEstimate density = windowed_density(residual, lengths);

  auto refresh = [&]() {
    residual = scan.residual();
    density = windowed_density(residual, lengths);
  };

  std::set<u64> tried;
  bool below = density.headline < density_threshold;

  // Witness-derived candidate moduli on the current residual.
  while (!below && density.headline > 0) {
    u64 k = 0;
    try {
      const Witness wt = lemma1_witness(residual, density.headline);
      k = wt.k;
    } catch (const Error&) {
      break;  // window too short or no paired block: witness route exhausted
    }
    if (k == 0 || k > modulus_cap || !tried.insert(k).second) break;
    if (!scan.extract_modulus(k, kMinHits, extracted)) break;
    refresh();
    below = density.headline < density_threshold;
  }

  // Ascending scan over the remaining moduli.
  for (u64 a = 1; !below && a <= modulus_cap; ++a) {
    if (tried.count(a)) continue;
    if (scan.extract_modulus(a, kMinHits, extracted)) {
      refresh();
      below = density.headline < density_threshold;
    }
  }

  APDecomposition result;
  result.structured = APSet(std::move(extracted), {});
  result.residual = residual;
  result.residual_density = density;
  result.inconclusive = !below;
  return result;
}

}  // namespace returnset
