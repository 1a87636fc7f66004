#pragma once

#include <vector>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"

namespace returnset {

enum class WitnessMode { lemma, corollary };

// A shift k and a subset Q of the window with Q + k still inside the set.
struct Witness {
  WitnessMode mode = WitnessMode::lemma;
  u64 k = 0;
  u64 block_size = 0;  // N
  IndexWindow q;
  Rat declared_density;
};

inline u64 lemma_block_size(const Rat& d) {
  if (!(d > 0 && d <= 1)) throw OutOfRange("density must lie in (0, 1]");
  return big_to_u64(floor_rat(Rat(1) / d) + 1);
}

inline u64 corollary_block_size(const Rat& d) {
  if (!(d > 0 && d <= 1)) throw OutOfRange("density must lie in (0, 1]");
  return big_to_u64(floor_rat(Rat(2) / d));
}

// Finite-window analog of the counting chain: whenever |members| >= d*H and
// H >= N^2, the extracted Q satisfies |Q| >= (d*H - H/N - 2N) / (N-1)^2.
inline Rat witness_count_bound(const Rat& d, u64 H, u64 N) {
  const BigInt n(N);
  const Rat lhs = d * Rat(BigInt(H)) - Rat(BigInt(H), n) - Rat(2 * n);
  return lhs / Rat((n - 1) * (n - 1));
}

namespace detail {

inline Witness extract_witness(const IndexWindow& w, const Rat& d, u64 N,
                               WitnessMode mode) {
  const u64 H = w.horizon();
  if (N == 0 || N > H / N)
    throw WindowTooShort("horizon " + std::to_string(H) + " below N^2 with N = " +
                         std::to_string(N));

  // Least pair per full block of N consecutive integers; the partial tail
  // block is ignored (it is part of the 2N boundary correction).
  const u64 nblocks = H / N;
  std::vector<std::vector<u64>> classes(N);  // classes[j] = {a_i : b_i - a_i = j}
  const auto& ms = w.members();
  u64 cur_block = ~u64(0);
  u64 first = 0;
  bool have_pair = false;
  for (u64 m : ms) {
    const u64 b = m / N;
    if (b >= nblocks) break;
    if (b != cur_block) {
      cur_block = b;
      first = m;
      have_pair = false;
    } else if (!have_pair) {
      classes[m - first].push_back(first);
      have_pair = true;
    }
  }

  // Largest class wins; ties go to the smallest difference.
  u64 best_j = 0;
  std::size_t best_size = 0;
  for (u64 j = 1; j < N; ++j)
    if (classes[j].size() > best_size) {
      best_size = classes[j].size();
      best_j = j;
    }
  if (best_size == 0) throw NoPairedBlock();

  return Witness{mode, best_j, N, IndexWindow(H, std::move(classes[best_j])),
                 d};
}

}  // namespace detail

// Extraction behind the technical lemma: block size N = floor(1/d) + 1.
// If |members| < d*H the count bound is simply not asserted; a witness is
// still produced whenever some block holds two members.
inline Witness lemma1_witness(const IndexWindow& w, const Rat& d) {
  return detail::extract_witness(w, d, lemma_block_size(d),
                                 WitnessMode::lemma);
}

// Corollary variant: block size N = floor(2/d), so k <= N-1 < 2/d.
inline Witness corollary_witness(const IndexWindow& w, const Rat& d) {
  return detail::extract_witness(w, d, corollary_block_size(d),
                                 WitnessMode::corollary);
}

// 2/(N+1) - (5/(3N) - 2/(3N^2)) >= 0, evaluated in exact rationals.
inline bool verify_corollary_inequalities(u64 N) {
  if (N < 2) throw InvalidN("N must be >= 2");
  const BigInt n(N);
  const Rat lhs = Rat(BigInt(2), n + 1) - (Rat(BigInt(5), 3 * n) - Rat(BigInt(2), 3 * n * n));
  return lhs >= 0;
}

// Soundness of a witness against the window it was extracted from.
inline bool witness_sound(const IndexWindow& w, const Witness& wt) {
  if (wt.k == 0 || wt.k > wt.block_size - 1) return false;
  for (u64 a : wt.q.members())
    if (!w.contains(a) || !w.contains(a + wt.k)) return false;
  if (wt.mode == WitnessMode::corollary && !(Rat(wt.k) < Rat(2) / wt.declared_density))
    return false;
  return true;
}

}  // namespace returnset
