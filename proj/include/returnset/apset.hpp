#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <vector>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"

namespace returnset {

// {residue + modulus*n : n >= 0} restricted to values >= threshold.
// Normal form: residue < modulus and threshold is the least element.
struct Progression {
  u64 residue = 0;
  u64 modulus = 1;
  u64 threshold = 0;

  auto operator<=>(const Progression&) const = default;

  bool member(u64 n) const {
    return n >= threshold && n % modulus == residue;
  }
};

// Finitely many progressions plus a finite exceptional set (the ratio-zero
// constant progressions live in the exceptional set).
class APSet {
 public:
  APSet() = default;

  APSet(std::vector<Progression> progressions, std::vector<u64> exceptional)
      : progressions_(std::move(progressions)),
        exceptional_(std::move(exceptional)) {
    for (auto& p : progressions_) {
      if (p.modulus == 0) throw OutOfRange("progression modulus must be >= 1");
      u64 base = p.residue;
      if (p.threshold > base) {
        const u64 gap = p.threshold - base;
        base += (gap + p.modulus - 1) / p.modulus * p.modulus;
      }
      p = Progression{base % p.modulus, p.modulus, base};
    }
    std::sort(progressions_.begin(), progressions_.end());
    progressions_.erase(
        std::unique(progressions_.begin(), progressions_.end()),
        progressions_.end());
    std::sort(exceptional_.begin(), exceptional_.end());
    exceptional_.erase(std::unique(exceptional_.begin(), exceptional_.end()),
                       exceptional_.end());
  }

  const std::vector<Progression>& progressions() const { return progressions_; }
  const std::vector<u64>& exceptional() const { return exceptional_; }
  bool empty() const { return progressions_.empty() && exceptional_.empty(); }

  bool member(u64 n) const {
    for (const auto& p : progressions_)
      if (p.member(n)) return true;
    return std::binary_search(exceptional_.begin(), exceptional_.end(), n);
  }

  static APSet unite(const APSet& a, const APSet& b) {
    std::vector<Progression> ps = a.progressions_;
    ps.insert(ps.end(), b.progressions_.begin(), b.progressions_.end());
    std::vector<u64> ex = a.exceptional_;
    ex.insert(ex.end(), b.exceptional_.begin(), b.exceptional_.end());
    return APSet(std::move(ps), std::move(ex));
  }

  bool operator==(const APSet&) const = default;

 private:
  std::vector<Progression> progressions_;
  std::vector<u64> exceptional_;
};

inline IndexWindow generate_apset(const APSet& s, u64 horizon) {
  std::vector<u64> out;
  for (const auto& p : s.progressions())
    for (u64 v = p.threshold; v < horizon; v += p.modulus) out.push_back(v);
  for (u64 e : s.exceptional())
    if (e < horizon) out.push_back(e);
  return IndexWindow::from_unsorted(horizon, std::move(out));
}

namespace detail {

// Density of the union of the residue classes of T (thresholds are
// irrelevant to eventual occupancy), by inclusion-exclusion over
// CRT-compatible subsets.
inline Rat crt_union_density(const std::vector<Progression>& ps,
                             std::size_t idx, const BigInt& res,
                             const BigInt& mod) {
  Rat total = 0;
  for (std::size_t i = idx; i < ps.size(); ++i) {
    const BigInt a = ps[i].modulus;
    const BigInt b = ps[i].residue;
    const BigInt g = boost::multiprecision::gcd(mod, a);
    BigInt diff = b - res;
    if (diff % g != 0) continue;  // incompatible congruences
    const BigInt merged_mod = mod / g * a;
    // merged residue: res + mod * t where (res + mod*t) ≡ b (mod a)
    BigInt step = mod / g;
    BigInt need = diff / g;
    BigInt ainv_mod = a / g;
    // solve step'*t ≡ need (mod a/g) with step' = mod/g
    BigInt t = 0;
    {
      // extended euclid inverse of step mod ainv_mod
      BigInt r0 = ainv_mod, r1 = step % ainv_mod, s0 = 0, s1 = 1;
      while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        BigInt s2 = s0 - q * s1;
        r0 = r1; r1 = r2; s0 = s1; s1 = s2;
      }
      // r0 == 1 since step and ainv_mod are coprime after dividing by g
      BigInt inv = s0 % ainv_mod;
      if (inv < 0) inv += ainv_mod;
      t = (need % ainv_mod) * inv % ainv_mod;
      if (t < 0) t += ainv_mod;
    }
    BigInt merged_res = (res + mod * t) % merged_mod;
    total += Rat(BigInt(1), merged_mod);
    total -= crt_union_density(ps, i + 1, merged_res, merged_mod);
  }
  return total;
}

}  // namespace detail

// Exact Banach density of an APSet: occupied residues divided by the lcm of
// the moduli. The exceptional set contributes nothing.
inline Rat exact_banach_density(const APSet& s) {
  const auto& ps = s.progressions();
  if (ps.empty()) return 0;
  BigInt l = 1;
  for (const auto& p : ps) l = boost::multiprecision::lcm(l, BigInt(p.modulus));
  if (l <= (1 << 22)) {
    const u64 period = big_to_u64(l);
    std::vector<char> occ(period, 0);
    u64 count = 0;
    for (const auto& p : ps)
      for (u64 r = p.residue; r < period; r += p.modulus)
        if (!occ[r]) {
          occ[r] = 1;
          ++count;
        }
    return Rat(count, period);
  }
  return detail::crt_union_density(ps, 0, 0, 1);
}

}  // namespace returnset
