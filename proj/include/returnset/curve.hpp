#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "returnset/density.hpp"
#include "returnset/errors.hpp"
#include "returnset/fields.hpp"
#include "returnset/polymap.hpp"
#include "returnset/polynomial.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"

namespace returnset {

struct InvarianceResult {
  enum class Kind { proved, refuted, sampled };
  Kind kind = Kind::sampled;
  bool holds = false;  // for sampled: every sampled curve point vanished
  u64 trials = 0;      // sampled curve points actually tested
};

struct InvarianceOptions {
  u64 term_cap = 4096;  // per-coordinate cap on symbolic composition
  u64 trials = 64;      // curve points for the sampling fallback
  u64 seed = 0;
  bool force_sampling = false;  // test hook: skip the division path
};

namespace detail {

// Univariate arithmetic over F_P for root sampling; coefficients ascending.
class FpUniPoly {
 public:
  FpUniPoly() = default;
  explicit FpUniPoly(std::vector<i64> coeffs, i64 p) : c_(std::move(coeffs)), p_(p) {
    trim();
  }

  static FpUniPoly x_plus(i64 a, i64 p) { return FpUniPoly({a % p, 1}, p); }

  bool zero() const { return c_.empty(); }
  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  const std::vector<i64>& coeffs() const { return c_; }

  FpUniPoly sub(const FpUniPoly& o) const {
    std::vector<i64> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i)
      r[i] = ((r[i] - o.c_[i]) % p_ + p_) % p_;
    return FpUniPoly(std::move(r), p_);
  }

  FpUniPoly mul(const FpUniPoly& o) const {
    if (zero() || o.zero()) return FpUniPoly({}, p_);
    std::vector<i64> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j)
        r[i + j] = (r[i + j] + c_[i] * o.c_[j]) % p_;
    return FpUniPoly(std::move(r), p_);
  }

  FpUniPoly mod(const FpUniPoly& m) const {
    std::vector<i64> r = c_;
    const i64 lead_inv = inv_mod(m.c_.back(), p_);
    while (r.size() >= m.c_.size() && !r.empty()) {
      const i64 f = r.back() * lead_inv % p_;
      const std::size_t off = r.size() - m.c_.size();
      for (std::size_t i = 0; i < m.c_.size(); ++i)
        r[off + i] = ((r[off + i] - f * m.c_[i]) % p_ + p_) % p_;
      while (!r.empty() && r.back() == 0) r.pop_back();
    }
    return FpUniPoly(std::move(r), p_);
  }

  FpUniPoly powmod(BigInt e, const FpUniPoly& m) const {
    FpUniPoly base = mod(m);
    FpUniPoly acc({1}, p_);
    while (e > 0) {
      if ((e & 1) != 0) acc = acc.mul(base).mod(m);
      base = base.mul(base).mod(m);
      e >>= 1;
    }
    return acc;
  }

  FpUniPoly monic() const {
    if (zero()) return *this;
    const i64 li = inv_mod(c_.back(), p_);
    std::vector<i64> r = c_;
    for (auto& v : r) v = v * li % p_;
    return FpUniPoly(std::move(r), p_);
  }

  static FpUniPoly gcd(FpUniPoly a, FpUniPoly b) {
    while (!b.zero()) {
      FpUniPoly r = a.mod(b);
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  static i64 inv_mod(i64 a, i64 p) {
    a %= p;
    if (a < 0) a += p;
    i64 r0 = p, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
      const i64 q = r0 / r1;
      const i64 r2 = r0 - q * r1, s2 = s0 - q * s1;
      r0 = r1; r1 = r2;
      s0 = s1; s1 = s2;
    }
    return (s0 % p + p) % p;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() % p_ == 0) c_.pop_back();
    for (auto& v : c_) v = (v % p_ + p_) % p_;
  }

  std::vector<i64> c_;
  i64 p_ = 2;
};

// u / g for monic g dividing u exactly.
inline FpUniPoly fp_quotient(const FpUniPoly& u, const FpUniPoly& g, i64 p) {
  std::vector<i64> r = u.coeffs();
  std::vector<i64> q(r.size() >= g.coeffs().size()
                         ? r.size() - g.coeffs().size() + 1
                         : 0,
                     0);
  const i64 li = FpUniPoly::inv_mod(g.coeffs().back(), p);
  while (r.size() >= g.coeffs().size() && !r.empty()) {
    const i64 f = r.back() * li % p;
    const std::size_t off = r.size() - g.coeffs().size();
    q[off] = f;
    for (std::size_t i = 0; i < g.coeffs().size(); ++i)
      r[off + i] = ((r[off + i] - f * g.coeffs()[i]) % p + p) % p;
    while (!r.empty() && r.back() == 0) r.pop_back();
  }
  return FpUniPoly(std::move(q), p);
}

inline void fp_roots_all(const FpUniPoly& u0, i64 p, std::mt19937_64& rng,
                         std::vector<i64>& out) {
  if (u0.zero()) return;
  // distinct-root part: gcd(x^p - x, u)
  FpUniPoly x({0, 1}, p);
  FpUniPoly xp = x.powmod(BigInt(p), u0);
  FpUniPoly lin = FpUniPoly::gcd(xp.sub(x), u0);
  // peel roots by random splitting
  std::vector<FpUniPoly> stack{lin};
  while (!stack.empty()) {
    FpUniPoly u = stack.back();
    stack.pop_back();
    if (u.zero() || u.degree() == 0) continue;
    if (u.degree() == 1) {
      const auto& c = u.coeffs();
      out.push_back((p - c[0] * FpUniPoly::inv_mod(c[1], p) % p) % p);
      continue;
    }
    std::uniform_int_distribution<i64> dist(0, p - 1);
    bool split = false;
    for (int attempt = 0; attempt < 96 && !split; ++attempt) {
      const FpUniPoly shifted = FpUniPoly::x_plus(dist(rng), p);
      FpUniPoly w = shifted.powmod(BigInt(p - 1) / 2, u).sub(FpUniPoly({1}, p));
      FpUniPoly g = FpUniPoly::gcd(w, u);
      if (g.zero() || g.degree() == 0 || g.degree() == u.degree()) continue;
      stack.push_back(g);
      stack.push_back(fp_quotient(u, g, p));
      split = true;
    }
    // failure to split after many attempts: drop the factor (sampling is
    // best-effort; other lines will supply points)
  }
}

}  // namespace detail

namespace detail {

template <class F>
Polynomial<F> compose_curve_pullback(const F& K, const PolyMap<F>& map,
                                     const Polynomial<F>& f, u64 k,
                                     const InvarianceOptions& opts) {
  std::vector<Polynomial<F>> coords;
  for (std::size_t i = 0; i < map.arity; ++i) {
    // absorb constant denominators into the numerators
    auto c = map.num[i];
    if (!map.den[i].is_constant() || map.den[i].is_zero())
      throw OutOfRange("curve invariance needs polynomial coordinates");
    const auto d = map.den[i].terms().empty() ? K.one() : map.den[i].terms()[0].coef;
    coords.push_back(c.scale(K, K.div(K.one(), d)));
  }
  std::vector<Polynomial<F>> power = coords;  // Φ^1
  for (u64 i = 1; i < k; ++i) {
    std::vector<Polynomial<F>> next;
    next.reserve(coords.size());
    for (const auto& c : coords)
      next.push_back(c.compose(K, power, opts.term_cap));
    power = std::move(next);
  }
  return f.compose(K, power, opts.term_cap);
}

// Sampling fallback over a large prime field: points of {f = 0} found along
// random lines, g evaluated at each.
inline InvarianceResult sample_invariance(const RationalField& K,
                                          const Polynomial<RationalField>& f,
                                          const Polynomial<RationalField>& g,
                                          const InvarianceOptions& opts) {
  constexpr i64 kPrimes[] = {2147483647, 2147483629, 2147483587};
  std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL);

  InvarianceResult res;
  res.kind = InvarianceResult::Kind::sampled;
  res.holds = true;

  for (i64 p : kPrimes) {
    PrimeField Fp(p);
    // reduce f and g mod p; a denominator hitting p moves to the next prime
    auto reduce = [&](const Polynomial<RationalField>& q,
                      Polynomial<PrimeField>& out) {
      std::vector<Polynomial<PrimeField>::Term> terms;
      for (const auto& t : q.terms()) {
        if (rat_den(t.coef) % p == 0) return false;
        terms.push_back({t.exps, Fp.from_rat(t.coef)});
      }
      out = Polynomial<PrimeField>::from_terms(Fp, q.vars(), std::move(terms));
      return true;
    };
    Polynomial<PrimeField> fp(2), gp(2);
    if (!reduce(f, fp) || !reduce(g, gp)) continue;
    if (fp.is_zero()) continue;  // degenerate reduction, try another prime

    std::uniform_int_distribution<i64> dist(0, p - 1);
    for (int line = 0; line < 512 && res.trials < opts.trials; ++line) {
      const i64 x0 = dist(rng), y0 = dist(rng);
      i64 dx = dist(rng), dy = dist(rng);
      if (dx == 0 && dy == 0) dx = 1;
      // substitute (x0 + dx t, y0 + dy t) into fp -> univariate in t
      std::vector<i64> ut;  // built via small nested Horner over terms
      {
        // represent polynomials in t as coefficient vectors
        auto add_scaled = [&](std::vector<i64>& a, const std::vector<i64>& b,
                              i64 s) {
          if (a.size() < b.size()) a.resize(b.size(), 0);
          for (std::size_t i = 0; i < b.size(); ++i)
            a[i] = (a[i] + s % p * b[i]) % p;
        };
        auto mul_lin = [&](const std::vector<i64>& a, i64 c0, i64 c1) {
          std::vector<i64> r(a.size() + 1, 0);
          for (std::size_t i = 0; i < a.size(); ++i) {
            r[i] = (r[i] + a[i] * c0) % p;
            r[i + 1] = (r[i + 1] + a[i] * c1) % p;
          }
          return r;
        };
        for (const auto& t : fp.terms()) {
          std::vector<i64> term{1};
          for (std::uint32_t e = 0; e < t.exps[0]; ++e) term = mul_lin(term, x0, dx);
          for (std::uint32_t e = 0; e < t.exps[1]; ++e) term = mul_lin(term, y0, dy);
          add_scaled(ut, term, t.coef);
        }
      }
      detail::FpUniPoly u(std::move(ut), p);
      if (u.zero()) continue;  // line lies inside the curve mod p; resample
      std::vector<i64> roots;
      detail::fp_roots_all(u, p, rng, roots);
      for (i64 r : roots) {
        if (res.trials >= opts.trials) break;
        const Point<PrimeField> pt{(x0 + r % p * dx) % p, (y0 + r % p * dy) % p};
        ++res.trials;
        if (!Fp.is_zero(gp.eval(Fp, pt))) {
          res.holds = false;
          return res;
        }
      }
    }
    if (res.trials >= opts.trials) break;
  }
  return res;
}

}  // namespace detail

// Does map^k carry the plane curve {f = 0} into itself? Certified by
// division when f is monic up to a unit in one of the variables; sampled
// over a large prime field otherwise.
inline InvarianceResult curve_invariance_check(
    const RationalField& K, const PolyMap<RationalField>& map,
    const Polynomial<RationalField>& f, u64 k,
    const InvarianceOptions& opts = {}) {
  if (map.arity != 2 || f.vars() != 2)
    throw OutOfRange("curve invariance needs an arity-2 map and a plane curve");
  if (f.is_zero()) throw OutOfRange("curve polynomial must be nonzero");
  if (k == 0) throw OutOfRange("iterate count must be positive");
  map.validate();

  const auto g = detail::compose_curve_pullback(K, map, f, k, opts);

  if (!opts.force_sampling) {
    for (std::size_t var = 0; var < 2; ++var) {
      if (!monic_up_to_unit_in(K, f, var)) continue;
      const auto [q, r] = divide_in_var(K, g, f, var);
      (void)q;
      InvarianceResult res;
      res.kind = r.is_zero() ? InvarianceResult::Kind::proved
                             : InvarianceResult::Kind::refuted;
      res.holds = r.is_zero();
      return res;
    }
  }
  return detail::sample_invariance(K, f, g, opts);
}

struct CurveAnalysisOptions {
  InvarianceOptions invariance;
  u64 prefix_bit_cap = u64(1) << 14;  // exact-orbit coordinate size cap
  std::vector<i64> certify_primes = {2147483647, 2147483629, 2147483587,
                                     2147483579, 2147483563};
};

struct CurveAnalysis {
  IndexWindow window;                 // S below the horizon, exact
  DensityEstimate density;            // headline at min(min_len, H)
  std::optional<u64> ratio;           // k = 1/delta when the headline is a unit fraction
  std::vector<u64> ratio_candidates;  // nearest unit-fraction ratios otherwise
  std::optional<InvarianceResult> invariance;  // for the reported ratio
  std::optional<std::pair<u64, u64>> ap;       // (b, k) confirmed on the window
  bool extended = false;  // memberships beyond the exact prefix were certified
  bool irreducibility_assumed = true;  // curve irreducibility is not machine-checked
};

namespace detail {

// Certified memberships for n beyond the exact prefix: zeros propagate along
// proved invariance shifts, nonzeros come from the orbit reduced modulo
// primes at which reduction is faithful.
inline std::vector<char> certify_memberships(
    const RationalField& K, const PolyMap<RationalField>& map,
    const Polynomial<RationalField>& f, const Point<RationalField>& x0,
    u64 horizon, const std::vector<Point<RationalField>>& prefix,
    const std::vector<char>& prefix_member, const std::vector<u64>& proved_ks,
    const CurveAnalysisOptions& opts) {
  enum : char { unknown = 0, zero = 1, nonzero = 2 };
  std::vector<char> state(horizon, unknown);
  for (u64 n = 0; n < prefix.size() && n < horizon; ++n)
    state[n] = prefix_member[n] ? zero : nonzero;

  // Ascending pass closes the propagation transitively for each shift.
  for (u64 n = 0; n < horizon; ++n)
    if (state[n] == zero)
      for (u64 k : proved_ks)
        if (n + k < horizon && state[n + k] == unknown) state[n + k] = zero;

  // p-integrality of the whole orbit needs p away from every denominator in
  // the map, the start point, and the curve.
  auto denominators_clear = [&](i64 p) {
    for (const auto& poly : map.num)
      for (const auto& t : poly.terms())
        if (rat_den(t.coef) % p == 0) return false;
    for (const auto& poly : map.den)
      for (const auto& t : poly.terms())
        if (rat_den(t.coef) % p == 0) return false;
    for (const auto& c : x0)
      if (rat_den(c) % p == 0) return false;
    for (const auto& t : f.terms())
      if (rat_den(t.coef) % p == 0) return false;
    return true;
  };

  for (i64 p : opts.certify_primes) {
    bool remaining = false;
    for (u64 n = 0; n < horizon; ++n)
      if (state[n] == unknown) remaining = true;
    if (!remaining) break;
    if (!denominators_clear(p)) continue;

    PrimeField Fp(p);
    PolyMap<PrimeField> mp;
    mp.arity = map.arity;
    auto reduce_poly = [&](const Polynomial<RationalField>& q) {
      std::vector<Polynomial<PrimeField>::Term> terms;
      for (const auto& t : q.terms())
        terms.push_back({t.exps, Fp.from_rat(t.coef)});
      return Polynomial<PrimeField>::from_terms(Fp, q.vars(), std::move(terms));
    };
    for (const auto& q : map.num) mp.num.push_back(reduce_poly(q));
    for (const auto& q : map.den) mp.den.push_back(reduce_poly(q));
    const auto fp = reduce_poly(f);
    Point<PrimeField> x;
    for (const auto& c : x0) x.push_back(Fp.from_rat(c));

    bool ok = true;
    for (u64 n = 0; n < horizon && ok; ++n) {
      if (state[n] == unknown && !Fp.is_zero(fp.eval(Fp, x))) state[n] = nonzero;
      if (n + 1 < horizon) {
        // a vanishing reduced denominator would make this prime unfaithful
        for (std::size_t i = 0; i < mp.arity && ok; ++i)
          if (Fp.is_zero(mp.den[i].eval(Fp, x))) ok = false;
        if (ok) x = mp.apply(Fp, x, n);
      }
    }
  }

  for (u64 n = 0; n < horizon; ++n)
    if (state[n] == unknown)
      throw UndecidedMembership(
          "membership at n = " + std::to_string(n) +
          " could not be certified; raise the prefix cap or add primes");

  std::vector<char> member(horizon, 0);
  for (u64 n = 0; n < horizon; ++n) member[n] = state[n] == zero;
  return member;
}

}  // namespace detail

// Quantitative curve analysis: the return set against a plane curve, the
// density estimate, the candidate ratio 1/delta, the invariance verdict, and
// an AP of that ratio confirmed on the window. Orbits that outgrow exact
// arithmetic are extended by certified propagation: zeros travel along
// proved invariance shifts, nonzeros carry modular certificates.
inline CurveAnalysis curve_theorem_analyze(const RationalField& K,
                                           const PolyMap<RationalField>& map,
                                           const Polynomial<RationalField>& f,
                                           const Point<RationalField>& x0,
                                           u64 horizon, u64 min_len,
                                           const CurveAnalysisOptions& opts = {}) {
  if (map.arity != 2 || f.vars() != 2)
    throw OutOfRange("curve analysis needs an arity-2 map and a plane curve");
  if (horizon == 0) throw OutOfRange("horizon must be positive");
  map.validate();

  // Exact prefix, stopping at the coordinate-size cap.
  std::vector<Point<RationalField>> prefix{x0};
  std::map<Point<RationalField>, u64> seen;
  seen[x0] = 0;
  while (prefix.size() < horizon) {
    Point<RationalField> next =
        map.apply(K, prefix.back(), prefix.size() - 1);
    if (detail::point_bits(next) > opts.prefix_bit_cap) break;
    auto [it, fresh] = seen.emplace(next, prefix.size());
    if (!fresh)
      throw PreperiodicPoint("orbit repeats below the horizon (steps " +
                             std::to_string(it->second) + " and " +
                             std::to_string(prefix.size()) + ")");
    prefix.push_back(std::move(next));
  }

  std::vector<char> prefix_member(prefix.size(), 0);
  for (u64 n = 0; n < prefix.size(); ++n)
    prefix_member[n] = K.is_zero(f.eval(K, prefix[n])) ? 1 : 0;

  CurveAnalysis out;
  std::vector<char> member;
  std::map<u64, InvarianceResult> checked;
  auto check_k = [&](u64 k) -> const InvarianceResult& {
    auto it = checked.find(k);
    if (it == checked.end())
      it = checked.emplace(k, curve_invariance_check(K, map, f, k,
                                                     opts.invariance)).first;
    return it->second;
  };

  if (prefix.size() >= horizon) {
    member.assign(prefix_member.begin(), prefix_member.begin() + horizon);
  } else {
    out.extended = true;
    // ratio candidates from the prefix density
    std::vector<u64> rel;
    for (u64 n = 0; n < prefix.size(); ++n)
      if (prefix_member[n]) rel.push_back(n);
    const IndexWindow pre_win(prefix.size(), std::move(rel));
    const u64 pre_len = std::min<u64>(min_len, prefix.size());
    std::vector<u64> proved;
    if (!pre_win.empty() && pre_len > 0) {
      const Rat d = windowed_density(pre_win, {pre_len}).headline;
      if (d > 0) {
        const u64 lo = big_to_u64(floor_rat(Rat(1) / d));
        const u64 hi = big_to_u64(ceil_rat(Rat(1) / d));
        for (u64 k : {lo, hi})
          if (k >= 1 && k <= horizon && check_k(k).kind == InvarianceResult::Kind::proved)
            proved.push_back(k);
      }
    }
    std::sort(proved.begin(), proved.end());
    proved.erase(std::unique(proved.begin(), proved.end()), proved.end());
    member = detail::certify_memberships(K, map, f, x0, horizon, prefix,
                                         prefix_member, proved, opts);
  }

  std::vector<u64> members;
  for (u64 n = 0; n < horizon; ++n)
    if (member[n]) members.push_back(n);
  out.window = IndexWindow(horizon, std::move(members));

  const u64 top_len = std::min<u64>(min_len, horizon);
  out.density = windowed_density(out.window, {top_len});

  const Rat& d = out.density.headline;
  if (d > 0) {
    if (rat_num(d) == 1) {
      out.ratio = big_to_u64(rat_den(d));
      out.invariance = check_k(*out.ratio);
      // smallest residue whose full ratio-k tail lies inside S
      for (u64 b = 0; b < *out.ratio && b < horizon; ++b) {
        bool all = true;
        u64 hits = 0;
        for (u64 v = b; v < horizon; v += *out.ratio) {
          if (!out.window.contains(v)) {
            all = false;
            break;
          }
          ++hits;
        }
        if (all && hits >= 2) {
          out.ap = std::make_pair(b, *out.ratio);
          break;
        }
      }
    } else {
      out.ratio_candidates.push_back(big_to_u64(floor_rat(Rat(1) / d)));
      out.ratio_candidates.push_back(big_to_u64(ceil_rat(Rat(1) / d)));
      std::sort(out.ratio_candidates.begin(), out.ratio_candidates.end());
      out.ratio_candidates.erase(std::unique(out.ratio_candidates.begin(),
                                             out.ratio_candidates.end()),
                                 out.ratio_candidates.end());
    }
  }
  return out;
}

}  // namespace returnset
