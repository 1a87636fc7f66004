#pragma once

#include <utility>
#include <vector>

#include "returnset/errors.hpp"
#include "returnset/fields.hpp"
#include "returnset/polynomial.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"

namespace returnset {

template <class F>
using Point = std::vector<typename F::Elem>;

// Coordinatewise rational self-map: numerators over denominators, with
// constant denominators for morphisms.
template <class F>
struct PolyMap {
  std::size_t arity = 0;
  std::vector<Polynomial<F>> num;
  std::vector<Polynomial<F>> den;

  bool is_polynomial() const {
    for (const auto& d : den)
      if (!d.is_constant()) return false;
    return true;
  }

  void validate() const {
    if (num.size() != arity || den.size() != arity)
      throw OutOfRange("map needs one numerator and one denominator per coordinate");
    for (const auto& p : num)
      if (p.vars() != arity) throw OutOfRange("numerator arity mismatch");
    for (const auto& d : den) {
      if (d.vars() != arity) throw OutOfRange("denominator arity mismatch");
      if (d.is_zero()) throw OutOfRange("denominator is identically zero");
    }
  }

  // One application; `step` only labels the error.
  Point<F> apply(const F& K, const Point<F>& x, u64 step) const {
    Point<F> y;
    y.reserve(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      const auto dv = den[i].eval(K, x);
      if (K.is_zero(dv)) throw DomainError(step);
      y.push_back(K.div(num[i].eval(K, x), dv));
    }
    return y;
  }
};

template <class F>
struct AffineClosedSet {
  std::vector<Polynomial<F>> generators;

  bool contains(const F& K, const Point<F>& x) const {
    for (const auto& g : generators)
      if (!K.is_zero(g.eval(K, x))) return false;
    return true;
  }
};

namespace detail {

inline u64 rat_bits(const Rat& r) {
  return boost::multiprecision::msb(boost::multiprecision::abs(rat_num(r)) + 1) +
         boost::multiprecision::msb(rat_den(r) + 1);
}

template <class F>
u64 point_bits(const Point<F>&) {
  return 0;  // bounded coordinates (finite fields)
}

inline u64 point_bits(const Point<RationalField>& x) {
  u64 b = 0;
  for (const auto& c : x)
    if (c != 0) b += rat_bits(c);
  return b;
}

}  // namespace detail

// x0, map(x0), ..., map^(H-1)(x0). DomainError(n) reports the orbit leaving
// the domain when applying the map to the n-th point. Over the rationals the
// coordinate size is capped so runaway orbits fail loudly.
template <class F>
std::vector<Point<F>> iterate_orbit(const F& K, const PolyMap<F>& map,
                                    const Point<F>& x0, u64 horizon,
                                    u64 coord_bit_cap = u64(1) << 20) {
  map.validate();
  if (x0.size() != map.arity) throw OutOfRange("start point arity mismatch");
  std::vector<Point<F>> orbit;
  if (horizon == 0) return orbit;
  orbit.push_back(x0);
  for (u64 n = 0; n + 1 < horizon; ++n) {
    orbit.push_back(map.apply(K, orbit.back(), n));
    if (detail::point_bits(orbit.back()) > coord_bit_cap)
      throw OrbitOverflow("orbit coordinates exceed " +
                          std::to_string(coord_bit_cap) + " bits at step " +
                          std::to_string(n + 1));
  }
  return orbit;
}

// Window of n < H with every generator of Y vanishing at map^n(x0).
template <class F>
IndexWindow return_set(const F& K, const PolyMap<F>& map, const Point<F>& x0,
                       const AffineClosedSet<F>& target, u64 horizon,
                       u64 coord_bit_cap = u64(1) << 20) {
  const auto orbit = iterate_orbit(K, map, x0, horizon, coord_bit_cap);
  std::vector<u64> members;
  for (u64 n = 0; n < orbit.size(); ++n)
    if (target.contains(K, orbit[n])) members.push_back(n);
  return IndexWindow(horizon, std::move(members));
}

// Brent-style cycle detection over a finite field: minimal cycle length
// first, then the minimal tail.
template <class F>
std::pair<u64, u64> detect_cycle(const F& K, const PolyMap<F>& map,
                                 const Point<F>& x0) {
  map.validate();
  if (x0.size() != map.arity) throw OutOfRange("start point arity mismatch");
  auto eq_point = [&](const Point<F>& a, const Point<F>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!K.eq(a[i], b[i])) return false;
    return true;
  };

  u64 power = 1, lam = 1;
  Point<F> tortoise = x0;
  u64 hare_pos = 1;
  Point<F> hare = map.apply(K, x0, 0);
  while (!eq_point(tortoise, hare)) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    hare = map.apply(K, hare, hare_pos);
    ++hare_pos;
    ++lam;
  }

  // tail: walk two cursors lam apart from the start
  Point<F> a = x0, b = x0;
  for (u64 i = 0; i < lam; ++i) b = map.apply(K, b, i);
  u64 tail = 0;
  u64 a_pos = 0, b_pos = lam;
  while (!eq_point(a, b)) {
    a = map.apply(K, a, a_pos++);
    b = map.apply(K, b, b_pos++);
    ++tail;
  }
  return {tail, lam};
}

}  // namespace returnset
