#pragma once

#include <string>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"

namespace returnset {

// Exact rational coefficients.
struct RationalField {
  using Elem = Rat;

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem div(const Elem& a, const Elem& b) const {
    if (b == 0) throw ZeroDivide();
    return a / b;
  }
  bool is_zero(const Elem& a) const { return a == 0; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }

  Elem parse(const std::string& s) const { return parse_rat(s); }
  std::string format(const Elem& a) const { return rat_to_string(a); }
};

// Residues modulo a prime below 2^31 (products fit in 64 bits).
struct PrimeField {
  using Elem = i64;

  i64 p;

  explicit PrimeField(i64 prime) : p(prime) {
    if (p < 2 || p >= (i64(1) << 31)) throw OutOfRange("prime must lie in [2, 2^31)");
    for (i64 d = 2; d * d <= p; ++d)
      if (p % d == 0) throw OutOfRange("modulus is not prime");
  }

  Elem zero() const { return 0; }
  Elem one() const { return 1 % p; }
  Elem add(Elem a, Elem b) const { return (a + b) % p; }
  Elem sub(Elem a, Elem b) const { return ((a - b) % p + p) % p; }
  Elem mul(Elem a, Elem b) const { return a * b % p; }
  Elem neg(Elem a) const { return (p - a) % p; }
  Elem inv(Elem a) const {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw ZeroDivide();
    i64 r0 = p, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
      const i64 q = r0 / r1;
      const i64 r2 = r0 - q * r1, s2 = s0 - q * s1;
      r0 = r1; r1 = r2;
      s0 = s1; s1 = s2;
    }
    return (s0 % p + p) % p;
  }
  Elem div(Elem a, Elem b) const { return mul(a % p, inv(b)); }
  bool is_zero(Elem a) const { return a % p == 0; }
  bool eq(Elem a, Elem b) const { return (a - b) % p == 0; }

  Elem from_int(const BigInt& v) const {
    BigInt r = v % p;
    if (r < 0) r += p;
    return r.convert_to<i64>();
  }
  Elem from_rat(const Rat& r) const {
    const Elem d = from_int(rat_den(r));
    if (d == 0) throw ZeroDivide();
    return div(from_int(rat_num(r)), d);
  }
  Elem parse(const std::string& s) const { return from_rat(parse_rat(s)); }
  std::string format(Elem a) const { return std::to_string(((a % p) + p) % p); }
};

}  // namespace returnset
