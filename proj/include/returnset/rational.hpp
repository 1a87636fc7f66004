#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "returnset/errors.hpp"

namespace returnset {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using u64 = std::uint64_t;
using i64 = std::int64_t;

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline BigInt floor_rat(const Rat& r) {
  BigInt q = rat_num(r) / rat_den(r);  // truncates toward zero
  if (r < 0 && q * rat_den(r) != rat_num(r)) --q;
  return q;
}

inline BigInt ceil_rat(const Rat& r) {
  BigInt q = rat_num(r) / rat_den(r);
  if (r > 0 && q * rat_den(r) != rat_num(r)) ++q;
  return q;
}

inline u64 big_to_u64(const BigInt& v) {
  if (v < 0 || v > BigInt(~u64(0))) throw OutOfRange("value does not fit in 64 bits");
  return v.convert_to<u64>();
}

inline bool is_integer(const Rat& r) { return rat_den(r) == 1; }

// Accepts "n" or "n/d" with an optional leading minus.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal");
  auto digits_ok = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = t[0] == '-' ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (!digits_ok(s)) throw ParseError("bad rational literal: " + s);
      return Rat(BigInt(s));
    }
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    if (!digits_ok(n) || !digits_ok(d)) throw ParseError("bad rational literal: " + s);
    BigInt den(d);
    if (den == 0) throw ParseError("zero denominator: " + s);
    return Rat(BigInt(n), den);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("bad rational literal: " + s);
  }
}

inline std::string rat_to_string(const Rat& r) {
  if (is_integer(r)) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

}  // namespace returnset
