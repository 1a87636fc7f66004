#pragma once

#include <set>
#include <utility>
#include <vector>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"

namespace returnset {

struct FsetTerm {
  Rat coefficient;  // c > 0
  u64 exponent_step = 1;  // l >= 1
};

namespace detail {

inline bool is_prime_u64(u64 p) {
  if (p < 2) return false;
  for (u64 d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

// All values sum_i c_i * p^(l_i * n_i) with n_i in {0..n_max} landing below
// the horizon. Any sub-horizon value that is not a natural number rejects
// the configuration.
inline IndexWindow generate_fset(u64 p, const std::vector<FsetTerm>& terms,
                                 u64 n_max, u64 horizon) {
  if (!detail::is_prime_u64(p)) throw OutOfRange("p must be prime");
  if (terms.empty()) throw OutOfRange("at least one term required");
  for (const auto& t : terms) {
    if (!(t.coefficient > 0)) throw OutOfRange("coefficients must be positive");
    if (t.exponent_step == 0 || t.exponent_step > 1000000)
      throw OutOfRange("exponent steps must lie in [1, 10^6]");
  }

  // Minimal contribution of terms i.. is sum of their coefficients (n_i = 0).
  std::vector<Rat> min_tail(terms.size() + 1, Rat(0));
  for (std::size_t i = terms.size(); i-- > 0;)
    min_tail[i] = min_tail[i + 1] + terms[i].coefficient;

  const Rat hr = Rat(BigInt(horizon));
  std::set<u64> values;

  auto emit = [&](const Rat& v) {
    if (v >= hr) return;
    if (!is_integer(v) || v < 0)
      throw NonIntegralValue("generated value " + rat_to_string(v) +
                             " below the horizon is not a natural number");
    values.insert(big_to_u64(rat_num(v)));
  };

  // DFS over exponent tuples; contributions grow with the exponent, so once
  // a partial sum plus the minimal tail reaches the horizon the rest of the
  // exponent range can be skipped.
  auto rec = [&](auto&& self, std::size_t i, const Rat& partial) -> void {
    if (i == terms.size()) {
      emit(partial);
      return;
    }
    const BigInt step = boost::multiprecision::pow(BigInt(p),
                                                   static_cast<unsigned>(terms[i].exponent_step));
    BigInt power = 1;
    for (u64 n = 0; n <= n_max; ++n) {
      const Rat contribution = terms[i].coefficient * Rat(power);
      if (partial + contribution + min_tail[i + 1] >= hr) break;
      self(self, i + 1, partial + contribution);
      if (n < n_max) power *= step;
    }
  };
  rec(rec, 0, Rat(0));

  std::vector<u64> out(values.begin(), values.end());
  return IndexWindow(horizon, std::move(out));
}

}  // namespace returnset
