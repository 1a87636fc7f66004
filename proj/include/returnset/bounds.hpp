#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"
#include "returnset/witness.hpp"

namespace returnset {

// >= 128-bit significand for the floating evaluation mode.
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<40>>;

struct BoundParams {
  Rat delta;
  u64 m = 1;
  u64 degree = 1;     // D
  u64 dimension = 1;  // e

  void validate() const {
    if (!(delta > 0 && delta <= 1)) throw OutOfRange("delta must lie in (0, 1]");
    if (m < 1 || degree < 1 || dimension < 1)
      throw OutOfRange("m, D and e must be >= 1");
  }
};

inline u64 lemma_N(const Rat& delta) { return lemma_block_size(delta); }

// (N*delta - 1) / (2 N^2 (N-1)) with N = lemma_N(delta); always positive.
inline Rat lemma_bound(const Rat& delta) {
  const BigInt n(lemma_N(delta));
  const Rat value = (Rat(n) * delta - 1) / Rat(2 * n * n * (n - 1));
  if (!(value > 0)) throw Error("lemma bound failed to be positive");
  return value;
}

struct CorollaryBound {
  u64 k_max;    // largest admissible shift, ceil(2/delta) - 1
  Rat q_bound;  // delta^3 / 24
};

inline CorollaryBound corollary_bound(const Rat& delta) {
  if (!(delta > 0 && delta <= 1)) throw OutOfRange("delta must lie in (0, 1]");
  const u64 k_max = big_to_u64(ceil_rat(Rat(2) / delta)) - 1;
  const Rat q = delta * delta * delta / 24;
  // the corollary's proof content: the lemma-style bound at N = floor(2/delta)
  // dominates delta^3/24
  const BigInt n(corollary_block_size(delta));
  const Rat lemma_style = (Rat(n) * delta - 1) / Rat(2 * n * n * (n - 1));
  if (!(lemma_style >= q))
    throw Error("lemma-style bound fell below delta^3/24");
  return {k_max, q};
}

enum class EvalMode { conservative, floating };

struct BoundTrajectoryStep {
  std::string delta;   // exact rational or decimal, per mode
  std::string degree;  // D at this level
};

struct MBoundResult {
  EvalMode mode = EvalMode::conservative;
  std::optional<Rat> exact;  // conservative mode, when within caps
  Real approx = 0;           // floating mode value
  double log10_value = 0;    // magnitude, always populated
  double error_bound = 0;    // floating mode: relative error estimate
  bool overflowed = false;   // exponent cap hit; only log10_value is meaningful
  std::vector<BoundTrajectoryStep> trajectory;
};

namespace detail {

inline double rat_log10(const Rat& r) {
  const double n = static_cast<double>(boost::multiprecision::msb(rat_num(r) + 1));
  const double d = static_cast<double>(boost::multiprecision::msb(rat_den(r) + 1));
  return (n - d) * 0.30102999566398119521;
}

}  // namespace detail

// The towering recursion M(delta, m, D, e) = M(delta^3 / (24 m^(2/delta) D^2),
// m, m^(2/delta) D^2, e-1) with base case M(delta, m, D, 1) = 1/delta.
// Conservative mode rounds the exponent 2/delta up to an integer, which can
// only push delta down and D up, so it upper-bounds the floating value.
inline MBoundResult recursive_M(const BoundParams& params, EvalMode mode,
                                u64 exponent_cap = 1000000) {
  params.validate();
  MBoundResult out;
  out.mode = mode;

  if (mode == EvalMode::conservative) {
    Rat delta = params.delta;
    BigInt degree(params.degree);
    out.trajectory.push_back({rat_to_string(delta), degree.str()});
    for (u64 level = params.dimension; level > 1; --level) {
      const BigInt e_big = ceil_rat(Rat(2) / delta);
      if (e_big > exponent_cap) {
        // switch to a logarithmic estimate for the remaining levels
        double lg_inv_delta = -detail::rat_log10(delta);
        double lg_degree = static_cast<double>(
                               boost::multiprecision::msb(degree + 1)) *
                           0.30102999566398119521;
        const double lg_m = std::log10(static_cast<double>(params.m));
        for (u64 l = level; l > 1; --l) {
          const double exp_factor = 2.0 * std::pow(10.0, lg_inv_delta);
          lg_inv_delta = 3.0 * lg_inv_delta + std::log10(24.0) +
                         exp_factor * lg_m + 2.0 * lg_degree;
          lg_degree = exp_factor * lg_m + 2.0 * lg_degree;
          if (!std::isfinite(lg_inv_delta)) break;
        }
        out.overflowed = true;
        out.log10_value = lg_inv_delta;
        return out;
      }
      const u64 e_int = big_to_u64(e_big);
      const BigInt m_pow = boost::multiprecision::pow(
          BigInt(params.m), static_cast<unsigned>(e_int));
      const BigInt d2 = m_pow * degree * degree;
      delta = delta * delta * delta / Rat(24 * d2);
      degree = d2;
      out.trajectory.push_back({rat_to_string(delta), degree.str()});
    }
    out.exact = Rat(1) / delta;
    out.log10_value = detail::rat_log10(*out.exact);
    return out;
  }

  // floating mode
  const Real eps = std::numeric_limits<Real>::epsilon();
  const double eps_d = static_cast<double>(eps);
  Real delta = static_cast<Real>(params.delta);
  Real degree = params.degree;
  const Real m_real = params.m;
  double err = eps_d;  // delta conversion
  out.trajectory.push_back({delta.str(8, std::ios_base::scientific), degree.str(8, std::ios_base::scientific)});
  for (u64 level = params.dimension; level > 1; --level) {
    const Real exponent = Real(2) / delta;
    if (exponent > Real(exponent_cap)) {
      out.overflowed = true;
      out.log10_value = static_cast<double>(
          -log10(delta) * 3 + log10(Real(24)) +
          exponent * log10(m_real) + 2 * log10(degree));
      out.error_bound = err;
      return out;
    }
    const Real m_pow = params.m == 1 ? Real(1) : pow(m_real, exponent);
    // relative error of m^y is about |y ln m| * eps
    err += (static_cast<double>(exponent) *
                std::log(static_cast<double>(params.m) + 1.0) +
            4.0) *
           eps_d;
    const Real d2 = m_pow * degree * degree;
    delta = delta * delta * delta / (Real(24) * d2);
    degree = d2;
    err *= 3.0;  // delta enters cubed
    err += 4.0 * eps_d;
    out.trajectory.push_back({delta.str(8, std::ios_base::scientific), degree.str(8, std::ios_base::scientific)});
  }
  out.approx = Real(1) / delta;
  out.log10_value = static_cast<double>(log10(out.approx));
  out.error_bound = err + eps_d;
  return out;
}

}  // namespace returnset
