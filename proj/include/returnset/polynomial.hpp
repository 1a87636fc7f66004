#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "returnset/errors.hpp"
#include "returnset/rational.hpp"

namespace returnset {

using ExponentVec = std::vector<std::uint32_t>;

// Graded lexicographic: higher total degree first, then lexicographic on the
// exponent vector.
struct GradedLexGreater {
  bool operator()(const ExponentVec& a, const ExponentVec& b) const {
    u64 da = std::accumulate(a.begin(), a.end(), u64(0));
    u64 db = std::accumulate(b.begin(), b.end(), u64(0));
    if (da != db) return da > db;
    return a > b;
  }
};

// Multivariate polynomial with coefficients in F, terms kept in descending
// graded-lex order with no zero coefficients stored.
template <class F>
class Polynomial {
 public:
  using Elem = typename F::Elem;

  struct Term {
    ExponentVec exps;
    Elem coef;
  };

  explicit Polynomial(std::size_t vars = 0) : vars_(vars) {}

  static Polynomial constant(const F& K, std::size_t vars, const Elem& c) {
    Polynomial p(vars);
    if (!K.is_zero(c)) p.terms_.push_back({ExponentVec(vars, 0), c});
    return p;
  }

  static Polynomial variable(const F& K, std::size_t vars, std::size_t idx) {
    Polynomial p(vars);
    ExponentVec e(vars, 0);
    e.at(idx) = 1;
    p.terms_.push_back({std::move(e), K.one()});
    return p;
  }

  static Polynomial from_terms(const F& K, std::size_t vars,
                               std::vector<Term> terms) {
    std::map<ExponentVec, Elem, GradedLexGreater> acc;
    for (auto& t : terms) {
      if (t.exps.size() != vars) throw OutOfRange("term arity mismatch");
      auto [it, fresh] = acc.emplace(std::move(t.exps), t.coef);
      if (!fresh) it->second = K.add(it->second, t.coef);
    }
    Polynomial p(vars);
    for (auto& [e, c] : acc)
      if (!K.is_zero(c)) p.terms_.push_back({e, c});
    return p;
  }

  std::size_t vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  u64 total_degree() const {
    u64 d = 0;
    for (const auto& t : terms_)
      d = std::max(d, std::accumulate(t.exps.begin(), t.exps.end(), u64(0)));
    return d;
  }

  u64 degree_in(std::size_t var) const {
    u64 d = 0;
    for (const auto& t : terms_) d = std::max(d, u64(t.exps[var]));
    return d;
  }

  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 &&
            std::accumulate(terms_[0].exps.begin(), terms_[0].exps.end(),
                            u64(0)) == 0);
  }

  Polynomial add(const F& K, const Polynomial& o) const {
    std::vector<Term> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return from_terms(K, vars_, std::move(all));
  }

  Polynomial sub(const F& K, const Polynomial& o) const {
    std::vector<Term> all = terms_;
    for (const auto& t : o.terms_) all.push_back({t.exps, K.neg(t.coef)});
    return from_terms(K, vars_, std::move(all));
  }

  Polynomial mul(const F& K, const Polynomial& o, u64 term_cap = 0) const {
    std::map<ExponentVec, Elem, GradedLexGreater> acc;
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        ExponentVec e(vars_);
        for (std::size_t i = 0; i < vars_; ++i) e[i] = a.exps[i] + b.exps[i];
        const Elem c = K.mul(a.coef, b.coef);
        auto [it, fresh] = acc.emplace(std::move(e), c);
        if (!fresh) it->second = K.add(it->second, c);
        if (term_cap && acc.size() > term_cap)
          throw DegreeOverflow("product exceeds the term cap of " +
                               std::to_string(term_cap));
      }
    Polynomial p(vars_);
    for (auto& [e, c] : acc)
      if (!K.is_zero(c)) p.terms_.push_back({e, c});
    return p;
  }

  Polynomial scale(const F& K, const Elem& c) const {
    Polynomial p(vars_);
    if (K.is_zero(c)) return p;
    for (const auto& t : terms_) p.terms_.push_back({t.exps, K.mul(t.coef, c)});
    return p;
  }

  Elem eval(const F& K, const std::vector<Elem>& point) const {
    if (point.size() != vars_) throw OutOfRange("evaluation arity mismatch");
    // power tables per variable up to the needed degree
    std::vector<std::vector<Elem>> pows(vars_);
    for (std::size_t v = 0; v < vars_; ++v) {
      const u64 d = degree_in(v);
      pows[v].reserve(d + 1);
      pows[v].push_back(K.one());
      for (u64 e = 1; e <= d; ++e)
        pows[v].push_back(K.mul(pows[v].back(), point[v]));
    }
    Elem acc = K.zero();
    for (const auto& t : terms_) {
      Elem term = t.coef;
      for (std::size_t v = 0; v < vars_; ++v)
        term = K.mul(term, pows[v][t.exps[v]]);
      acc = K.add(acc, term);
    }
    return acc;
  }

  // Substitute polynomials for the variables.
  Polynomial compose(const F& K, const std::vector<Polynomial>& args,
                     u64 term_cap = 0) const {
    if (args.size() != vars_) throw OutOfRange("composition arity mismatch");
    const std::size_t out_vars = args.empty() ? 0 : args[0].vars();
    // cache argument powers
    std::vector<std::vector<Polynomial>> pows(vars_);
    for (std::size_t v = 0; v < vars_; ++v)
      pows[v].push_back(constant(K, out_vars, K.one()));
    auto power = [&](std::size_t v, std::uint32_t e) -> const Polynomial& {
      while (pows[v].size() <= e)
        pows[v].push_back(pows[v].back().mul(K, args[v], term_cap));
      return pows[v][e];
    };
    Polynomial acc(out_vars);
    for (const auto& t : terms_) {
      Polynomial term = constant(K, out_vars, t.coef);
      for (std::size_t v = 0; v < vars_; ++v)
        if (t.exps[v] > 0) term = term.mul(K, power(v, t.exps[v]), term_cap);
      acc = acc.add(K, term);
      if (term_cap && acc.term_count() > term_cap)
        throw DegreeOverflow("composition exceeds the term cap of " +
                             std::to_string(term_cap));
    }
    return acc;
  }

  bool equals(const F& K, const Polynomial& o) const {
    if (vars_ != o.vars_ || terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (terms_[i].exps != o.terms_[i].exps ||
          !K.eq(terms_[i].coef, o.terms_[i].coef))
        return false;
    return true;
  }

 private:
  std::size_t vars_;
  std::vector<Term> terms_;  // descending graded-lex
};

// The coefficient of x_var^k, as a polynomial in the remaining variables
// (same arity, with exponent 0 at var).
template <class F>
Polynomial<F> coefficient_in(const F& K, const Polynomial<F>& p,
                             std::size_t var, u64 k) {
  std::vector<typename Polynomial<F>::Term> terms;
  for (const auto& t : p.terms())
    if (t.exps[var] == k) {
      auto e = t.exps;
      e[var] = 0;
      terms.push_back({std::move(e), t.coef});
    }
  return Polynomial<F>::from_terms(K, p.vars(), std::move(terms));
}

// True when the leading coefficient of p with respect to var is a nonzero
// constant, so division by p in that variable stays polynomial.
template <class F>
bool monic_up_to_unit_in(const F& K, const Polynomial<F>& p, std::size_t var) {
  if (p.is_zero()) return false;
  return coefficient_in(K, p, var, p.degree_in(var)).is_constant();
}

// Division of g by f in the chosen variable, valid when f is monic up to a
// unit there: g = q*f + r with deg_var(r) < deg_var(f).
template <class F>
std::pair<Polynomial<F>, Polynomial<F>> divide_in_var(const F& K,
                                                      const Polynomial<F>& g,
                                                      const Polynomial<F>& f,
                                                      std::size_t var) {
  if (!monic_up_to_unit_in(K, f, var))
    throw OutOfRange("divisor is not monic up to a unit in the chosen variable");
  const u64 df = f.degree_in(var);
  const auto lc = coefficient_in(K, f, var, df);
  const auto lc_inv = K.div(K.one(), lc.terms()[0].coef);

  Polynomial<F> q(g.vars()), r = g;
  while (!r.is_zero()) {
    const u64 dr = r.degree_in(var);
    if (dr < df) break;
    auto lt = coefficient_in(K, r, var, dr).scale(K, lc_inv);
    // multiply by x_var^(dr-df)
    std::vector<typename Polynomial<F>::Term> shifted;
    for (const auto& t : lt.terms()) {
      auto e = t.exps;
      e[var] = static_cast<std::uint32_t>(dr - df);
      shifted.push_back({std::move(e), t.coef});
    }
    auto m = Polynomial<F>::from_terms(K, g.vars(), std::move(shifted));
    q = q.add(K, m);
    r = r.sub(K, m.mul(K, f));
  }
  return {q, r};
}

}  // namespace returnset
