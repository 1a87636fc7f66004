#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "returnset/apset.hpp"
#include "returnset/bounds.hpp"
#include "returnset/curve.hpp"
#include "returnset/decompose.hpp"
#include "returnset/density.hpp"
#include "returnset/enumerate.hpp"
#include "returnset/errors.hpp"
#include "returnset/fields.hpp"
#include "returnset/finite_system.hpp"
#include "returnset/polymap.hpp"
#include "returnset/rational.hpp"
#include "returnset/window.hpp"
#include "returnset/witness.hpp"

namespace returnset {

using Json = nlohmann::json;

// ---- IndexWindow --------------------------------------------------------

inline Json window_to_json(const IndexWindow& w) {
  return Json{{"horizon", w.horizon()}, {"members", w.members()}};
}

inline IndexWindow window_from_json(const Json& j) {
  try {
    return IndexWindow(j.at("horizon").get<u64>(),
                       j.at("members").get<std::vector<u64>>());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad window JSON: ") + e.what());
  }
}

// Plain-text window format: "# horizon=H" then one member per line.
inline std::string window_to_text(const IndexWindow& w) {
  std::ostringstream os;
  os << "# horizon=" << w.horizon() << "\n";
  for (u64 m : w.members()) os << m << "\n";
  return os.str();
}

inline IndexWindow window_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  u64 horizon = 0;
  bool have_horizon = false;
  std::vector<u64> members;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ParseError("window header must read '# horizon=H'");
      try {
        horizon = std::stoull(line.substr(eq + 1));
      } catch (const std::exception&) {
        throw ParseError("bad horizon in window header");
      }
      have_horizon = true;
      continue;
    }
    try {
      members.push_back(std::stoull(line));
    } catch (const std::exception&) {
      throw ParseError("bad member line: " + line);
    }
  }
  if (!have_horizon) throw ParseError("window text is missing the horizon header");
  try {
    return IndexWindow::from_unsorted(horizon, std::move(members));
  } catch (const Error& e) {
    throw ParseError(std::string("bad window: ") + e.what());
  }
}

// ---- density / decomposition -------------------------------------------

inline Json density_to_json(const DensityEstimate& d) {
  Json curve = Json::array();
  for (const auto& [len, stat] : d.per_length)
    curve.push_back({{"length", len},
                     {"numerator", big_to_u64(rat_num(stat.value))},
                     {"denominator", big_to_u64(rat_den(stat.value))},
                     {"start", stat.start}});
  return Json{{"curve", curve},
              {"headline",
               {{"numerator", big_to_u64(rat_num(d.headline))},
                {"denominator", big_to_u64(rat_den(d.headline))},
                {"length", d.headline_length}}}};
}

inline Json decomposition_to_json(const APDecomposition& d) {
  Json progs = Json::array();
  for (const auto& p : d.structured.progressions())
    progs.push_back({{"residue", p.residue},
                     {"modulus", p.modulus},
                     {"threshold", p.threshold}});
  Json curve = Json::array();
  for (const auto& [len, stat] : d.residual_density.per_length)
    curve.push_back({{"length", len},
                     {"numerator", big_to_u64(rat_num(stat.value))},
                     {"denominator", big_to_u64(rat_den(stat.value))}});
  return Json{{"progressions", progs},
              {"exceptional", d.structured.exceptional()},
              {"residual", d.residual.members()},
              {"residual_density_curve", curve},
              {"horizon", d.residual.horizon()},
              {"inconclusive", d.inconclusive}};
}

inline APDecomposition decomposition_from_json(const Json& j) {
  try {
    std::vector<Progression> progs;
    for (const auto& p : j.at("progressions"))
      progs.push_back(Progression{p.at("residue").get<u64>(),
                                  p.at("modulus").get<u64>(),
                                  p.at("threshold").get<u64>()});
    APDecomposition d;
    d.structured =
        APSet(std::move(progs), j.at("exceptional").get<std::vector<u64>>());
    d.residual = IndexWindow(j.at("horizon").get<u64>(),
                             j.at("residual").get<std::vector<u64>>());
    d.inconclusive = j.value("inconclusive", false);
    return d;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad decomposition JSON: ") + e.what());
  }
}

// ---- witnesses ----------------------------------------------------------

inline Json witness_to_json(const Witness& w) {
  return Json{{"mode", w.mode == WitnessMode::lemma ? "lemma" : "corollary"},
              {"k", w.k},
              {"N", w.block_size},
              {"declared_density", rat_to_string(w.declared_density)},
              {"Q", window_to_json(w.q)}};
}

// ---- finite systems -----------------------------------------------------

inline Json finite_system_to_json(const FiniteSystem& sys) {
  const std::size_t n = sys.space.size();
  Json leq = Json::array();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (y != x && sys.space.leq(static_cast<int>(y), static_cast<int>(x)))
        leq.push_back({y, x});
  Json map = Json::array();
  for (std::size_t p = 0; p < n; ++p) {
    if (sys.map.defined_at(static_cast<int>(p)))
      map.push_back(sys.map.apply(static_cast<int>(p)));
    else
      map.push_back(nullptr);
  }
  Json out{{"n", n}, {"leq", leq}, {"map", map}, {"start", sys.start}};
  Json target = Json::array();
  for (std::size_t p = 0; p < n; ++p)
    if (in_set(sys.target, static_cast<int>(p))) target.push_back(p);
  out["target"] = target;
  if (!sys.map.total()) {
    Json dom = Json::array();
    for (std::size_t p = 0; p < n; ++p)
      if (in_set(sys.map.domain(), static_cast<int>(p))) dom.push_back(p);
    out["domain"] = dom;
  }
  return out;
}

inline FiniteSystem finite_system_from_json(const Json& j) {
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<std::pair<int, int>> pairs;
    for (const auto& pr : j.at("leq"))
      pairs.emplace_back(pr.at(0).get<int>(), pr.at(1).get<int>());
    FinitePreorder space = FinitePreorder::from_pairs(n, pairs);

    std::vector<int> image(n, -1);
    const auto& jm = j.at("map");
    if (jm.size() != n) throw ParseError("map must list one image per point");
    for (std::size_t p = 0; p < n; ++p)
      if (!jm[p].is_null()) image[p] = jm[p].get<int>();

    PointSet target = 0;
    for (const auto& t : j.at("target")) target |= singleton(t.get<int>());

    const int start = j.at("start").get<int>();
    if (j.contains("domain")) {
      PointSet dom = 0;
      for (const auto& d : j.at("domain")) dom |= singleton(d.get<int>());
      ContinuousSelfMap map(space, image, dom);
      return FiniteSystem(space, map, start, target);
    }
    ContinuousSelfMap map(space, image);
    return FiniteSystem(space, map, start, target);
  } catch (const Error& e) {
    throw ParseError(std::string("bad finite system: ") + e.what());
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad finite system JSON: ") + e.what());
  }
}

// ---- algebraic systems --------------------------------------------------

template <class F>
struct AlgebraicSystem {
  F field;
  PolyMap<F> map;
  Point<F> start;
  AffineClosedSet<F> target;
};

using AnyAlgebraicSystem =
    std::variant<AlgebraicSystem<RationalField>, AlgebraicSystem<PrimeField>>;

template <class F>
Polynomial<F> poly_from_json(const F& K, std::size_t vars, const Json& j) {
  std::vector<typename Polynomial<F>::Term> terms;
  for (const auto& t : j) {
    typename Polynomial<F>::Term term;
    term.coef = K.parse(t.at("coef").template get<std::string>());
    for (const auto& e : t.at("exps"))
      term.exps.push_back(e.template get<std::uint32_t>());
    if (term.exps.size() != vars)
      throw ParseError("term exponent list must match the arity");
    terms.push_back(std::move(term));
  }
  return Polynomial<F>::from_terms(K, vars, std::move(terms));
}

template <class F>
Json poly_to_json(const F& K, const Polynomial<F>& p) {
  Json out = Json::array();
  for (const auto& t : p.terms())
    out.push_back({{"coef", K.format(t.coef)}, {"exps", t.exps}});
  return out;
}

template <class F>
AlgebraicSystem<F> algebraic_from_json_typed(F field, const Json& j) {
  const auto arity = j.at("arity").get<std::size_t>();
  AlgebraicSystem<F> sys{field, {}, {}, {}};
  sys.map.arity = arity;
  for (const auto& p : j.at("map").at("num"))
    sys.map.num.push_back(poly_from_json(field, arity, p));
  if (j.at("map").contains("den"))
    for (const auto& p : j.at("map").at("den"))
      sys.map.den.push_back(poly_from_json(field, arity, p));
  else
    for (std::size_t i = 0; i < arity; ++i)
      sys.map.den.push_back(Polynomial<F>::constant(field, arity, field.one()));
  sys.map.validate();
  for (const auto& c : j.at("start"))
    sys.start.push_back(field.parse(c.template get<std::string>()));
  if (sys.start.size() != arity) throw ParseError("start point arity mismatch");
  for (const auto& p : j.at("target"))
    sys.target.generators.push_back(poly_from_json(field, arity, p));
  return sys;
}

inline AnyAlgebraicSystem algebraic_from_json(const Json& j) {
  try {
    const auto& f = j.at("field");
    if (f.is_string() && f.get<std::string>() == "Q")
      return algebraic_from_json_typed(RationalField{}, j);
    if (f.is_object() && f.contains("Fp"))
      return algebraic_from_json_typed(PrimeField(f.at("Fp").get<i64>()), j);
    throw ParseError("field must be \"Q\" or {\"Fp\": p}");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad algebraic system JSON: ") + e.what());
  }
}

// ---- verification report -------------------------------------------------

inline Json verify_report_to_json(const VerifyReport& r) {
  Json per = Json::array();
  for (const auto& [n, c] : r.per_points)
    per.push_back({{"points", n},
                   {"spaces", c.spaces},
                   {"monotone_maps", c.monotone_maps},
                   {"closed_targets", c.closed_targets},
                   {"forward_instances", c.forward_instances},
                   {"backward_instances", c.backward_instances},
                   {"partial_instances", c.partial_instances}});
  Json certs = Json::array();
  for (const auto& c : r.certificates)
    certs.push_back({{"kind", c.kind}, {"detail", c.detail}});
  return Json{{"schema", 1},
              {"max_points", r.max_points},
              {"per_points", per},
              {"certificates", certs},
              {"instances_used", r.instances_used},
              {"budget", r.budget},
              {"budget_exceeded", r.budget_exceeded}};
}

// ---- bounds --------------------------------------------------------------

inline Json mbound_to_json(const MBoundResult& r) {
  Json traj = Json::array();
  for (const auto& s : r.trajectory)
    traj.push_back({{"delta", s.delta}, {"D", s.degree}});
  Json out{{"mode", r.mode == EvalMode::conservative ? "conservative" : "floating"},
           {"log10", r.log10_value},
           {"overflowed", r.overflowed},
           {"trajectory", traj}};
  if (r.exact) out["value"] = rat_to_string(*r.exact);
  if (r.mode == EvalMode::floating && !r.overflowed) {
    out["value"] = r.approx.str(30, std::ios_base::scientific);
    out["relative_error_bound"] = r.error_bound;
  }
  return out;
}

// ---- files ----------------------------------------------------------------

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

}  // namespace returnset
