#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "skein/chart_resolver.hpp"
#include "skein/curve_normalizer.hpp"
#include "skein/pipeline.hpp"

namespace skein {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

namespace io_detail {

inline Json big(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

inline mpz_class to_mpz(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) {
    try {
      return mpz_class(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw InputError("field '" + field + "' must be an integer");
}

inline Q to_q(const Json& j, const std::string& field) {
  if (j.is_number_integer()) return Q(j.get<long>());
  if (j.is_string()) {
    try {
      Q q(j.get<std::string>());
      q.canonicalize();
      return q;
    } catch (const std::exception&) {
    }
  }
  throw InputError("field '" + field + "' must be an integer or a fraction string like \"3/4\"");
}

inline Json q_json(const Q& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

inline const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError("field '" + std::string(key) + "' missing in " + where);
  return j.at(key);
}

inline int get_int(const Json& j, const char* key, const std::string& where, std::optional<int> dflt = std::nullopt) {
  if (!j.contains(key)) {
    if (dflt) return *dflt;
    throw InputError("field '" + std::string(key) + "' missing in " + where);
  }
  if (!j.at(key).is_number_integer()) throw InputError("field '" + std::string(key) + "' must be an integer");
  return j.at(key).get<int>();
}

}  // namespace io_detail

// ---- polynomials and coefficients -------------------------------------------------------

inline Json poly_to_json(const LaurentPoly& p) {
  Json out = Json::array();
  for (int e = p.min_exp(); !p.is_zero() && e <= p.max_exp(); ++e) {
    const Q c = p.coeff(e);
    if (c == 0) continue;
    out.push_back(Json::array({e, io_detail::big(c.get_num()), io_detail::big(c.get_den())}));
  }
  return out;
}

inline LaurentPoly poly_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("field 'polynomial' must be a list of [exponent, numerator, denominator]");
  LaurentPoly p;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer())
      throw InputError("field 'polynomial' must be a list of [exponent, numerator, denominator]");
    const mpz_class den = io_detail::to_mpz(t[2], "denominator");
    if (den == 0) throw InputError("field 'denominator' must be non-zero");
    Q c(io_detail::to_mpz(t[1], "numerator"), den);
    c.canonicalize();
    p.add_term(t[0].get<int>(), c);
  }
  return p;
}

// A coefficient is either a text form ("A^2 - A^-2", "(1)/(A^2 - A^-2)") or {num, den} in triples.
inline RationalFn coefficient_from_json(const Json& j) {
  if (j.is_string()) return RationalFn::parse(j.get<std::string>());
  if (j.is_array()) return RationalFn(poly_from_json(j));
  if (j.is_object()) {
    const LaurentPoly num = poly_from_json(io_detail::need(j, "num", "coefficient"));
    const LaurentPoly den = j.contains("den") ? poly_from_json(j.at("den")) : LaurentPoly(1);
    if (den.is_zero()) throw InputError("field 'den' must be non-zero");
    return RationalFn(num, den);
  }
  throw InputError("field 'coefficient' must be a string, a triple list or {num, den}");
}

// ---- multicurves and expressions --------------------------------------------------------

inline Json multicurve_to_json(const ArrowedMulticurve& m) {
  Json comps = Json::array();
  for (const auto& c : m.components()) {
    Json o{{"curve", c.curve.id()}, {"arrows", c.arrows}};
    if (c.side) o["side"] = std::string(1, c.side);
    comps.push_back(o);
  }
  Json out{{"components", comps}};
  if (const auto& sd = m.sausage_data()) {
    Json s{{"k", sd->k}, {"a", sd->a}, {"b", sd->b}, {"m", sd->m}, {"n1", sd->n1}, {"n2", sd->n2}};
    if (sd->side) s["side"] = std::string(1, sd->side);
    out["sausage_data"] = s;
  }
  return out;
}

inline char side_from_json(const Json& j) {
  if (!j.is_string() || (j != "l" && j != "r")) throw InputError("field 'side' must be \"l\" or \"r\"");
  return j.get<std::string>()[0];
}

inline ArrowedMulticurve multicurve_from_json(const Json& j, int g) {
  if (j.is_string()) return parse_multicurve(j.get<std::string>(), g);
  const Json& comps = io_detail::need(j, "components", "multicurve");
  if (!comps.is_array()) throw InputError("field 'components' must be a list");
  std::vector<Component> cs;
  for (const auto& c : comps) {
    const Json& id = io_detail::need(c, "curve", "component");
    if (!id.is_string()) throw InputError("field 'curve' must be a catalog id string");
    Component k{CurveCatalogEntry::parse(id.get<std::string>(), g), io_detail::get_int(c, "arrows", "component", 0), 0};
    if (c.contains("side")) k.side = side_from_json(c.at("side"));
    cs.push_back(k);
  }
  if (!j.contains("sausage_data")) return ArrowedMulticurve(cs);
  if (!cs.empty()) throw InputError("field 'sausage_data' cannot be combined with other components");
  const Json& s = j.at("sausage_data");
  SausageData sd;
  sd.k = io_detail::get_int(s, "k", "sausage_data");
  sd.a = io_detail::get_int(s, "a", "sausage_data", 0);
  sd.b = io_detail::get_int(s, "b", "sausage_data", 0);
  sd.m = io_detail::get_int(s, "m", "sausage_data", 0);
  sd.n1 = io_detail::get_int(s, "n1", "sausage_data", 0);
  sd.n2 = io_detail::get_int(s, "n2", "sausage_data", 0);
  if (s.contains("side")) sd.side = side_from_json(s.at("side"));
  return ArrowedMulticurve::sausage(g, sd);
}

inline Json expression_to_json(const SkeinVector& v, int g) {
  Json terms = Json::array();
  for (const auto& [m, c] : v.terms()) terms.push_back({{"coefficient", c.str()}, {"multicurve", multicurve_to_json(m)}});
  return {{"schema", kSchemaVersion}, {"genus", g}, {"terms", terms}};
}

struct ExpressionInput {
  int genus = 0;
  SkeinVector expr;
};

// {"genus": g, "terms": [{"coefficient": ..., "multicurve": ...}]} or {"genus": g, "expr": "..."}
inline ExpressionInput expression_from_json(const Json& j, std::optional<int> genus) {
  if (!j.is_object()) throw InputError("expression file must hold a JSON object");
  ExpressionInput in;
  if (j.contains("genus")) {
    in.genus = io_detail::get_int(j, "genus", "expression file");
    if (genus && *genus != in.genus) throw InputError("field 'genus' disagrees with --genus");
  } else if (genus) {
    in.genus = *genus;
  } else {
    throw InputError("field 'genus' missing in expression file");
  }
  if (in.genus < 2) throw InputError("field 'genus' must be >= 2");
  if (j.contains("expr")) {
    if (!j.at("expr").is_string()) throw InputError("field 'expr' must be a string");
    in.expr = parse_expression(j.at("expr").get<std::string>(), in.genus);
    return in;
  }
  const Json& terms = io_detail::need(j, "terms", "expression file");
  if (!terms.is_array()) throw InputError("field 'terms' must be a list");
  for (const auto& t : terms) {
    const RationalFn c = t.contains("coefficient") ? coefficient_from_json(t.at("coefficient")) : RationalFn(1);
    in.expr.add(multicurve_from_json(io_detail::need(t, "multicurve", "term"), in.genus), c);
  }
  return in;
}

// ---- coordinates ------------------------------------------------------------------------

inline Json ledger_to_json(const BraceLedger& l) {
  std::map<int, int> counts;
  for (int k : l.sorted()) ++counts[k];
  Json out = Json::array();
  for (const auto& [k, n] : counts) out.push_back(Json::array({k, n}));
  return out;
}

// {basis-id: coefficient string}, plus "ledger": [[k, multiplicity], ...] when braces were divided
inline Json coordinates_to_json(const BasisCoordinates& b) {
  Json out = Json::object();
  for (const auto& [e, c] : b.coords) out[e.id()] = c.str();
  if (!b.ledger.sorted().empty()) out["ledger"] = ledger_to_json(b.ledger);
  return out;
}

inline BasisCoordinates coordinates_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("coordinates must be a JSON object");
  BasisCoordinates b;
  for (const auto& [k, v] : j.items()) {
    if (k == "ledger") {
      for (const auto& kv : v) {
        if (!kv.is_array() || kv.size() != 2) throw InputError("field 'ledger' must be a list of [k, multiplicity]");
        b.ledger.add(kv[0].get<int>(), kv[1].get<int>());
      }
      continue;
    }
    if (!v.is_string()) throw InputError("coordinate of '" + k + "' must be a string");
    b.add(BasisElement::parse(k), RationalFn::parse(v.get<std::string>()));
  }
  return b;
}

inline std::string coordinates_text(const BasisCoordinates& b) {
  std::string s;
  for (const auto& [e, c] : b.coords) s += e.id() + " = " + c.str() + "\n";
  if (b.coords.empty()) s += "0\n";
  std::string led;
  for (int k : b.ledger.sorted()) led += (led.empty() ? "" : " ") + std::string("{") + std::to_string(k) + "}";
  if (!led.empty()) s += "ledger: " + led + "\n";
  return s;
}

inline Json trace_to_json(const std::vector<TraceStep>& trace) {
  Json out = Json::array();
  for (const auto& t : trace)
    out.push_back({{"rule", t.rule}, {"anchor", t.anchor}, {"effect", t.effect}, {"monomial", t.monomial}, {"ledger_delta", t.ledger_delta}});
  return out;
}

// ---- certificates -----------------------------------------------------------------------

inline Json certificate_to_json(const EquivCertificate& c) {
  Json moves = Json::array();
  for (const auto& m : c.moves) {
    Json o{{"curve", m.curve.name()}, {"exponent", m.exponent}, {"justification", justification_name(m.justification)}, {"intersection", m.intersection}};
    if (m.curve.auxiliary) o["partner"] = aux_name(m.curve.partner);
    moves.push_back(o);
  }
  Json steps = Json::array();
  for (const auto& w : c.steps) steps.push_back(w.str());
  return {{"schema", kSchemaVersion}, {"genus", c.genus}, {"start", c.start.str()}, {"moves", moves}, {"steps", steps}, {"end", c.end.str()}};
}

inline TwistGen parse_twist_gen(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw InputError("twist '" + s + "' must look like alpha:1, beta:2 or gamma:1");
  const std::string kind = s.substr(0, colon);
  int idx = 0;
  try {
    idx = std::stoi(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw InputError("twist '" + s + "' has a bad index");
  }
  if (kind == "alpha") return {Lickorish::alpha, idx};
  if (kind == "beta") return {Lickorish::beta, idx};
  if (kind == "gamma") return {Lickorish::gamma, idx};
  throw InputError("twist '" + s + "' must be alpha, beta or gamma");
}

inline EquivCertificate certificate_from_json(const Json& j) {
  EquivCertificate c;
  c.genus = io_detail::get_int(j, "genus", "certificate");
  c.start = Word::parse(io_detail::need(j, "start", "certificate").get<std::string>());
  c.end = Word::parse(io_detail::need(j, "end", "certificate").get<std::string>());
  for (const auto& m : io_detail::need(j, "moves", "certificate")) {
    TwistMove mv;
    const std::string name = io_detail::need(m, "curve", "move").get<std::string>();
    if (name.rfind("aux:", 0) == 0) {
      const auto parts = name.substr(4);
      const auto colon = parts.find(':');
      if (colon == std::string::npos) throw InputError("field 'curve' of a move: bad auxiliary name '" + name + "'");
      const AuxTag partner = parse_aux(io_detail::need(m, "partner", "move").get<std::string>());
      mv.curve = TwistCurve::aux(parse_aux(parts.substr(0, colon)), partner, std::stoi(parts.substr(colon + 1)));
    } else {
      mv.curve = TwistCurve::of(parse_twist_gen(name));
    }
    mv.exponent = io_detail::get_int(m, "exponent", "move");
    mv.intersection = io_detail::get_int(m, "intersection", "move");
    const std::string just = io_detail::need(m, "justification", "move").get<std::string>();
    if (just == "i1_square")
      mv.justification = Justification::i1_square;
    else if (just == "i2_single")
      mv.justification = Justification::i2_single;
    else
      throw InputError("field 'justification' must be i1_square or i2_single");
    c.moves.push_back(mv);
  }
  for (const auto& s : io_detail::need(j, "steps", "certificate")) c.steps.push_back(Word::parse(s.get<std::string>()));
  return c;
}

// ---- charts and relations ---------------------------------------------------------------

inline ChartPoint point_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw InputError("field '" + field + "' must be a point [x, y]");
  return {io_detail::to_q(j[0], field), io_detail::to_q(j[1], field)};
}

inline ChartSpec chart_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("chart must be a JSON object");
  ChartSpec s;
  s.name = j.value("name", std::string("chart"));
  s.torus = j.value("torus", false);
  if (s.torus) {
    s.width = io_detail::to_q(io_detail::need(j, "width", "chart"), "width");
    s.height = io_detail::to_q(io_detail::need(j, "height", "chart"), "height");
  }
  for (const auto& h : io_detail::need(j, "holes", "chart")) {
    ChartHole hole;
    hole.label = io_detail::need(h, "label", "hole").get<std::string>();
    hole.type = parse_hole_type(io_detail::need(h, "type", "hole").get<std::string>());
    hole.group = io_detail::get_int(h, "group", "hole");
    if (h.contains("at")) hole.at = point_from_json(h.at("at"), "at");
    s.holes.push_back(hole);
  }
  for (const auto& c : io_detail::need(j, "curves", "chart")) {
    ChartCurve cv;
    cv.name = c.value("name", std::string("curve") + std::to_string(s.curves.size()));
    for (const auto& p : io_detail::need(c, "points", "curve")) cv.pts.push_back(point_from_json(p, "points"));
    if (c.contains("shift")) cv.shift = point_from_json(c.at("shift"), "shift");
    cv.level = io_detail::get_int(c, "level", "curve");
    if (c.contains("arrows")) {
      for (const auto& a : c.at("arrows")) {
        if (!a.is_array() || a.size() != 2) throw InputError("field 'arrows' must be a list of [segment, count]");
        cv.arrows[a[0].get<int>()] += a[1].get<int>();
      }
    }
    s.curves.push_back(cv);
  }
  return s;
}

inline Json chart_to_json(const ChartSpec& s) {
  Json holes = Json::array(), curves = Json::array();
  auto pt = [](const ChartPoint& p) { return Json::array({io_detail::q_json(p.x), io_detail::q_json(p.y)}); };
  for (const auto& h : s.holes) {
    Json o{{"label", h.label}, {"type", hole_type_name(h.type)}, {"group", h.group}};
    if (h.at) o["at"] = pt(*h.at);
    holes.push_back(o);
  }
  for (const auto& c : s.curves) {
    Json pts = Json::array(), arrows = Json::array();
    for (const auto& p : c.pts) pts.push_back(pt(p));
    for (const auto& [seg, n] : c.arrows) arrows.push_back(Json::array({seg, n}));
    Json o{{"name", c.name}, {"points", pts}, {"level", c.level}};
    if (s.torus) o["shift"] = pt(c.shift);
    if (!arrows.empty()) o["arrows"] = arrows;
    curves.push_back(o);
  }
  Json out{{"schema", kSchemaVersion}, {"name", s.name}, {"torus", s.torus}};
  if (s.torus) {
    out["width"] = io_detail::q_json(s.width);
    out["height"] = io_detail::q_json(s.height);
  }
  out["holes"] = holes;
  out["curves"] = curves;
  return out;
}

// The commuted product of a chart: every stacking level reversed.
inline ChartSpec flipped_levels(ChartSpec s) {
  for (auto& c : s.curves) c.level = -c.level;
  return s;
}

inline Json relation_to_json(const ChartRelation& r) {
  Json terms = Json::array();
  for (const auto& [k, c] : r.relation.terms) {
    terms.push_back({{"multicurve", k}, {"degree", r.degree.at(k)}, {"coefficient", c.str()}, {"polynomial", poly_to_json(c.num())}});
  }
  return {{"schema", kSchemaVersion},
          {"derivation", r.relation.derivation},
          {"crossings", r.crossings},
          {"max_degree", r.relation.max_degree},
          {"head", r.heads()},
          {"terms", terms}};
}

}  // namespace skein
