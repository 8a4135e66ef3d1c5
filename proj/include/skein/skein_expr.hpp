#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skein/laurent.hpp"
#include "skein/surface_model.hpp"

namespace skein {

struct Component {
  CurveCatalogEntry curve;
  int arrows = 0;
  char side = 0;  // 'l' or 'r' for a trivial curve beside a separating one

  std::string key() const {
    std::string s = curve.id() + "#" + std::to_string(arrows);
    if (side) s += std::string("@") + side;
    return s;
  }
  friend bool operator<(const Component& x, const Component& y) { return x.key() < y.key(); }
  friend bool operator==(const Component& x, const Component& y) { return x.key() == y.key(); }
};

// D^k_{a,b} family: even k is the separating sausage curve with a+b arrows
// (the disk boundaries at k = 0 and k = 2g), odd k = 2j-1 is the pair (c_{2j-1} with a, e_j with b).
struct SausageData {
  int k = 0, a = 0, b = 0, m = 0;
  char side = 0;
  int n1 = 0, n2 = 0;

  std::string key() const {
    std::string s = "D" + std::to_string(k) + "," + std::to_string(a) + "," + std::to_string(b) + ",m" + std::to_string(m) +
                    ",n" + std::to_string(n1) + "," + std::to_string(n2);
    if (side) s += std::string("@") + side;
    return s;
  }
};

class ArrowedMulticurve {
 public:
  ArrowedMulticurve() = default;
  explicit ArrowedMulticurve(std::vector<Component> cs, std::optional<SausageData> sd = std::nullopt)
      : comps_(std::move(cs)), sd_(sd) {
    std::sort(comps_.begin(), comps_.end());
    for (auto& c : comps_)
      if (c.side && !c.curve.is_trivial()) throw InputError("side tag only applies to trivial components");
  }
  static ArrowedMulticurve sausage(int genus, const SausageData& sd) {
    if (sd.k < 0 || sd.k > 2 * genus) throw InputError("sausage position out of range");
    if (sd.m < 0 || sd.n1 < 0 || sd.n2 < 0) throw InputError("sausage counts must be non-negative");
    ArrowedMulticurve m;
    m.sd_ = sd;
    m.genus_hint_ = genus;
    return m;
  }

  const std::vector<Component>& components() const { return comps_; }
  const std::optional<SausageData>& sausage_data() const { return sd_; }
  bool empty() const { return comps_.empty() && !sd_; }
  int genus_hint() const { return genus_hint_; }

  std::string key() const {
    std::string s;
    for (const auto& c : comps_) s += c.key() + ";";
    if (sd_) s += sd_->key() + "|g" + std::to_string(genus_hint_);
    return s.empty() ? "empty" : s;
  }
  friend bool operator<(const ArrowedMulticurve& x, const ArrowedMulticurve& y) { return x.key() < y.key(); }
  friend bool operator==(const ArrowedMulticurve& x, const ArrowedMulticurve& y) { return x.key() == y.key(); }

  // The components a D-family symbol stands for (extra curves excluded).
  std::vector<Component> expanded(int g) const {
    std::vector<Component> out = comps_;
    if (sd_) {
      const auto& d = *sd_;
      if (d.k == 0 || d.k == 2 * g) {
        out.push_back({CurveCatalogEntry::trivial(g), d.k == 0 ? d.a + d.b : -(d.a + d.b), 0});
      } else if (d.k % 2 == 0) {
        out.push_back({CurveCatalogEntry::sausage(g, d.k), d.a + d.b, 0});
      } else {
        out.push_back({CurveCatalogEntry::sausage(g, d.k), d.a, 0});
        out.push_back({CurveCatalogEntry::sausage_e(g, (d.k + 1) / 2), d.b, 0});
      }
    }
    return out;
  }

  std::string str() const {
    std::string s;
    for (const auto& c : comps_) {
      if (!s.empty()) s += ";";
      s += c.curve.id() + ":arrows=" + std::to_string(c.arrows);
      if (c.side) s += std::string(":side=") + c.side;
    }
    if (sd_) {
      if (!s.empty()) s += ";";
      s += "D:k=" + std::to_string(sd_->k) + ":a=" + std::to_string(sd_->a) + ":b=" + std::to_string(sd_->b);
      if (sd_->m) s += ":m=" + std::to_string(sd_->m);
      if (sd_->side) s += std::string(":side=") + sd_->side;
      if (sd_->n1) s += ":n1=" + std::to_string(sd_->n1);
      if (sd_->n2) s += ":n2=" + std::to_string(sd_->n2);
    }
    return s.empty() ? "empty" : s;
  }

 private:
  std::vector<Component> comps_;
  std::optional<SausageData> sd_;
  int genus_hint_ = 0;
};

class SkeinVector {
 public:
  using Map = std::map<ArrowedMulticurve, RationalFn>;
  SkeinVector() = default;
  SkeinVector(const ArrowedMulticurve& m, const RationalFn& c = RationalFn(1)) { add(m, c); }

  void add(const ArrowedMulticurve& m, const RationalFn& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.emplace(m, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
  SkeinVector& operator+=(const SkeinVector& o) {
    for (const auto& [m, c] : o.t_) add(m, c);
    return *this;
  }
  SkeinVector scaled(const RationalFn& c) const {
    SkeinVector r;
    for (const auto& [m, x] : t_) r.add(m, x * c);
    return r;
  }
  const Map& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  friend bool operator==(const SkeinVector& x, const SkeinVector& y) { return x.t_ == y.t_; }

 private:
  Map t_;
};

// ---- measures -----------------------------------------------------------------

struct CurveCounts {
  int nonsep = 0, sep = 0;
};

inline CurveCounts count_curves(const ArrowedMulticurve& m, int g) {
  CurveCounts c;
  for (const auto& comp : m.expanded(g)) {
    if (comp.curve.is_trivial()) continue;
    (comp.curve.separating() ? c.sep : c.nonsep)++;
  }
  if (const auto& d = m.sausage_data()) {
    c.sep += d->m;
    c.nonsep += d->n1 + d->n2;
  }
  return c;
}

inline int degree(const ArrowedMulticurve& m, int g) {
  auto c = count_curves(m, g);
  return c.nonsep + 2 * c.sep;
}

inline std::pair<int, int> complexity(const ArrowedMulticurve& m, int g) {
  auto c = count_curves(m, g);
  return {c.nonsep + 2 * c.sep, c.nonsep + c.sep};
}

struct Grading {
  Homology2Class h;
  int arrows = 0;
  friend bool operator==(const Grading& x, const Grading& y) { return x.h == y.h && x.arrows == y.arrows; }
  friend bool operator!=(const Grading& x, const Grading& y) { return !(x == y); }
  std::string str() const { return "(" + h.str() + "," + std::to_string(arrows) + ")"; }
};

inline Grading grading(const ArrowedMulticurve& m, int g) {
  Grading gr{Homology2Class(g, 0), 0};
  int arrows = 0;
  for (const auto& comp : m.expanded(g)) {
    gr.h += comp.curve.homology();
    arrows += comp.arrows;
  }
  gr.arrows = ((arrows % 2) + 2) % 2;
  gr.h.genus = g;
  return gr;
}

inline Grading grading(const BasisElement& b, int g) {
  auto [h, a] = b.grading(g);
  h.genus = g;
  return {h, a};
}

// ---- dual graph ---------------------------------------------------------------

struct DualVertex {
  int genus = 0;
  int nonsep = 0;
  int lo = 0, hi = 0;  // sausage positions bounding the piece
};

struct DualGraph {
  std::vector<DualVertex> vertices;
  std::vector<std::pair<int, int>> edges;  // consecutive vertices
  std::vector<int> edge_multiplicity;  // parallel copies of the separating class
  int valency(std::size_t v) const {
    int d = 0;
    for (auto [x, y] : edges) d += (x == static_cast<int>(v)) + (y == static_cast<int>(v));
    return d;
  }
  bool linear() const {
    for (std::size_t v = 0; v < vertices.size(); ++v)
      if (valency(v) > 2) return false;
    return true;
  }
};

// handle index of a non-separating curve that lives inside one handle, else 0
inline int handle_of(const CurveCatalogEntry& e) {
  switch (e.kind) {
    case CurveKind::alpha:
    case CurveKind::beta:
    case CurveKind::sausage_e: return e.index;
    case CurveKind::sausage: return e.index % 2 ? (e.index + 1) / 2 : 0;
    default: return 0;
  }
}

inline DualGraph dual_graph(const ArrowedMulticurve& m, int g) {
  std::map<int, int> seps;  // even position -> multiplicity
  std::vector<Component> nonseps;
  for (const auto& comp : m.expanded(g)) {
    if (comp.curve.is_trivial()) continue;
    if (comp.curve.separating())
      seps[comp.curve.index]++;
    else
      nonseps.push_back(comp);
  }
  if (const auto& d = m.sausage_data(); d && d->m > 0) {
    if (d->k % 2) throw InputError("extra separating curves need an even sausage position");
    seps[d->k] += d->m;
  }
  DualGraph gr;
  std::vector<int> cuts{0};
  std::vector<int> mult;
  for (auto [p, n] : seps) {
    cuts.push_back(p);
    mult.push_back(n);
  }
  cuts.push_back(2 * g);
  for (std::size_t v = 0; v + 1 < cuts.size(); ++v) {
    DualVertex dv;
    dv.lo = cuts[v];
    dv.hi = cuts[v + 1];
    dv.genus = (dv.hi - dv.lo) / 2;
    gr.vertices.push_back(dv);
  }
  for (std::size_t v = 0; v + 1 < gr.vertices.size(); ++v) {
    gr.edges.push_back({static_cast<int>(v), static_cast<int>(v + 1)});
    gr.edge_multiplicity.push_back(mult[v]);
  }
  for (const auto& comp : nonseps) {
    int h = handle_of(comp.curve);
    if (h == 0 && !seps.empty())
      throw InputError("curve " + comp.curve.id() + " is not placed relative to the sausage decomposition");
    if (h == 0) {
      gr.vertices[0].nonsep++;
      continue;
    }
    for (auto& v : gr.vertices)
      if (v.genus > 0 && 2 * h - 1 > v.lo && 2 * h - 1 < v.hi) {
        v.nonsep++;
        break;
      }
  }
  if (const auto& d = m.sausage_data(); d && (d->n1 || d->n2)) {
    gr.vertices.front().nonsep += d->n1;
    gr.vertices.back().nonsep += d->n2;
  }
  return gr;
}

enum class RuleHint { two_holed_torus, valency2, sphere };

inline const char* hint_name(RuleHint h) {
  switch (h) {
    case RuleHint::two_holed_torus: return "two_holed_torus";
    case RuleHint::valency2: return "valency2";
    case RuleHint::sphere: return "sphere";
  }
  return "?";
}

inline std::optional<RuleHint> detect_instability(const ArrowedMulticurve& m, int g) {
  DualGraph gr = dual_graph(m, g);
  for (const auto& v : gr.vertices)
    if (v.nonsep >= 2) return RuleHint::two_holed_torus;
  for (std::size_t v = 0; v < gr.vertices.size(); ++v)
    if (gr.valency(v) == 2 && gr.vertices[v].nonsep == 1) return RuleHint::valency2;
  if (!gr.linear()) return RuleHint::sphere;
  return std::nullopt;
}

// ---- expression grammar ----------------------------------------------------------

namespace detail {
inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}
inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}
inline int to_int(const std::string& v, const std::string& field) {
  try {
    std::size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw InputError("field '" + field + "' expects an integer, got '" + v + "'");
  }
}
}  // namespace detail

// component(;component)* with component = kind[:key=val]*
inline ArrowedMulticurve parse_multicurve(const std::string& text, int g) {
  std::vector<Component> comps;
  std::optional<SausageData> sd;
  const std::string body = detail::trim(text);
  if (body.empty() || body == "empty") return ArrowedMulticurve();
  for (const auto& raw : detail::split(body, ';')) {
    const std::string item = detail::trim(raw);
    if (item.empty()) throw InputError("empty component in expression");
    std::string id;
    std::map<std::string, std::string> kv;
    for (const auto& part : detail::split(item, ':')) {
      auto eq = part.find('=');
      if (eq == std::string::npos) {
        id += (id.empty() ? "" : ":") + part;
      } else {
        std::string k = part.substr(0, eq);
        if (kv.count(k)) throw InputError("duplicate key '" + k + "' in component '" + item + "'");
        kv[k] = part.substr(eq + 1);
      }
    }
    auto take = [&](const std::string& k, int dflt) {
      auto it = kv.find(k);
      if (it == kv.end()) return dflt;
      int v = detail::to_int(it->second, k);
      kv.erase(it);
      return v;
    };
    auto take_side = [&]() -> char {
      auto it = kv.find("side");
      if (it == kv.end()) return 0;
      std::string v = it->second;
      kv.erase(it);
      if (v != "l" && v != "r") throw InputError("field 'side' must be l or r");
      return v[0];
    };
    if (id == "D") {
      if (sd) throw InputError("at most one D-family component per monomial");
      SausageData d;
      d.k = take("k", -1);
      if (d.k < 0) throw InputError("D component needs k=");
      d.a = take("a", 0);
      d.b = take("b", 0);
      d.m = take("m", 0);
      d.n1 = take("n1", 0);
      d.n2 = take("n2", 0);
      d.side = take_side();
      if (!kv.empty()) throw InputError("unknown field '" + kv.begin()->first + "' in D component");
      if (d.k > 2 * g) throw InputError("D position k exceeds 2g");
      sd = d;
      continue;
    }
    Component c{CurveCatalogEntry::parse(id, g), take("arrows", 0), take_side()};
    if (!kv.empty()) throw InputError("unknown field '" + kv.begin()->first + "' in component '" + item + "'");
    comps.push_back(c);
  }
  if (sd) {
    if (!comps.empty()) throw InputError("D-family symbols cannot be combined with other components");
    return ArrowedMulticurve::sausage(g, *sd);
  }
  return ArrowedMulticurve(comps);
}

// expr := [coeff *] multicurve (+ [coeff *] multicurve)* where coeff is a rational function in brackets
inline SkeinVector parse_expression(const std::string& text, int g) {
  SkeinVector v;
  for (const auto& raw : detail::split(text, '+')) {
    std::string term = detail::trim(raw);
    RationalFn c(1);
    if (!term.empty() && term[0] == '[') {
      auto close = term.find(']');
      if (close == std::string::npos) throw InputError("unbalanced '[' in coefficient");
      c = RationalFn::parse(term.substr(1, close - 1));
      term = detail::trim(term.substr(close + 1));
      if (!term.empty() && term[0] == '*') term = detail::trim(term.substr(1));
    }
    v.add(parse_multicurve(term, g), c);
  }
  return v;
}

}  // namespace skein
