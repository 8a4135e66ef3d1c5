#pragma once

#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skein/curve_normalizer.hpp"
#include "skein/rewrite_rules.hpp"

namespace skein {

enum class Strategy { leftmost, rightmost };

inline Strategy parse_strategy(const std::string& s) {
  if (s == "leftmost" || s.empty()) return Strategy::leftmost;
  if (s == "rightmost") return Strategy::rightmost;
  throw InputError("field 'strategy' must be leftmost or rightmost, got '" + s + "'");
}
inline const char* strategy_name(Strategy s) { return s == Strategy::leftmost ? "leftmost" : "rightmost"; }

struct BasisCoordinates {
  std::map<BasisElement, RationalFn> coords;
  BraceLedger ledger;

  void add(const BasisElement& b, const RationalFn& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = coords.emplace(b, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) coords.erase(it);
    }
  }
  bool same_coords(const BasisCoordinates& o) const { return coords == o.coords; }
};

struct TraceStep {
  std::string rule;
  std::string anchor;
  std::string effect;
  std::string monomial;
  std::vector<int> ledger_delta;
  std::vector<std::string> nonbrace_delta;
};

class IterationCapExceeded : public std::runtime_error {
 public:
  explicit IterationCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

inline long iteration_cap_from_env() {
  if (const char* v = std::getenv("SKEIN_ITERATION_CAP")) {
    try {
      long x = std::stol(v);
      if (x > 0) return x;
    } catch (...) {
    }
    throw InputError("SKEIN_ITERATION_CAP must be a positive integer");
  }
  return 100000;
}

class Pipeline {
 public:
  explicit Pipeline(int g, Strategy st = Strategy::leftmost, long cap = iteration_cap_from_env())
      : g_(g), st_(st), cap_(cap), red_(g) {
    SurfaceSpec check(g);
    (void)check;
  }
  int genus() const { return g_; }
  Strategy strategy() const { return st_; }

  BasisCoordinates reduce(const SkeinVector& input, std::vector<TraceStep>* trace = nullptr) {
    BasisCoordinates out;
    out.ledger.set_kmax(4 * g_ + 4);
    SkeinVector work = input;
    long steps = 0;
    while (!work.is_zero()) {
      const auto& terms = work.terms();
      auto it = st_ == Strategy::leftmost ? terms.begin() : std::prev(terms.end());
      const ArrowedMulticurve m = it->first;
      const RationalFn c = it->second;
      SkeinVector rest;
      for (const auto& [k, v] : terms)
        if (!(k == m)) rest.add(k, v);
      work = rest;
      if (auto b = as_basis(m)) {
        out.add(*b, c);
        continue;
      }
      if (++steps > cap_) {
        std::ostringstream dump;
        dump << "iteration cap " << cap_ << " exceeded; pending monomials:";
        for (const auto& [k, v] : work.terms()) dump << "\n  " << k.str();
        dump << "\n  " << m.str();
        throw IterationCapExceeded(dump.str());
      }
      RewriteResult r = step(m);
      if (trace) {
        const auto& d = rule_descriptor(r.rule);
        trace->push_back({r.rule, d.anchor, measure_name(r.note), m.str(), r.ledger.sorted(), r.ledger.nonbrace()});
      }
      out.ledger.merge(r.ledger);
      work += r.output.scaled(c);
    }
    return out;
  }

  // one rule application on a non-basis monomial, in phase order
  RewriteResult step(const ArrowedMulticurve& m) {
    if (m.empty()) {
      RewriteResult r;
      r.rule = "eliminate_trivial";
      r.ledger.set_kmax(4 * g_ + 4);
      RationalFn inv = RationalFn(LaurentPoly(1), delta());
      log_denominator(inv, r.ledger);
      r.output.add(trivial_monomial(g_, 0), inv);
      return r;
    }
    if (const auto& sd = m.sausage_data()) {
      if (sd->m != 0) throw UnsupportedMonomial("D-family symbol with m >= 1 extra separating curves is not reduced by the pipeline");
      if (sd->n1 || sd->n2) throw UnsupportedMonomial("D-family symbol with outer curves is not reduced by the pipeline");
      RewriteResult r;
      r.rule = "expand_sausage_symbol";
      r.ledger.set_kmax(4 * g_ + 4);
      r.output.add(ArrowedMulticurve(m.expanded(g_)), RationalFn(1));
      return r;
    }
    std::vector<Component> trivials, nontriv;
    for (const auto& c : m.components()) (c.curve.is_trivial() ? trivials : nontriv).push_back(c);
    for (const auto& c : nontriv)
      if (!c.curve.is_trivial() && !c.curve.nonseparating() && c.curve.kind != CurveKind::sausage)
        throw UnsupportedMonomial("separating component " + c.curve.id() + " is not a sausage curve");
    const bool single_nonsep = nontriv.size() == 1 && nontriv[0].curve.nonseparating();
    auto wild = [](const Component& c) { return c.arrows < 0 || c.arrows > 1; };
    if (st_ == Strategy::rightmost && single_nonsep && wild(nontriv[0])) return reduce_nonsep_arrows(m, g_);
    if (nontriv.size() == 2) {
      if (nontriv[0].curve.nonseparating() && nontriv[1].curve.nonseparating()) return reduce_pair(m, g_);
      throw UnsupportedMonomial("unsupported pair of components " + nontriv[0].curve.id() + ", " + nontriv[1].curve.id());
    }
    if (nontriv.size() > 2) throw UnsupportedMonomial("too many essential components; first is " + nontriv[0].curve.id());
    if (!trivials.empty() && (!nontriv.empty() || trivials.size() > 1)) {
      if (nontriv.size() == 1 && nontriv[0].curve.separating()) {
        for (const auto& t : trivials)
          if (t.arrows != 0) return eliminate_trivial(m, g_);
        return push_out(m, g_, st_ == Strategy::leftmost);
      }
      return eliminate_trivial(m, g_);
    }
    if (nontriv.empty()) {
      const int n = trivials[0].arrows;
      auto hit = arrow_memo_.find(n);
      if (hit == arrow_memo_.end()) hit = arrow_memo_.emplace(n, reduce_trivial_arrows(n, g_, red_, st_ == Strategy::rightmost)).first;
      return hit->second;
    }
    const Component& c = nontriv[0];
    if (c.curve.separating()) return push_out(m, g_, st_ == Strategy::leftmost);
    if (wild(c)) return reduce_nonsep_arrows(m, g_);
    RewriteResult r;
    r.rule = "homology_normalization";
    r.ledger.set_kmax(4 * g_ + 4);
    r.output.add(ArrowedMulticurve({Component{CurveCatalogEntry::f_word(c.curve.homology()), c.arrows, 0}}), RationalFn(1));
    return r;
  }

  std::optional<BasisElement> as_basis(const ArrowedMulticurve& m) const {
    if (m.sausage_data() || m.components().size() != 1) return std::nullopt;
    const Component& c = m.components()[0];
    if (c.curve.is_trivial()) {
      if (c.arrows >= 0 && c.arrows <= 2 * g_) return BasisElement::trivial_arrows(c.arrows);
      return std::nullopt;
    }
    if (c.curve.kind == CurveKind::f_word && (c.arrows == 0 || c.arrows == 1)) return BasisElement::nonsep(c.curve.homology(), c.arrows);
    return std::nullopt;
  }

 private:
  int g_;
  Strategy st_;
  long cap_;
  SReducer red_;
  std::map<int, RewriteResult> arrow_memo_;
};

inline ArrowedMulticurve basis_monomial(const BasisElement& b, int g) {
  if (b.trivial) return trivial_monomial(g, b.k);
  return ArrowedMulticurve({Component{CurveCatalogEntry::f_word(b.h), b.k, 0}});
}

inline BasisCoordinates reduce(const SkeinVector& input, int g, Strategy st = Strategy::leftmost) {
  Pipeline p(g, st);
  return p.reduce(input);
}

inline std::vector<TraceStep> explain(const SkeinVector& input, int g, Strategy st = Strategy::leftmost) {
  Pipeline p(g, st);
  std::vector<TraceStep> t;
  p.reduce(input, &t);
  return t;
}

// Descent order for a sphere-shaped multicurve with n middle curves.
inline std::vector<std::string> sphere_descent_chain(int n) {
  if (n < 1) throw InputError("sphere descent needs n >= 1");
  std::vector<std::string> chain;
  for (int k = n - 1; k >= 0; --k) chain.push_back("(S_" + std::to_string(k) + ")");
  return chain;
}

// ---- random supported inputs ------------------------------------------------------------

inline ArrowedMulticurve random_monomial(std::mt19937_64& rng, int g) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto trivial = [&](int lo, int hi, char side = 0) { return Component{CurveCatalogEntry::trivial(g), uni(lo, hi), side}; };
  auto nonsep_curve = [&]() {
    switch (uni(0, 6)) {
      case 0: return CurveCatalogEntry::alpha(g, uni(1, g));
      case 1: return CurveCatalogEntry::beta(g, uni(1, g));
      case 2: return CurveCatalogEntry::gamma(g, uni(1, g - 1));
      case 3: return CurveCatalogEntry::sausage(g, 2 * uni(1, g) - 1);
      case 4: return CurveCatalogEntry::sausage_e(g, uni(1, g));
      case 5: return CurveCatalogEntry::auxiliary(g, static_cast<AuxTag>(uni(0, 5)), uni(1, g - 1));
      default: {
        std::uint64_t bits = std::uniform_int_distribution<std::uint64_t>(1, (std::uint64_t{1} << (2 * g)) - 1)(rng);
        return CurveCatalogEntry::f_word(Homology2Class(g, bits));
      }
    }
  };
  std::vector<Component> cs;
  switch (uni(0, 5)) {
    case 0:
      for (int k = uni(1, 3); k > 0; --k) cs.push_back(trivial(-(2 * g + 3), 2 * g + 3));
      break;
    case 1:
      cs.push_back({nonsep_curve(), uni(-5, 5), 0});
      for (int k = uni(0, 2); k > 0; --k) cs.push_back(trivial(-3, 3));
      break;
    case 2:
      cs.push_back({CurveCatalogEntry::sausage(g, 2 * uni(1, g - 1)), uni(-4, 4), 0});
      if (uni(0, 1)) cs.push_back(trivial(-2, 2, uni(0, 1) ? 'l' : 'r'));
      break;
    case 3: {
      const int j = uni(1, g);
      cs.push_back({CurveCatalogEntry::sausage(g, 2 * j - 1), uni(-2, 2), 0});
      cs.push_back({CurveCatalogEntry::sausage_e(g, j), uni(-2, 2), 0});
      if (uni(0, 1)) cs.push_back(trivial(0, 0));
      break;
    }
    case 4: {
      const int j = uni(1, g);
      int k = uni(1, g - 1);
      if (k >= j) ++k;
      cs.push_back({uni(0, 1) ? CurveCatalogEntry::sausage(g, 2 * j - 1) : CurveCatalogEntry::sausage_e(g, j), uni(-2, 2), 0});
      cs.push_back({uni(0, 1) ? CurveCatalogEntry::alpha(g, k) : CurveCatalogEntry::beta(g, k), uni(-2, 2), 0});
      break;
    }
    default: {
      SausageData d;
      d.k = uni(0, 2 * g);
      d.a = uni(-2, 2);
      d.b = uni(-2, 2);
      return ArrowedMulticurve::sausage(g, d);
    }
  }
  return ArrowedMulticurve(cs);
}

inline RationalFn random_coefficient(std::mt19937_64& rng) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  LaurentPoly num, den(1);
  for (int k = uni(1, 2); k > 0; --k) num.add_term(uni(-3, 3), Q(uni(1, 5) * (uni(0, 1) ? 1 : -1)));
  if (num.is_zero()) num = LaurentPoly(1);
  if (uni(0, 2) == 0) den = brace(uni(1, 3));
  return RationalFn(num, den);
}

inline SkeinVector random_input(std::mt19937_64& rng, int g) {
  SkeinVector v;
  const int n = std::uniform_int_distribution<int>(1, 3)(rng);
  for (int i = 0; i < n; ++i) v.add(random_monomial(rng, g), random_coefficient(rng));
  if (v.is_zero()) v.add(random_monomial(rng, g), RationalFn(1));
  return v;
}

struct ConfluenceReport {
  int samples = 0;
  int mismatches = 0;
  std::vector<std::string> details;
  bool ok() const { return mismatches == 0; }
};

inline ConfluenceReport verify_confluence(int g, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Pipeline left(g, Strategy::leftmost), right(g, Strategy::rightmost);
  ConfluenceReport rep;
  for (int i = 0; i < samples; ++i) {
    SkeinVector in = random_input(rng, g);
    auto a = left.reduce(in), b = right.reduce(in);
    ++rep.samples;
    if (!a.same_coords(b)) {
      ++rep.mismatches;
      std::string what;
      for (const auto& [m, c] : in.terms()) what += (what.empty() ? "" : " + ") + m.str();
      rep.details.push_back(what);
    }
  }
  return rep;
}

}  // namespace skein
