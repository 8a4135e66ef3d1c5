#pragma once

#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "skein/laurent.hpp"
#include "skein/skein_expr.hpp"
#include "skein/solid_torus.hpp"

namespace skein {

// ---- shift-operator polynomials ------------------------------------------------

// Polynomial in the shift s (one more arrow on each strand of a D-family diagram).
// theta marks operators applied after negating the arrow index of a trivial curve.
struct OperatorPoly {
  std::map<int, RationalFn> c;
  bool theta = false;

  static OperatorPoly constant(const RationalFn& x) {
    OperatorPoly p;
    if (!x.is_zero()) p.c[0] = x;
    return p;
  }
  static OperatorPoly shift(int k = 1) {
    OperatorPoly p;
    p.c[k] = RationalFn(1);
    return p;
  }
  static OperatorPoly linear(const LaurentPoly& s_coeff, const LaurentPoly& const_coeff) {
    OperatorPoly p;
    if (!s_coeff.is_zero()) p.c[1] = RationalFn(s_coeff);
    if (!const_coeff.is_zero()) p.c[0] = RationalFn(const_coeff);
    return p;
  }

  bool is_zero() const { return c.empty(); }
  int degree() const { return c.empty() ? -1 : c.rbegin()->first; }
  RationalFn lead() const { return c.empty() ? RationalFn() : c.rbegin()->second; }
  RationalFn at(int k) const {
    auto it = c.find(k);
    return it == c.end() ? RationalFn() : it->second;
  }
  void add(int k, const RationalFn& x) {
    if (x.is_zero()) return;
    auto [it, fresh] = c.emplace(k, x);
    if (!fresh) {
      it->second = it->second + x;
      if (it->second.is_zero()) c.erase(it);
    }
  }
  friend OperatorPoly operator+(OperatorPoly x, const OperatorPoly& y) {
    for (const auto& [k, v] : y.c) x.add(k, v);
    return x;
  }
  friend OperatorPoly operator-(OperatorPoly x, const OperatorPoly& y) {
    for (const auto& [k, v] : y.c) x.add(k, -v);
    return x;
  }
  friend OperatorPoly operator*(const OperatorPoly& x, const OperatorPoly& y) {
    OperatorPoly r;
    for (const auto& [i, u] : x.c)
      for (const auto& [j, v] : y.c) r.add(i + j, u * v);
    return r;
  }
  OperatorPoly scaled(const RationalFn& x) const {
    OperatorPoly r;
    for (const auto& [k, v] : c) r.add(k, v * x);
    r.theta = theta;
    return r;
  }
  OperatorPoly pow(int n) const {
    OperatorPoly r = constant(RationalFn(1)), b = *this;
    for (; n > 0; n >>= 1) {
      if (n & 1) r = r * b;
      if (n > 1) b = b * b;
    }
    return r;
  }
  friend bool operator==(const OperatorPoly& x, const OperatorPoly& y) { return x.c == y.c && x.theta == y.theta; }

  std::string str() const {
    if (c.empty()) return "0";
    std::string s;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      if (!s.empty()) s += " + ";
      s += "(" + it->second.str() + ")";
      if (it->first) s += "*s^" + std::to_string(it->first);
    }
    if (theta) s += " theta";
    return s;
  }
};

inline void op_divmod(const OperatorPoly& a, const OperatorPoly& b, OperatorPoly& q, OperatorPoly& r) {
  if (b.is_zero()) throw ArithmeticError("operator division by zero");
  q = OperatorPoly();
  r = a;
  const RationalFn inv = b.lead().inverse();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const int k = r.degree() - b.degree();
    const RationalFn f = r.lead() * inv;
    q.add(k, f);
    OperatorPoly t;
    for (const auto& [e, v] : b.c) t.add(e + k, v * f);
    r = r - t;
  }
}

struct BezoutPair {
  OperatorPoly u, v;  // u*a + v*b = 1
};

// Extended Euclid in Q(A)[s]; u has degree below deg b.
inline BezoutPair bezout(const OperatorPoly& a, const OperatorPoly& b) {
  OperatorPoly r0 = a, r1 = b, s0 = OperatorPoly::constant(1), s1, t0, t1 = OperatorPoly::constant(1);
  while (!r1.is_zero()) {
    OperatorPoly q, r;
    op_divmod(r0, r1, q, r);
    OperatorPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
    r0 = r1;
    r1 = r;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  if (r0.degree() != 0) throw ArithmeticError("operators are not coprime");
  const RationalFn inv = r0.lead().inverse();
  return {s0.scaled(inv), t0.scaled(inv)};
}

// Delta_+ with m extra separating curves: A^{4m+1} s - A^{-1}.
inline OperatorPoly delta_plus(int m = 0) { return OperatorPoly::linear(LaurentPoly::A(4 * m + 1), -LaurentPoly::A(-1)); }
inline OperatorPoly delta_minus() { return OperatorPoly::linear(-LaurentPoly::A(-1), LaurentPoly::A(1)); }
// operators for diagrams with outer curves: A^{2p+1} s - A^{-1} and -A^{1-2q} s + A
inline OperatorPoly delta_plus_outer(int p) { return OperatorPoly::linear(LaurentPoly::A(2 * p + 1), -LaurentPoly::A(-1)); }
inline OperatorPoly delta_minus_outer(int q) { return OperatorPoly::linear(-LaurentPoly::A(1 - 2 * q), LaurentPoly::A(1)); }

// Family symbol n -> coefficient after applying op to the diagram with n arrows (s adds 2).
inline std::map<int, RationalFn> apply_shift(const OperatorPoly& op, int n) {
  std::map<int, RationalFn> out;
  for (const auto& [k, v] : op.c) out[n + 2 * k] = v;
  return out;
}

// lcm of coefficient denominators
inline LaurentPoly common_denominator(const std::vector<const OperatorPoly*>& ops) {
  LaurentPoly l(1);
  for (const auto* op : ops)
    for (const auto& [k, v] : op->c) {
      if (v.den().is_monomial()) continue;
      LaurentPoly gg = gcd(l, v.den());
      l = *exact_div(l * v.den(), gg);
    }
  return l;
}

inline void log_operator_denominators(const std::vector<const OperatorPoly*>& ops, BraceLedger& ledger) {
  LaurentPoly d = common_denominator(ops);
  if (d.is_monomial()) return;
  log_denominator(RationalFn(LaurentPoly(1), d), ledger);
}

// ---- rewrite results ----------------------------------------------------------------

enum class MeasureNote { degree_drop, complexity_drop, same_degree_progress };

inline const char* measure_name(MeasureNote m) {
  switch (m) {
    case MeasureNote::degree_drop: return "degree_drop";
    case MeasureNote::complexity_drop: return "complexity_drop";
    case MeasureNote::same_degree_progress: return "same_degree_progress";
  }
  return "?";
}

struct RewriteResult {
  SkeinVector output;
  BraceLedger ledger;
  MeasureNote note = MeasureNote::same_degree_progress;
  std::string rule;
};

struct RuleDescriptor {
  std::string name;
  std::string anchor;
  std::string effect;
};

inline const std::vector<RuleDescriptor>& rule_descriptors() {
  static const std::vector<RuleDescriptor> d = {
      {"eliminate_trivial", "trivial component absorbed by its neighbour (arrow-shift)", "same_degree_progress"},
      {"reduce_nonsep_arrows", "gamma_n = gamma_{n-2}", "same_degree_progress"},
      {"reduce_trivial_arrows", "trivial-arrow system S_n in span(S_0..S_2g)", "same_degree_progress"},
      {"apply_leftright", "side flip of a D-family diagram, A^{2m(a+b)}", "same_degree_progress"},
      {"apply_pant_step", "A D^k_{a,b} - A^-1 D^k_{a+1,b+1} = A D^{k+1}_{a+1,b+1} - A^-1 D^{k+1}_{a,b}", "same_degree_progress"},
      {"push_out", "id_V = (A^-1 Delta_{+,m} + A^{4m+1} Delta_-)/(A^{4m+2} - A^-2)", "degree_drop"},
      {"sausage_bezout", "u Delta_+^K + v Delta_-^{2g-K} = 1 on a separating sausage curve", "degree_drop"},
      {"same_handle_pair", "two-holed torus: pair of non-separating curves in one handle", "complexity_drop"},
      {"different_handle_pair", "two-holed torus: pair of non-separating curves in two handles", "complexity_drop"},
      {"eliminate_sausage_extras", "outer curves removed through Delta_{+,n1-2} and Delta_{-,n2}", "degree_drop"},
      {"apply_derived_relation", "resolved commutator relation, head isolated", "degree_drop"},
      {"homology_normalization", "non-separating curves are equal when their mod-2 classes agree", "same_degree_progress"},
      {"expand_sausage_symbol", "D-family symbol replaced by its components", "same_degree_progress"},
  };
  return d;
}

inline const RuleDescriptor& rule_descriptor(const std::string& name) {
  for (const auto& d : rule_descriptors())
    if (d.name == name) return d;
  throw InputError("unknown rule '" + name + "'");
}

class UnsupportedMonomial : public InputError {
 public:
  using InputError::InputError;
};

// ---- monomial helpers -----------------------------------------------------------------

inline ArrowedMulticurve trivial_monomial(int g, int n) {
  return ArrowedMulticurve({Component{CurveCatalogEntry::trivial(g), n, 0}});
}

inline ArrowedMulticurve with_components(std::vector<Component> cs) { return ArrowedMulticurve(std::move(cs)); }

// z acting on a curve with n arrows from the given side: r gives A^-1 c_{n+1} + A c_{n-1}, l the mirror.
inline std::map<int, RationalFn> beside_step(const std::map<int, RationalFn>& v, char side) {
  const LaurentPoly up = side == 'l' ? LaurentPoly::A(1) : LaurentPoly::A(-1);
  const LaurentPoly down = side == 'l' ? LaurentPoly::A(-1) : LaurentPoly::A(1);
  std::map<int, RationalFn> out;
  auto put = [&](int n, const RationalFn& x) {
    auto [it, fresh] = out.emplace(n, x);
    if (!fresh) {
      it->second = it->second + x;
      if (it->second.is_zero()) out.erase(it);
    }
  };
  for (const auto& [n, x] : v) {
    put(n + 1, x * RationalFn(up));
    put(n - 1, x * RationalFn(down));
  }
  return out;
}

// Trivial curve with k arrows beside a curve carrying n arrows, as a combination of arrow counts on that curve.
inline std::map<int, RationalFn> trivial_beside(int k, int n, char side) {
  const ZPoly p = s_poly(k);
  std::map<int, RationalFn> acc, power{{n, RationalFn(1)}};
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (j > 0) power = beside_step(power, side);
    if (p[j].is_zero()) continue;
    for (const auto& [m, x] : power) {
      RationalFn add = x * RationalFn(p[j]);
      auto [it, fresh] = acc.emplace(m, add);
      if (!fresh) {
        it->second = it->second + add;
        if (it->second.is_zero()) acc.erase(it);
      }
    }
  }
  return acc;
}

// ---- rules -----------------------------------------------------------------------------

inline RewriteResult eliminate_trivial(const ArrowedMulticurve& m, int g) {
  if (m.sausage_data()) throw UnsupportedMonomial("eliminate_trivial does not apply to D-family symbols");
  std::vector<Component> trivials, others;
  for (const auto& c : m.components()) (c.curve.is_trivial() ? trivials : others).push_back(c);
  if (trivials.empty()) throw InputError("eliminate_trivial needs a trivial component");
  RewriteResult r;
  r.rule = "eliminate_trivial";
  r.ledger.set_kmax(4 * g + 4);
  const Component t = trivials.front();
  std::vector<Component> rest_trivials(trivials.begin() + 1, trivials.end());
  auto assemble = [&](std::vector<Component> nontriv) {
    std::vector<Component> all = rest_trivials;
    all.insert(all.end(), nontriv.begin(), nontriv.end());
    return with_components(all);
  };
  if (t.arrows == 0) {
    r.output.add(assemble(others), RationalFn(delta()));
    return r;
  }
  if (others.empty()) {
    if (rest_trivials.empty()) throw InputError("a lone trivial curve with arrows is eliminated by the trivial-arrow system");
    // two trivial curves side by side: product in the solid torus
    const Component u = rest_trivials.front();
    rest_trivials.erase(rest_trivials.begin());
    auto coeffs = expand_in_s(zpoly_mul(s_poly(t.arrows), s_poly(u.arrows)));
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      if (coeffs[j].is_zero()) continue;
      if (j == 0) log_denominator(coeffs[j], r.ledger);
      std::vector<Component> all = rest_trivials;
      all.push_back(Component{CurveCatalogEntry::trivial(g), static_cast<int>(j), 0});
      r.output.add(with_components(all), coeffs[j]);
    }
    return r;
  }
  // beside the first non-trivial component
  if (others.size() > 1)
    throw UnsupportedMonomial("trivial component with arrows next to several curves: its position is ambiguous");
  std::vector<Component> nontriv = others;
  const Component& host = others.front();
  char side = 'r';
  if (host.curve.separating()) {
    if (!t.side) throw UnsupportedMonomial("trivial component with arrows beside separating curve " + host.curve.id() + " needs side=l|r");
    side = t.side;
  }
  for (const auto& [n, x] : trivial_beside(t.arrows, host.arrows, side)) {
    nontriv.front().arrows = n;
    r.output.add(assemble(nontriv), x);
  }
  return r;
}

inline RewriteResult reduce_nonsep_arrows(const ArrowedMulticurve& m, int g) {
  if (m.sausage_data()) throw UnsupportedMonomial("reduce_nonsep_arrows does not apply to D-family symbols");
  RewriteResult r;
  r.rule = "reduce_nonsep_arrows";
  r.ledger.set_kmax(4 * g + 4);
  std::vector<Component> cs = m.components();
  bool changed = false;
  for (auto& c : cs)
    if (c.curve.nonseparating() && (c.arrows < 0 || c.arrows > 1)) {
      c.arrows = ((c.arrows % 2) + 2) % 2;
      changed = true;
    }
  if (changed) r.ledger.add(1);
  r.output.add(with_components(cs), RationalFn(1));
  return r;
}

// S_n in span(S_0..S_2g), through the iterated pant identity or a dense elimination.
inline RewriteResult reduce_trivial_arrows(int n, int g, SReducer& red, bool by_elimination = false) {
  RewriteResult r;
  r.rule = "reduce_trivial_arrows";
  r.ledger.set_kmax(4 * g + 4);
  std::vector<RationalFn> c;
  if (by_elimination) {
    c = s_coords_by_elimination(g, n);
    for (const auto& x : c)
      if (!denominator_covered(x, r.ledger)) log_denominator(x, r.ledger);
  } else {
    const auto& sc = red.coords(n);
    c = sc.c;
    r.ledger.merge(sc.ledger);
  }
  for (std::size_t j = 0; j < c.size(); ++j) r.output.add(trivial_monomial(g, static_cast<int>(j)), c[j]);
  return r;
}

inline RewriteResult apply_leftright(const ArrowedMulticurve& d, int g) {
  const auto& sd = d.sausage_data();
  if (!sd || !sd->side) throw InputError("apply_leftright needs a D-family diagram with side=l|r");
  RewriteResult r;
  r.rule = "apply_leftright";
  r.ledger.set_kmax(4 * g + 4);
  SausageData out = *sd;
  const int e = 2 * sd->m * (sd->a + sd->b);
  out.side = sd->side == 'l' ? 'r' : 'l';
  r.output.add(ArrowedMulticurve::sausage(g, out), RationalFn(LaurentPoly::A(sd->side == 'l' ? e : -e)));
  return r;
}

// The pant identity as a relation (sum of output terms is zero).
inline RewriteResult apply_pant_step(const ArrowedMulticurve& d, int g) {
  const auto& sd = d.sausage_data();
  if (!sd) throw InputError("apply_pant_step needs a D-family diagram");
  if (sd->k < 0 || sd->k >= 2 * g) throw InputError("pant step position k must satisfy 0 <= k < 2g");
  RewriteResult r;
  r.rule = "apply_pant_step";
  r.ledger.set_kmax(4 * g + 4);
  auto sym = [&](int k, int a, int b, char side) {
    SausageData x = *sd;
    x.k = k;
    x.a = a;
    x.b = b;
    x.side = side;
    return ArrowedMulticurve::sausage(g, x);
  };
  const char here = sd->side, there = 0;
  r.output.add(sym(sd->k, sd->a, sd->b, here), RationalFn(LaurentPoly::A(1)));
  r.output.add(sym(sd->k, sd->a + 1, sd->b + 1, here), RationalFn(-LaurentPoly::A(-1)));
  r.output.add(sym(sd->k + 1, sd->a + 1, sd->b + 1, there), RationalFn(-LaurentPoly::A(1)));
  r.output.add(sym(sd->k + 1, sd->a, sd->b, there), RationalFn(LaurentPoly::A(-1)));
  return r;
}

struct PushOutOperators {
  OperatorPoly left;   // applied to the diagram at position 0
  OperatorPoly right;  // applied to the diagram at position N
  BraceLedger ledger;
};

// Expansion of id_V^N for a diagram at position k0: terms carrying Delta_{+,m}^{k0} move left,
// the others carry Delta_-^{N-k0} and move right.
inline PushOutOperators push_out_operators(int g, int k0, int m) {
  const int N = 2 * g;
  if (k0 < 0 || k0 > N) throw InputError("push_out position out of range");
  PushOutOperators out;
  out.ledger.set_kmax(4 * g + 4);
  const OperatorPoly dp = delta_plus(m), dm = delta_minus();
  const LaurentPoly den = LaurentPoly::A(4 * m + 2) - LaurentPoly::A(-2);
  const RationalFn inv_n = RationalFn(LaurentPoly(1), den.pow(static_cast<unsigned>(N)));
  for (int i = 0; i < N; ++i) {
    auto ks = factor_braces(den, out.ledger.kmax());
    for (int k : *ks) out.ledger.add(k);
  }
  for (int j = 0; j <= N; ++j) {
    RationalFn c = RationalFn(binomial(N, j)) * RationalFn(LaurentPoly::A(-j + (4 * m + 1) * (N - j))) * inv_n;
    if (j >= k0)
      out.left = out.left + (dp.pow(j - k0) * dm.pow(N - j)).scaled(c);
    else
      out.right = out.right + (dp.pow(j) * dm.pow(k0 - j)).scaled(c);
  }
  out.right.theta = true;
  return out;
}

// Coordinates of the separating sausage curve at even K with n arrows in the symbols S_j.
inline SCombo separating_in_s(int g, int K, int n, bool push_out_form, BraceLedger& ledger) {
  SCombo out;
  const int N = 2 * g;
  if (K == 0) return {{n, RationalFn(1)}};
  if (K == N) return {{-n, RationalFn(1)}};
  struct Entry {
    OperatorPoly left, right;
    BraceLedger ledger;
  };
  static std::mutex mu;
  static std::map<std::tuple<int, int, bool>, Entry> memo;
  std::unique_lock<std::mutex> lock(mu);
  auto key = std::make_tuple(g, K, push_out_form);
  auto it = memo.find(key);
  if (it == memo.end()) {
    Entry e;
    e.ledger.set_kmax(4 * g + 4);
    if (!push_out_form) {
      BezoutPair b = bezout(delta_plus().pow(K), delta_minus().pow(N - K));
      e.left = b.u * delta_minus().pow(K);
      e.right = b.v * delta_plus().pow(N - K);
      log_operator_denominators({&e.left, &e.right}, e.ledger);
    } else {
      PushOutOperators p = push_out_operators(g, K, 0);
      e.left = p.left * delta_minus().pow(K);
      e.right = p.right * delta_plus().pow(N - K);
      e.ledger.merge(p.ledger);
    }
    it = memo.emplace(key, std::move(e)).first;
  }
  const Entry& e = it->second;
  lock.unlock();
  ledger.merge(e.ledger);
  const OperatorPoly& left = e.left;
  const OperatorPoly& right = e.right;
  for (const auto& [m, x] : apply_shift(left, n)) scombo_add(out, m, x);
  for (const auto& [m, x] : apply_shift(right, n)) scombo_add(out, -m, x);
  return out;
}

// Rewrites a separating sausage curve (plus arrowless trivials) to trivial symbols.
inline RewriteResult push_out(const ArrowedMulticurve& d, int g, bool bezout_form = false) {
  int K = -1, n = 0;
  if (const auto& sd = d.sausage_data()) {
    if (sd->m != 0) throw UnsupportedMonomial("push_out with extra separating curves (m >= 1) is only available at the operator level");
    if (sd->k % 2) throw InputError("push_out needs an even sausage position");
    K = sd->k;
    n = sd->a + sd->b;
  } else {
    for (const auto& c : d.components()) {
      if (c.curve.kind == CurveKind::sausage && c.curve.separating()) {
        if (K >= 0) throw UnsupportedMonomial("push_out handles one separating curve");
        K = c.curve.index;
        n = c.arrows;
      } else if (!c.curve.is_trivial() || c.arrows != 0) {
        throw UnsupportedMonomial("push_out: unexpected component " + c.curve.id());
      }
    }
  }
  if (K < 0) throw InputError("push_out needs a separating sausage curve");
  RewriteResult r;
  r.rule = bezout_form ? "sausage_bezout" : "push_out";
  r.note = MeasureNote::degree_drop;
  r.ledger.set_kmax(4 * g + 4);
  RationalFn extra(1);
  for (const auto& c : d.components())
    if (c.curve.is_trivial()) extra = extra * RationalFn(delta());
  for (const auto& [m, x] : separating_in_s(g, K, n, !bezout_form, r.ledger)) r.output.add(trivial_monomial(g, m), x * extra);
  return r;
}

// Pair of non-separating sausage curves. Same handle: c_{2j-1} with a arrows and e_j with b arrows,
// x_n = (A^2 mu_{n+2} - mu_n + lambda_n - A^-2 lambda_{n+2})/{2} over the neighbouring separating curves.
// Different handles: the connected sum, a single curve in the sum class.
inline RewriteResult reduce_pair(const ArrowedMulticurve& d, int g) {
  std::vector<Component> cs = d.expanded(g), pair, trivials;
  for (const auto& c : cs) (c.curve.is_trivial() ? trivials : pair).push_back(c);
  if (pair.size() != 2 || !pair[0].curve.nonseparating() || !pair[1].curve.nonseparating())
    throw InputError("reduce_pair needs two non-separating curves");
  RationalFn extra(1);
  for (const auto& t : trivials) {
    if (t.arrows != 0) throw UnsupportedMonomial("trivial component with arrows next to a pair of curves: its position is ambiguous");
    extra = extra * RationalFn(delta());
  }
  const int h0 = handle_of(pair[0].curve), h1 = handle_of(pair[1].curve);
  if (!h0 || !h1) throw UnsupportedMonomial("pair of curves " + pair[0].curve.id() + ", " + pair[1].curve.id() + " is not in sausage position");
  RewriteResult r;
  r.ledger.set_kmax(4 * g + 4);
  r.note = MeasureNote::complexity_drop;
  r.ledger.add(2);
  const int n = pair[0].arrows + pair[1].arrows;
  if (h0 != h1) {
    r.rule = "different_handle_pair";
    Homology2Class h = pair[0].curve.homology() + pair[1].curve.homology();
    r.output.add(with_components({Component{CurveCatalogEntry::f_word(h), n, 0}}), extra);
    return r;
  }
  auto kinds = std::make_pair(pair[0].curve.kind, pair[1].curve.kind);
  const bool sausage_pair = (kinds.first == CurveKind::sausage && kinds.second == CurveKind::sausage_e) ||
                            (kinds.first == CurveKind::sausage_e && kinds.second == CurveKind::sausage);
  if (!sausage_pair) throw UnsupportedMonomial("same-handle pair must be sausage:2j-1 with sausage_e:j");
  r.rule = "same_handle_pair";
  const int j = h0;
  const RationalFn inv2 = RationalFn(LaurentPoly(1), brace(2));
  auto sep = [&](int pos, int arrows, const RationalFn& c) {
    std::vector<Component> v;
    if (pos == 0)
      v.push_back({CurveCatalogEntry::trivial(g), arrows, 0});
    else if (pos == 2 * g)
      v.push_back({CurveCatalogEntry::trivial(g), -arrows, 0});
    else
      v.push_back({CurveCatalogEntry::sausage(g, pos), arrows, 0});
    r.output.add(with_components(v), c * inv2 * extra);
  };
  sep(2 * j, n + 2, RationalFn(LaurentPoly::A(2)));
  sep(2 * j, n, RationalFn(-1));
  sep(2 * j - 2, n, RationalFn(1));
  sep(2 * j - 2, n + 2, RationalFn(-LaurentPoly::A(-2)));
  return r;
}

struct ExtraCurveFactors {
  LaurentPoly first, second;  // A^{2n1-2} - A^-2 and A^{2n1-2} - A^{-2-2n2}
  BraceLedger ledger;
  bool routed_to_pair = false;
};

// Denominators met when removing n1 and n2 outer curves; n1 = n2 = 1 goes to the pair rule.
inline ExtraCurveFactors eliminate_sausage_extras(int n1, int n2, int g) {
  if (n1 < 0 || n2 < 0 || n1 + n2 < 2) throw InputError("eliminate_sausage_extras needs n1 + n2 >= 2");
  ExtraCurveFactors f;
  f.ledger.set_kmax(4 * g + 4);
  if (n1 == 1 && n2 == 1) {
    f.routed_to_pair = true;
    f.ledger.add(2);
    return f;
  }
  f.first = LaurentPoly::A(2 * n1 - 2) - LaurentPoly::A(-2);
  f.second = LaurentPoly::A(2 * n1 - 2) - LaurentPoly::A(-2 - 2 * n2);
  for (const LaurentPoly* p : {&f.first, &f.second}) {
    if (p->is_zero()) throw ArithmeticError("outer-curve factor vanishes");
    if (p->is_monomial()) continue;
    auto ks = factor_braces(*p, f.ledger.kmax());
    if (!ks) throw ArithmeticError("outer-curve factor is not a brace product");
    for (int k : *ks) f.ledger.add(k);
  }
  return f;
}

// Linear identity sum_key c_key [key] = 0 with a designated head.
struct Relation {
  std::map<std::string, RationalFn> terms;
  std::string head;
  int max_degree = 0;
  std::string derivation;
};

// head = -(1/c_head) * sum of the other terms; the head coefficient must be unit * prod {k}.
inline std::map<std::string, RationalFn> apply_derived_relation(const Relation& rel, BraceLedger& ledger) {
  auto it = rel.terms.find(rel.head);
  if (it == rel.terms.end() || it->second.is_zero()) throw ArithmeticError("relation has no head term");
  const RationalFn& c = it->second;
  if (!c.num().is_monomial()) {
    auto ks = factor_braces(c.num(), std::max(ledger.kmax(), c.num().span()));
    if (!ks) throw ArithmeticError("relation not invertible over ledger ring");
    for (int k : *ks) ledger.add(k);
  }
  const RationalFn inv = c.inverse();
  std::map<std::string, RationalFn> out;
  for (const auto& [k, v] : rel.terms)
    if (k != rel.head) out[k] = -(v * inv);
  return out;
}

}  // namespace skein
