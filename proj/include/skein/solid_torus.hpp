#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "skein/laurent.hpp"

namespace skein {

// Polynomial in the core z of the solid torus, coefficients in Z[A^{+-1}].
using ZPoly = std::vector<LaurentPoly>;

inline LaurentPoly delta() { return -(LaurentPoly::A(2) + LaurentPoly::A(-2)); }

inline ZPoly zpoly_trim(ZPoly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

inline ZPoly zpoly_mul(const ZPoly& x, const ZPoly& y) {
  if (x.empty() || y.empty()) return {};
  ZPoly r(x.size() + y.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  return zpoly_trim(r);
}

inline ZPoly zpoly_add(const ZPoly& x, const ZPoly& y) {
  ZPoly r(std::max(x.size(), y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += x[i];
  for (std::size_t i = 0; i < y.size(); ++i) r[i] += y[i];
  return zpoly_trim(r);
}

inline ZPoly zpoly_scale(const ZPoly& x, const LaurentPoly& c) {
  ZPoly r = x;
  for (auto& t : r) t *= c;
  return zpoly_trim(r);
}

inline ZPoly zpoly_mirror(const ZPoly& x) {
  ZPoly r;
  for (const auto& t : x) r.push_back(t.mirrored());
  return r;
}

// Trivial curve with n arrows, as a polynomial in z.
inline ZPoly s_poly(int n) {
  static std::mutex mu;
  static std::vector<ZPoly> cache;
  if (n < 0) return zpoly_mirror(s_poly(-n));
  std::lock_guard<std::mutex> lock(mu);
  if (cache.empty()) {
    cache.push_back({delta()});
    cache.push_back({LaurentPoly(), -LaurentPoly::A(3)});
  }
  while (static_cast<int>(cache.size()) <= n) {
    const std::size_t m = cache.size();
    // S_{m} = A z S_{m-1} - A^2 S_{m-2}
    ZPoly zs{LaurentPoly()};
    for (const auto& c : cache[m - 1]) zs.push_back(c * LaurentPoly::A(1));
    cache.push_back(zpoly_add(zs, zpoly_scale(cache[m - 2], -LaurentPoly::A(2))));
  }
  return cache[static_cast<std::size_t>(n)];
}

// Coordinates of a z-polynomial in the triangular family S_0, S_1, ..., S_d.
// Constants go through S_0 = delta * (empty link); 1/delta = -{2}/{4}.
inline std::vector<RationalFn> expand_in_s(const ZPoly& p) {
  ZPoly rest = zpoly_trim(p);
  std::vector<RationalFn> c(rest.empty() ? 1 : rest.size());
  for (int j = static_cast<int>(rest.size()) - 1; j >= 1; --j) {
    if (rest[static_cast<std::size_t>(j)].is_zero()) continue;
    const ZPoly sj = s_poly(j);
    // leading coefficient of S_j is -A^{j+2}
    LaurentPoly q = rest[static_cast<std::size_t>(j)] * LaurentPoly::A(-j - 2) * Q(-1);
    c[static_cast<std::size_t>(j)] = RationalFn(q);
    for (std::size_t i = 0; i < sj.size(); ++i) rest[i] -= sj[i] * q;
    rest = zpoly_trim(rest);
  }
  if (!rest.empty()) c[0] = RationalFn(rest[0], delta());
  return c;
}

// Coefficients t_j with S_{-N} = sum_{j<=N} t_j S_j inside the solid torus.
inline std::vector<RationalFn> negative_expansion(int n) { return expand_in_s(s_poly(-n)); }

inline Q binomial(int n, int k) {
  Q r = 1;
  for (int i = 1; i <= k; ++i) r = r * Q(n - k + i) / Q(i);
  return r;
}

// Linear combination of symbols S_m.
using SCombo = std::map<int, RationalFn>;

inline void scombo_add(SCombo& acc, int m, const RationalFn& c) {
  auto [it, fresh] = acc.emplace(m, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) acc.erase(it);
  }
}

// The pant identity at offset n, as (left - right) over symbols S_m:
// sum_k C(2g,k)(-1)^k A^{2g-2k} S_{n+2k} - sum_k C(2g,k)(-1)^k A^{2k-2g} S_{-n-2k}.
inline SCombo pant_identity(int g, int n) {
  SCombo r;
  for (int k = 0; k <= 2 * g; ++k) {
    Q c = binomial(2 * g, k) * (k % 2 ? -1 : 1);
    scombo_add(r, n + 2 * k, RationalFn(LaurentPoly::monomial(2 * g - 2 * k, c)));
    scombo_add(r, -n - 2 * k, RationalFn(LaurentPoly::monomial(2 * k - 2 * g, -c)));
  }
  return r;
}

// The solid-torus identity S_{-N} - sum_j t_j S_j, over symbols.
inline SCombo negative_identity(int n) {
  SCombo r;
  scombo_add(r, -n, RationalFn(1));
  auto t = negative_expansion(n);
  for (std::size_t j = 0; j < t.size(); ++j)
    if (!t[j].is_zero()) scombo_add(r, static_cast<int>(j), -t[j]);
  return r;
}

struct SCoords {
  std::vector<RationalFn> c;  // coordinates on S_0..S_{2g}
  BraceLedger ledger;
};

// Logs the braces of a coefficient's reduced denominator.
inline void log_denominator(const RationalFn& x, BraceLedger& ledger) {
  if (x.den().is_monomial()) return;
  if (auto ks = covering_braces(x.den(), ledger.kmax()))
    for (int k : *ks) ledger.add(k);
  else
    ledger.add_nonbrace(x.den().str());
}

// Reduction of S_N to S_0..S_{2g}: solid-torus expansion for negative N,
// the pant identity at n = N - 4g for N > 2g (isolating S_N, coefficient A^{-N-2}{N+2-2g}).
class SReducer {
 public:
  explicit SReducer(int g) : g_(g) {}
  int genus() const { return g_; }

  const SCoords& coords(int n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    SCoords out;
    out.ledger.set_kmax(4 * g_ + 4);
    out.c.assign(static_cast<std::size_t>(2 * g_ + 1), RationalFn());
    auto add_symbol = [&](int m, const RationalFn& k) {
      const SCoords& sub = coords(m);
      for (int j = 0; j <= 2 * g_; ++j) out.c[static_cast<std::size_t>(j)] = out.c[static_cast<std::size_t>(j)] + k * sub.c[static_cast<std::size_t>(j)];
      out.ledger.merge(sub.ledger);
    };
    if (n >= 0 && n <= 2 * g_) {
      out.c[static_cast<std::size_t>(n)] = RationalFn(1);
    } else if (n < 0) {
      auto t = negative_expansion(-n);
      if (!t[0].is_zero()) log_denominator(t[0], out.ledger);
      for (std::size_t j = 0; j < t.size(); ++j)
        if (!t[j].is_zero()) add_symbol(static_cast<int>(j), t[j]);
    } else {
      SCombo rel = pant_identity(g_, n - 4 * g_);
      // S_{-n} through the solid torus
      RationalFn wneg = rel[-n];
      rel.erase(-n);
      auto t = negative_expansion(n);
      for (std::size_t j = 0; j < t.size(); ++j)
        if (!t[j].is_zero()) scombo_add(rel, static_cast<int>(j), wneg * t[j]);
      RationalFn lead = rel.at(n);
      rel.erase(n);
      const int k = n + 2 - 2 * g_;
      auto unit = exact_div(lead.num(), brace(k));
      if (!lead.den().is_monomial() || !unit || !unit->is_monomial())
        throw ArithmeticError("pant identity not invertible at S_" + std::to_string(n));
      out.ledger.add(k);
      RationalFn inv = lead.inverse();
      for (const auto& [m, c] : rel) add_symbol(m, -(c * inv));
    }
    return memo_.emplace(n, std::move(out)).first->second;
  }

 private:
  int g_;
  std::map<int, SCoords> memo_;
};

// Same coordinates through one dense elimination over a window of identities.
inline std::vector<RationalFn> s_coords_by_elimination(int g, int n) {
  const int top = std::max(std::abs(n), 2 * g);
  // unknowns S_m for m in [-top, top] outside 0..2g; equations: negative identities and pant identities
  std::vector<SCombo> eqs;
  for (int m = 1; m <= top; ++m) eqs.push_back(negative_identity(m));
  for (int m = 2 * g + 1; m <= top; ++m) eqs.push_back(pant_identity(g, m - 4 * g));
  std::vector<int> unknowns;
  for (int m = -top; m <= top; ++m)
    if (m < 0 || m > 2 * g) unknowns.push_back(m);
  // eliminate unknowns from highest magnitude down
  std::sort(unknowns.begin(), unknowns.end(), [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) > std::abs(b) : a > b; });
  std::vector<bool> used(eqs.size(), false);
  std::map<int, std::size_t> pivot_of;
  for (int u : unknowns) {
    std::size_t piv = eqs.size();
    for (std::size_t e = 0; e < eqs.size(); ++e)
      if (!used[e] && eqs[e].count(u)) {
        piv = e;
        break;
      }
    if (piv == eqs.size()) throw ArithmeticError("elimination window is singular at S_" + std::to_string(u));
    used[piv] = true;
    pivot_of[u] = piv;
    RationalFn inv = eqs[piv].at(u).inverse();
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      if (e == piv || !eqs[e].count(u)) continue;
      RationalFn f = eqs[e].at(u) * inv;
      for (const auto& [m, c] : eqs[piv]) scombo_add(eqs[e], m, -(f * c));
    }
  }
  std::vector<RationalFn> out(static_cast<std::size_t>(2 * g + 1));
  if (n >= 0 && n <= 2 * g) {
    out[static_cast<std::size_t>(n)] = RationalFn(1);
    return out;
  }
  const SCombo& row = eqs[pivot_of.at(n)];
  RationalFn inv = row.at(n).inverse();
  for (const auto& [m, c] : row) {
    if (m == n) continue;
    if (m < 0 || m > 2 * g) throw ArithmeticError("elimination left an unresolved symbol");
    out[static_cast<std::size_t>(m)] = -(c * inv);
  }
  return out;
}

}  // namespace skein
