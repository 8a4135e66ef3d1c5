// Independent oracles shared by the unit tests and the acceptance run.
#pragma once

#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>

#include "skein/rewrite_rules.hpp"

namespace skein::oracle {

// Brute-force Kauffman state sum of the annular closure of s_1 s_2 ... s_{n-1}, framing -A^3.
inline ZPoly brute_s_uncached(int n) {
  if (n == 0) return {LaurentPoly::parse("-A^2 - A^-2")};
  const int crossings = n - 1;
  ZPoly total;
  for (int mask = 0; mask < (1 << crossings); ++mask) {
    // node (level, position); level 0..crossings, positions 0..n-1
    auto id = [&](int lev, int p) { return lev * n + p; };
    const int nodes = (crossings + 1) * n;
    std::vector<int> parent(static_cast<std::size_t>(nodes)), seam(static_cast<std::size_t>(nodes), 0);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    auto join = [&](int a, int b, int s) {
      a = find(a);
      b = find(b);
      if (a != b) {
        parent[a] = b;
        seam[b] += seam[a] + s;
      } else {
        seam[a] += s;
      }
    };
    int ids = 0;
    for (int k = 0; k < crossings; ++k) {
      bool smooth_id = mask >> k & 1;
      ids += smooth_id;
      for (int p = 0; p < n; ++p)
        if (smooth_id || (p != k && p != k + 1)) join(id(k, p), id(k + 1, p), 0);
      if (!smooth_id) {
        join(id(k, k), id(k, k + 1), 0);
        join(id(k + 1, k), id(k + 1, k + 1), 0);
      }
    }
    for (int p = 0; p < n; ++p) join(id(crossings, p), id(0, p), 1);
    int trivial = 0, essential = 0;
    for (int x = 0; x < nodes; ++x)
      if (find(x) == x) (seam[x] % 2 ? essential : trivial)++;
    LaurentPoly c = LaurentPoly::A(ids - (crossings - ids)) * LaurentPoly::parse("-A^3");
    for (int t = 0; t < trivial; ++t) c *= LaurentPoly::parse("-A^2 - A^-2");
    ZPoly term(static_cast<std::size_t>(essential + 1));
    term[static_cast<std::size_t>(essential)] = c;
    total = zpoly_add(total, term);
  }
  return total;
}

inline ZPoly brute_s(int n) {
  static std::map<int, ZPoly> memo;
  auto it = memo.find(n);
  if (it == memo.end()) it = memo.emplace(n, brute_s_uncached(n)).first;
  return it->second;
}

// Independent oracle: substitute A = a, build every identity numerically, solve over Q.
inline std::vector<Q> numeric_coords(int g, int n, const Q& a) {
  const int top = std::max(std::abs(n), 2 * g);
  auto ev = [&](const LaurentPoly& p) { return p.eval(a); };
  // numeric S_m polynomials via brute force, expansion by triangular solve over Q
  auto zvals = [&](int m) {
    ZPoly p = m >= 0 ? brute_s(m) : zpoly_mirror(brute_s(-m));
    std::vector<Q> v;
    for (auto& c : p) v.push_back(ev(c));
    return v;
  };
  const int width = 2 * top + 1;
  auto col = [&](int m) { return m + top; };
  std::vector<std::vector<Q>> rows;
  for (int m = 1; m <= top; ++m) {
    std::vector<Q> r(static_cast<std::size_t>(width), Q(0));
    std::vector<Q> rest = zvals(-m);
    r[static_cast<std::size_t>(col(-m))] = 1;
    for (int j = static_cast<int>(rest.size()) - 1; j >= 0; --j) {
      std::vector<Q> sj = zvals(j);
      Q q = rest[static_cast<std::size_t>(j)] / sj[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < sj.size(); ++i) rest[i] -= q * sj[i];
      r[static_cast<std::size_t>(col(j))] -= q;
    }
    rows.push_back(r);
  }
  for (int N = 2 * g + 1; N <= top; ++N) {
    const int off = N - 4 * g;
    std::vector<Q> r(static_cast<std::size_t>(width), Q(0));
    for (int k = 0; k <= 2 * g; ++k) {
      Q b = 1;
      for (int i = 1; i <= k; ++i) b = b * Q(2 * g - k + i) / Q(i);
      if (k % 2) b = -b;
      r[static_cast<std::size_t>(col(off + 2 * k))] += b * LaurentPoly::qpow(a, 2 * g - 2 * k);
      r[static_cast<std::size_t>(col(-off - 2 * k))] -= b * LaurentPoly::qpow(a, 2 * k - 2 * g);
    }
    rows.push_back(r);
  }
  // unknown columns: everything outside 0..2g; solve rows for them with S_0..S_2g as parameters
  std::vector<int> unk;
  for (int m = -top; m <= top; ++m)
    if (m < 0 || m > 2 * g) unk.push_back(m);
  std::size_t rank = 0;
  for (int u : unk) {
    std::size_t c = static_cast<std::size_t>(col(u)), piv = rows.size();
    for (std::size_t i = rank; i < rows.size(); ++i)
      if (rows[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    Q inv = 1 / rows[rank][c];
    for (auto& x : rows[rank]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][c] == 0) continue;
      Q f = rows[i][c];
      for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  std::vector<Q> out(static_cast<std::size_t>(2 * g + 1), Q(0));
  if (n >= 0 && n <= 2 * g) {
    out[static_cast<std::size_t>(n)] = 1;
    return out;
  }
  for (const auto& r : rows)
    if (r[static_cast<std::size_t>(col(n))] == 1) {
      for (int j = 0; j <= 2 * g; ++j) out[static_cast<std::size_t>(j)] = -r[static_cast<std::size_t>(col(j))];
      return out;
    }
  throw std::runtime_error("oracle could not isolate S_" + std::to_string(n));
}

struct RuleSample {
  ArrowedMulticurve input;
  RewriteResult result;
};

// One application of a randomly chosen monomial rule to a random admissible input.
inline RuleSample random_rule_application(std::mt19937_64& rng, int g, SReducer& red) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RuleSample s;
  switch (uni(0, 7)) {
    case 0:
      s.input = ArrowedMulticurve({{CurveCatalogEntry::alpha(g, uni(1, g)), uni(-4, 4), 0}, {CurveCatalogEntry::trivial(g), uni(-3, 3), 0}});
      s.result = eliminate_trivial(s.input, g);
      break;
    case 1:
      s.input = ArrowedMulticurve({{CurveCatalogEntry::sausage(g, 2 * uni(1, g - 1)), uni(-3, 3), 0},
                                   {CurveCatalogEntry::trivial(g), uni(-3, 3), uni(0, 1) ? 'l' : 'r'}});
      s.result = eliminate_trivial(s.input, g);
      break;
    case 2:
      s.input = ArrowedMulticurve({{CurveCatalogEntry::gamma(g, uni(1, g - 1)), uni(-6, 6), 0}});
      s.result = reduce_nonsep_arrows(s.input, g);
      break;
    case 3: {
      const int n = uni(-3 * g, 3 * g);
      s.input = trivial_monomial(g, n);
      s.result = reduce_trivial_arrows(n, g, red);
      break;
    }
    case 4:
      s.input = ArrowedMulticurve({{CurveCatalogEntry::sausage(g, 2 * uni(1, g - 1)), uni(-3, 3), 0}});
      s.result = push_out(s.input, g, uni(0, 1));
      break;
    case 5: {
      const int j = uni(1, g);
      s.input = ArrowedMulticurve({{CurveCatalogEntry::sausage(g, 2 * j - 1), uni(-2, 2), 0}, {CurveCatalogEntry::sausage_e(g, j), uni(-2, 2), 0}});
      s.result = reduce_pair(s.input, g);
      break;
    }
    case 6: {
      const int i = uni(1, g - 1), j = uni(i + 1, g);
      s.input = ArrowedMulticurve({{CurveCatalogEntry::sausage(g, 2 * i - 1), uni(-2, 2), 0}, {CurveCatalogEntry::beta(g, j), uni(-2, 2), 0}});
      s.result = reduce_pair(s.input, g);
      break;
    }
    default: {
      SausageData d;
      d.k = uni(0, 2 * g - 1);
      d.a = uni(-2, 2);
      d.b = uni(-2, 2);
      d.m = uni(0, 2);
      d.side = uni(0, 1) ? 'l' : 'r';
      s.input = ArrowedMulticurve::sausage(g, d);
      s.result = uni(0, 1) ? apply_pant_step(s.input, g) : apply_leftright(s.input, g);
    }
  }
  return s;
}

}  // namespace skein::oracle
