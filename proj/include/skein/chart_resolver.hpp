#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skein/rewrite_rules.hpp"

namespace skein {

// ---- planar geometry --------------------------------------------------------------------

struct ChartPoint {
  Q x, y;
};
inline ChartPoint operator+(const ChartPoint& a, const ChartPoint& b) { return {Q(a.x + b.x), Q(a.y + b.y)}; }
inline ChartPoint operator-(const ChartPoint& a, const ChartPoint& b) { return {Q(a.x - b.x), Q(a.y - b.y)}; }
inline bool operator==(const ChartPoint& a, const ChartPoint& b) { return a.x == b.x && a.y == b.y; }
inline Q cross(const ChartPoint& a, const ChartPoint& b) { return Q(a.x * b.y - a.y * b.x); }
inline ChartPoint lerp(const ChartPoint& a, const ChartPoint& b, const Q& t) {
  return {Q(a.x + t * (b.x - a.x)), Q(a.y + t * (b.y - a.y))};
}
inline std::string point_str(const ChartPoint& p) { return "(" + detail::qstr(p.x) + "," + detail::qstr(p.y) + ")"; }

enum class HoleType { boundary, nonsep, separating, disk, handle };

inline const char* hole_type_name(HoleType t) {
  switch (t) {
    case HoleType::boundary: return "boundary";
    case HoleType::nonsep: return "nonsep";
    case HoleType::separating: return "separating";
    case HoleType::disk: return "disk";
    default: return "handle";
  }
}
inline HoleType parse_hole_type(const std::string& s) {
  for (HoleType t : {HoleType::boundary, HoleType::nonsep, HoleType::separating, HoleType::disk, HoleType::handle})
    if (s == hole_type_name(t)) return t;
  throw InputError("field 'type' of a hole must be boundary, nonsep, separating, disk or handle, got '" + s + "'");
}

// A hole of the chart. Holes sharing a group are joined through the rest of the surface;
// a disk hole is capped off.  The boundary hole is the outer boundary of a disk chart.
struct ChartHole {
  std::string label;
  HoleType type = HoleType::separating;
  int group = 0;
  std::optional<ChartPoint> at;
};

// Closed polyline.  On a torus chart the curve closes up at pts[0] + shift, shift a lattice vector.
struct ChartCurve {
  std::string name;
  std::vector<ChartPoint> pts;
  ChartPoint shift;
  int level = 0;             // stacking height, higher passes over
  std::map<int, int> arrows;  // segment -> arrows at its midpoint, counted along the curve
};

struct ChartSpec {
  std::string name;
  bool torus = false;
  Q width = 0, height = 0;
  std::vector<ChartHole> holes;
  std::vector<ChartCurve> curves;
};

// ---- combinatorial diagram --------------------------------------------------------------

struct ChartLetter {
  int hole;
  int exp;
  bool operator==(const ChartLetter&) const = default;
  auto operator<=>(const ChartLetter&) const = default;
};

struct ChartArc {
  int curve = 0;
  int from = -1, to = -1;  // crossings; -1 for a curve without crossings
  int arrows = 0;
  std::vector<ChartPoint> pts;  // in the lift of its curve
  std::vector<ChartLetter> letters;
  Q area2 = 0;  // sum of cross(p_i, p_{i+1})
  ChartPoint disp() const { return pts.back() - pts.front(); }
};

// half[k] = 2*arc + (0 if the arc leaves here, 1 if it arrives); ccw from the outgoing over-strand
struct ChartCrossing {
  ChartPoint at;
  int over = 0, under = 0;
  std::array<int, 4> half{};
};

struct ChartDiagram {
  ChartSpec spec;
  std::vector<ChartCrossing> crossings;
  std::vector<ChartArc> arcs;
  std::vector<ChartArc> free_loops;
  int faces = 0;
  int components = 0;

  int euler() const { return static_cast<int>(crossings.size()) - static_cast<int>(arcs.size()) + faces; }
};

inline constexpr int kMaxChartCrossings = 16;

namespace detail {

struct SegHit {
  bool proper = false, degenerate = false;
  Q t, u;
};

inline SegHit seg_intersect(const ChartPoint& p, const ChartPoint& q, const ChartPoint& r, const ChartPoint& s) {
  SegHit h;
  const ChartPoint d1 = q - p, d2 = s - r, rp = r - p;
  const Q den = cross(d1, d2);
  if (den == 0) {
    if (cross(rp, d1) != 0) return h;
    // collinear: overlapping if projections intersect
    const Q dd = Q(d1.x * d1.x + d1.y * d1.y);
    auto proj = [&](const ChartPoint& z) { return Q(((z.x - p.x) * d1.x + (z.y - p.y) * d1.y) / dd); };
    Q a = proj(r), b = proj(s);
    if (a > b) std::swap(a, b);
    if (b >= 0 && a <= 1) h.degenerate = true;
    return h;
  }
  h.t = Q(cross(rp, d2) / den);
  h.u = Q(cross(rp, d1) / den);
  if (h.t > 0 && h.t < 1 && h.u > 0 && h.u < 1) {
    h.proper = true;
  } else if (h.t >= 0 && h.t <= 1 && h.u >= 0 && h.u <= 1) {
    h.degenerate = true;
  }
  return h;
}

inline bool on_segment(const ChartPoint& z, const ChartPoint& a, const ChartPoint& b) {
  if (cross(b - a, z - a) != 0) return false;
  return std::min(a.x, b.x) <= z.x && z.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= z.y && z.y <= std::max(a.y, b.y);
}

inline long floor_q(const Q& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f.get_si();
}

// signed crossings of the upward ray from c by segment a->b; right-to-left counts +1
inline int ray_crossing(const ChartPoint& a, const ChartPoint& b, const ChartPoint& c, Q* param) {
  const bool up = a.x <= c.x && c.x < b.x;
  const bool down = b.x <= c.x && c.x < a.x;
  if (!up && !down) return 0;
  const Q t = Q((c.x - a.x) / (b.x - a.x));
  const Q y = Q(a.y + t * (b.y - a.y));
  if (y <= c.y) return 0;
  if (param) *param = t;
  return up ? -1 : +1;
}

inline int winding(const std::vector<ChartPoint>& poly, const ChartPoint& c) {
  int w = 0;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) w += ray_crossing(poly[i], poly[i + 1], c, nullptr);
  return w;
}

struct Bbox {
  Q x0, x1, y0, y1;
};
inline Bbox bbox(const std::vector<ChartPoint>& pts) {
  Bbox b{pts[0].x, pts[0].x, pts[0].y, pts[0].y};
  for (const auto& p : pts) {
    b.x0 = std::min(b.x0, p.x);
    b.x1 = std::max(b.x1, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  }
  int find(int x) {
    while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) { p[static_cast<std::size_t>(find(a))] = find(b); }
};

inline std::vector<ChartLetter> ray_letters(const std::vector<ChartPoint>& pts, const ChartSpec& spec) {
  std::vector<ChartLetter> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    std::vector<std::pair<Q, ChartLetter>> hits;
    for (std::size_t h = 0; h < spec.holes.size(); ++h) {
      if (!spec.holes[h].at) continue;
      Q t;
      if (int e = ray_crossing(pts[i], pts[i + 1], *spec.holes[h].at, &t)) hits.push_back({t, ChartLetter{static_cast<int>(h), e}});
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [t, l] : hits) out.push_back(l);
  }
  return out;
}

inline Q polyline_area2(const std::vector<ChartPoint>& pts) {
  Q a = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) a += cross(pts[i], pts[i + 1]);
  return a;
}

}  // namespace detail

inline void validate_chart_spec(const ChartSpec& s) {
  if (s.curves.empty()) throw InputError("field 'curves' of a chart must not be empty");
  if (s.torus && (s.width <= 0 || s.height <= 0)) throw InputError("fields 'width' and 'height' of a torus chart must be positive");
  int boundary = 0;
  std::map<int, std::vector<HoleType>> groups;
  std::set<std::string> labels;
  for (const auto& h : s.holes) {
    if (!labels.insert(h.label).second) throw InputError("duplicate hole label '" + h.label + "'");
    if (h.type == HoleType::boundary) {
      ++boundary;
      if (h.at) throw InputError("boundary hole '" + h.label + "' must not carry a position");
    } else if (!h.at) {
      throw InputError("field 'at' missing for hole '" + h.label + "'");
    }
    groups[h.group].push_back(h.type);
  }
  if (s.torus && boundary) throw InputError("a torus chart has no boundary hole");
  if (!s.torus && boundary != 1) throw InputError("a disk chart needs exactly one boundary hole");
  for (const auto& [g, ts] : groups)
    for (HoleType t : ts) {
      if ((t == HoleType::nonsep || t == HoleType::handle) && ts.size() < 2)
        throw InputError("group " + std::to_string(g) + " holds a non-separating hole with no partner");
      if ((t == HoleType::separating || t == HoleType::disk) && ts.size() != 1)
        throw InputError("group " + std::to_string(g) + " mixes a separating or disk hole with others");
    }
  for (const auto& c : s.curves) {
    if (c.pts.empty()) throw InputError("curve '" + c.name + "' has no points");
    if (s.torus) {
      const Q px = Q(c.shift.x / s.width), py = Q(c.shift.y / s.height);
      if (px.get_den() != 1 || py.get_den() != 1) throw InputError("field 'shift' of curve '" + c.name + "' is not a lattice vector");
      if (c.pts.size() < 2 && c.shift.x == 0 && c.shift.y == 0) throw InputError("curve '" + c.name + "' is degenerate");
    } else {
      if (c.shift.x != 0 || c.shift.y != 0) throw InputError("field 'shift' of curve '" + c.name + "' must be zero on a disk chart");
      if (c.pts.size() < 3) throw InputError("curve '" + c.name + "' needs at least three points");
    }
    for (const auto& [seg, n] : c.arrows)
      if (seg < 0 || seg >= static_cast<int>(c.pts.size())) throw InputError("arrow segment out of range on curve '" + c.name + "'");
  }
}

inline ChartDiagram build_chart(const ChartSpec& spec) {
  validate_chart_spec(spec);
  ChartDiagram d;
  d.spec = spec;
  const auto& curves = spec.curves;
  const int nc = static_cast<int>(curves.size());

  // closed lifted vertex list per curve: P_0..P_k with P_k = P_0 + shift
  std::vector<std::vector<ChartPoint>> P(static_cast<std::size_t>(nc));
  for (int i = 0; i < nc; ++i) {
    P[static_cast<std::size_t>(i)] = curves[static_cast<std::size_t>(i)].pts;
    P[static_cast<std::size_t>(i)].push_back(curves[static_cast<std::size_t>(i)].pts[0] + curves[static_cast<std::size_t>(i)].shift);
  }
  auto vertex = [&](int c, long s) {
    const auto& v = P[static_cast<std::size_t>(c)];
    const long k = static_cast<long>(v.size()) - 1;
    const long r = ((s % k) + k) % k, w = (s - r) / k;
    ChartPoint p = v[static_cast<std::size_t>(r)];
    const auto& sh = curves[static_cast<std::size_t>(c)].shift;
    return ChartPoint{Q(p.x + w * sh.x), Q(p.y + w * sh.y)};
  };
  auto nseg = [&](int c) { return static_cast<int>(P[static_cast<std::size_t>(c)].size()) - 1; };

  // lattice translations bringing segment bboxes together
  auto translations = [&](const ChartPoint& a0, const ChartPoint& a1, const ChartPoint& b0, const ChartPoint& b1) {
    std::vector<ChartPoint> out;
    if (!spec.torus) {
      out.push_back({0, 0});
      return out;
    }
    auto A = detail::bbox({a0, a1}), B = detail::bbox({b0, b1});
    const long i0 = detail::floor_q(Q((A.x0 - B.x1) / spec.width)) - 1, i1 = detail::floor_q(Q((A.x1 - B.x0) / spec.width)) + 1;
    const long j0 = detail::floor_q(Q((A.y0 - B.y1) / spec.height)) - 1, j1 = detail::floor_q(Q((A.y1 - B.y0) / spec.height)) + 1;
    for (long i = i0; i <= i1; ++i)
      for (long j = j0; j <= j1; ++j) out.push_back({Q(i * spec.width), Q(j * spec.height)});
    return out;
  };

  struct Event {
    int seg;
    Q t;
    int x;
  };
  std::vector<std::vector<Event>> ev(static_cast<std::size_t>(nc));
  struct Raw {
    ChartPoint at;
    int ci, cj, si, sj;
  };
  std::vector<Raw> raw;
  for (int i = 0; i < nc; ++i)
    for (int j = i; j < nc; ++j)
      for (int a = 0; a < nseg(i); ++a)
        for (int b = 0; b < nseg(j); ++b) {
          const ChartPoint p = vertex(i, a), q = vertex(i, a + 1), r0 = vertex(j, b), s0 = vertex(j, b + 1);
          for (const auto& tau : translations(p, q, r0, s0)) {
            const bool same = i == j;
            const bool zero = tau.x == 0 && tau.y == 0;
            if (same && zero && a == b) continue;
            if (same && zero && (std::abs(a - b) == 1 || std::abs(a - b) == nseg(i) - 1)) {
              if (nseg(i) > 2 || !spec.torus) continue;
            }
            const auto h = detail::seg_intersect(p, q, r0 + tau, s0 + tau);
            if (same && h.degenerate) {
              // shared endpoints of consecutive segments (also across the closing translation)
              const ChartPoint r = r0 + tau, s = s0 + tau;
              if (q == r || p == s) continue;
            }
            if (h.degenerate)
              throw InputError("curves '" + curves[static_cast<std::size_t>(i)].name + "' and '" + curves[static_cast<std::size_t>(j)].name +
                               "' meet in a non-transverse point");
            if (!h.proper) continue;
            if (same) throw InputError("curve '" + curves[static_cast<std::size_t>(i)].name + "' is not simple");
            const int x = static_cast<int>(raw.size());
            raw.push_back({lerp(p, q, h.t), i, j, a, b});
            ev[static_cast<std::size_t>(i)].push_back({a, h.t, x});
            ev[static_cast<std::size_t>(j)].push_back({b, h.u, x});
          }
        }
  if (static_cast<int>(raw.size()) > kMaxChartCrossings)
    throw InputError("chart has " + std::to_string(raw.size()) + " crossings; at most " + std::to_string(kMaxChartCrossings) + " are resolved");
  for (auto& e : ev) std::sort(e.begin(), e.end(), [](const Event& a, const Event& b) { return a.seg != b.seg ? a.seg < b.seg : a.t < b.t; });

  // arcs between consecutive events along each curve
  std::map<std::pair<int, int>, int> out_arc, in_arc;  // (crossing, curve) -> arc
  for (int c = 0; c < nc; ++c) {
    const auto& E = ev[static_cast<std::size_t>(c)];
    const auto& cv = curves[static_cast<std::size_t>(c)];
    const int k = nseg(c);
    auto arrows_between = [&](long s0, const Q& t0, long s1, const Q& t1) {
      int n = 0;
      for (long s = s0; s <= s1; ++s) {
        auto it = cv.arrows.find(static_cast<int>(((s % k) + k) % k));
        if (it == cv.arrows.end()) continue;
        const Q half(1, 2);
        const bool after = s > s0 || t0 < half;
        const bool before = s < s1 || half < t1;
        if ((s == s0 && t0 == half) || (s == s1 && t1 == half))
          throw InputError("an arrow on curve '" + cv.name + "' sits on a crossing");
        if (after && before) n += it->second;
      }
      return n;
    };
    if (E.empty()) {
      ChartArc a;
      a.curve = c;
      for (long s = 0; s <= k; ++s) a.pts.push_back(vertex(c, s));
      a.arrows = arrows_between(0, Q(0), k - 1, Q(1));
      d.free_loops.push_back(a);
      continue;
    }
    for (std::size_t m = 0; m < E.size(); ++m) {
      const Event& s = E[m];
      const Event& t = E[(m + 1) % E.size()];
      long endseg = t.seg;
      if (m + 1 == E.size()) endseg += k;
      ChartArc a;
      a.curve = c;
      a.from = s.x;
      a.to = t.x;
      a.pts.push_back(lerp(vertex(c, s.seg), vertex(c, s.seg + 1), s.t));
      for (long v = s.seg + 1; v <= endseg; ++v) a.pts.push_back(vertex(c, v));
      a.pts.push_back(lerp(vertex(c, endseg), vertex(c, endseg + 1), t.t));
      a.arrows = arrows_between(s.seg, s.t, endseg, t.t);
      const int id = static_cast<int>(d.arcs.size());
      d.arcs.push_back(a);
      out_arc[{s.x, c}] = id;
      in_arc[{t.x, c}] = id;
    }
  }

  // rotation system
  for (std::size_t x = 0; x < raw.size(); ++x) {
    const Raw& r = raw[x];
    const auto& ci = curves[static_cast<std::size_t>(r.ci)];
    const auto& cj = curves[static_cast<std::size_t>(r.cj)];
    if (ci.level == cj.level) throw InputError("curves '" + ci.name + "' and '" + cj.name + "' cross at equal level");
    const bool iover = ci.level > cj.level;
    const int o = iover ? r.ci : r.cj, u = iover ? r.cj : r.ci;
    const int so = iover ? r.si : r.sj, su = iover ? r.sj : r.si;
    const ChartPoint dout = vertex(o, so + 1) - vertex(o, so), dun = vertex(u, su + 1) - vertex(u, su);
    const int xi = static_cast<int>(x);
    const int Oout = 2 * out_arc.at({xi, o}), Oin = 2 * in_arc.at({xi, o}) + 1;
    const int Uout = 2 * out_arc.at({xi, u}), Uin = 2 * in_arc.at({xi, u}) + 1;
    ChartCrossing cr;
    cr.at = r.at;
    cr.over = o;
    cr.under = u;
    if (cross(dout, dun) > 0)
      cr.half = {Oout, Uout, Oin, Uin};
    else
      cr.half = {Oout, Uin, Oin, Uout};
    d.crossings.push_back(cr);
  }

  // faces of the rotation system
  std::map<int, std::pair<int, int>> pos;  // half-edge -> (crossing, slot)
  for (std::size_t x = 0; x < d.crossings.size(); ++x)
    for (int k = 0; k < 4; ++k) pos[d.crossings[x].half[static_cast<std::size_t>(k)]] = {static_cast<int>(x), k};
  std::set<std::pair<int, int>> seen;
  for (std::size_t e = 0; e < d.arcs.size(); ++e)
    for (int dir = 0; dir < 2; ++dir) {
      std::pair<int, int> cur{static_cast<int>(e), dir};
      if (seen.count(cur)) continue;
      ++d.faces;
      while (!seen.count(cur)) {
        seen.insert(cur);
        const int hin = 2 * cur.first + (cur.second == 0 ? 1 : 0);
        const auto [x, k] = pos.at(hin);
        const int nh = d.crossings[static_cast<std::size_t>(x)].half[static_cast<std::size_t>((k + 3) % 4)];
        cur = {nh / 2, nh % 2 == 0 ? 0 : 1};
      }
    }
  detail::UnionFind uf(static_cast<int>(d.crossings.size()));
  for (const auto& a : d.arcs) uf.unite(a.from, a.to);
  std::set<int> comps;
  for (int x = 0; x < static_cast<int>(d.crossings.size()); ++x) comps.insert(uf.find(x));
  d.components = static_cast<int>(comps.size());
  if (!spec.torus && !d.crossings.empty() && d.euler() != 1 + d.components)
    throw InputError("rotation system is not planar: V - E + F = " + std::to_string(d.euler()));

  // holes must avoid the curves, and rays must avoid crossings and each other
  for (const auto& h : spec.holes) {
    if (!h.at) continue;
    for (int c = 0; c < nc; ++c)
      for (int s = 0; s < nseg(c); ++s)
        for (const auto& tau : translations(vertex(c, s), vertex(c, s + 1), *h.at, *h.at))
          if (detail::on_segment(*h.at - tau, vertex(c, s), vertex(c, s + 1))) throw InputError("hole '" + h.label + "' lies on a curve");
    if (!spec.torus) {
      for (const auto& cr : d.crossings)
        if (cr.at.x == h.at->x) throw InputError("hole '" + h.label + "' is vertically aligned with a crossing");
      for (const auto& o : spec.holes)
        if (&o != &h && o.at && o.at->x == h.at->x) throw InputError("holes '" + h.label + "' and '" + o.label + "' are vertically aligned");
    }
  }

  auto finish = [&](ChartArc& a) {
    a.area2 = detail::polyline_area2(a.pts);
    if (!spec.torus) a.letters = detail::ray_letters(a.pts, spec);
  };
  for (auto& a : d.arcs) finish(a);
  for (auto& a : d.free_loops) finish(a);
  return d;
}

// ---- resolutions ------------------------------------------------------------------------

enum class LoopKind { trivial, nonsep, separating };
inline char loop_kind_char(LoopKind k) { return k == LoopKind::trivial ? 'T' : k == LoopKind::nonsep ? 'N' : 'S'; }
inline int loop_degree(LoopKind k) { return k == LoopKind::trivial ? 0 : k == LoopKind::nonsep ? 1 : 2; }

struct ChartLoop {
  LoopKind kind = LoopKind::trivial;
  std::vector<int> enclosed;  // holes on the planar side
  int arrows = 0;              // along the canonical orientation
  long p = 0, q = 0;           // torus class
  std::vector<ChartLetter> word;  // canonical, capped holes removed
  std::vector<int> homology;      // mod 2: torus a, torus b, then one entry per non-separating group
  std::string key;
};

struct ResolutionTerm {
  std::uint32_t mask = 0;
  int plus = 0, minus = 0;
  LaurentPoly coefficient;
  std::vector<ChartLoop> loops;

  int degree() const {
    int d = 0;
    for (const auto& l : loops) d += loop_degree(l.kind);
    return d;
  }
  std::string multicurve() const {
    std::vector<std::string> ks;
    for (const auto& l : loops) ks.push_back(l.key);
    std::sort(ks.begin(), ks.end());
    std::string s;
    for (const auto& k : ks) s += (s.empty() ? "" : " | ") + k;
    return s.empty() ? "empty" : s;
  }
  std::vector<int> homology() const {
    std::vector<int> h;
    int arrows = 0;
    for (const auto& l : loops) {
      if (h.size() < l.homology.size()) h.resize(l.homology.size());
      for (std::size_t i = 0; i < l.homology.size(); ++i) h[i] ^= l.homology[i];
      arrows += l.arrows;
    }
    h.push_back(((arrows % 2) + 2) % 2);
    return h;
  }
};

namespace detail {

inline std::vector<ChartLetter> free_reduce(const std::vector<ChartLetter>& w) {
  std::vector<ChartLetter> out;
  for (const auto& l : w) {
    if (!out.empty() && out.back().hole == l.hole && out.back().exp == -l.exp)
      out.pop_back();
    else
      out.push_back(l);
  }
  std::size_t a = 0, b = out.size();
  while (b - a >= 2 && out[a].hole == out[b - 1].hole && out[a].exp == -out[b - 1].exp) {
    ++a;
    --b;
  }
  return {out.begin() + static_cast<long>(a), out.begin() + static_cast<long>(b)};
}

inline std::vector<ChartLetter> min_rotation(const std::vector<ChartLetter>& w) {
  std::vector<ChartLetter> best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    std::vector<ChartLetter> r(w.begin() + static_cast<long>(k), w.end());
    r.insert(r.end(), w.begin(), w.begin() + static_cast<long>(k));
    if (r < best) best = r;
  }
  return best;
}

inline std::vector<ChartLetter> inverse_word(const std::vector<ChartLetter>& w) {
  std::vector<ChartLetter> out;
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->hole, -it->exp});
  return out;
}

}  // namespace detail

// Canonical conjugacy representative of a ccw word, capped holes deleted.
inline std::vector<ChartLetter> canonical_word(const ChartSpec& spec, const std::vector<ChartLetter>& w) {
  std::vector<ChartLetter> kept;
  for (const auto& l : w)
    if (spec.holes[static_cast<std::size_t>(l.hole)].type != HoleType::disk) kept.push_back(l);
  return detail::min_rotation(detail::free_reduce(kept));
}

inline std::string word_str(const ChartSpec& spec, const std::vector<ChartLetter>& w) {
  std::string s;
  for (const auto& l : w) {
    if (!s.empty()) s += ".";
    s += spec.holes[static_cast<std::size_t>(l.hole)].label;
    if (l.exp != 1) s += "^" + std::to_string(l.exp);
  }
  return s;
}

// One closed component of a resolution, as a sequence of (arc, forward) darts.
using LoopDarts = std::vector<std::pair<int, bool>>;

inline std::vector<int> nonsep_groups(const ChartSpec& spec) {
  std::map<int, int> size;
  for (const auto& h : spec.holes) ++size[h.group];
  std::vector<int> out;
  for (const auto& [g, n] : size)
    if (n >= 2) out.push_back(g);
  return out;
}

inline ChartLoop classify_loop(const ChartDiagram& d, const LoopDarts& darts) {
  const ChartSpec& spec = d.spec;
  ChartLoop L;
  std::vector<ChartLetter> word;
  std::vector<ChartPoint> poly;
  ChartPoint off{0, 0};
  Q area = 0;
  auto arc_of = [&](int e) -> const ChartArc& { return e >= 0 ? d.arcs[static_cast<std::size_t>(e)] : d.free_loops[static_cast<std::size_t>(-e - 1)]; };
  for (std::size_t i = 0; i < darts.size(); ++i) {
    const auto [e, fwd] = darts[i];
    const ChartArc& a = arc_of(e);
    const ChartPoint first = fwd ? a.pts.front() : a.pts.back();
    const ChartPoint last = fwd ? a.pts.back() : a.pts.front();
    if (i > 0) {
      // continue the lift from the previous end point
      off = off + (poly.back() - (first + off));
    }
    L.arrows += fwd ? a.arrows : -a.arrows;
    if (fwd) {
      word.insert(word.end(), a.letters.begin(), a.letters.end());
      area += a.area2;
      for (const auto& p : a.pts) poly.push_back(p + off);
    } else {
      auto inv = detail::inverse_word(a.letters);
      word.insert(word.end(), inv.begin(), inv.end());
      area -= a.area2;
      for (auto it = a.pts.rbegin(); it != a.pts.rend(); ++it) poly.push_back(*it + off);
    }
    area += cross(off, last - first);
  }
  const ChartPoint disp = poly.back() - poly.front();
  const auto groups = nonsep_groups(spec);
  L.homology.assign(2 + groups.size(), 0);
  if (spec.torus) {
    const Q pq = Q(disp.x / spec.width), qq = Q(disp.y / spec.height);
    L.p = pq.get_num().get_si();
    L.q = qq.get_num().get_si();
  }
  if (L.p != 0 || L.q != 0) {
    if (L.p < 0 || (L.p == 0 && L.q < 0)) {
      L.p = -L.p;
      L.q = -L.q;
      L.arrows = -L.arrows;
    }
    L.kind = LoopKind::nonsep;
    L.homology[0] = static_cast<int>(L.p % 2 != 0);
    L.homology[1] = static_cast<int>(L.q % 2 != 0);
    L.key = "N(" + std::to_string(L.p) + "," + std::to_string(L.q) + ")";
    if (L.arrows) L.key += "@" + std::to_string(L.arrows);
    return L;
  }
  if (area == 0) throw InputError("degenerate resolution loop");
  const bool ccw = area > 0;
  if (!ccw) {
    L.arrows = -L.arrows;
    word = detail::inverse_word(word);
  }
  // holes on the planar side
  std::set<int> inside;
  if (!spec.torus) {
    std::map<int, int> sum;
    for (const auto& l : word) sum[l.hole] += l.exp;
    for (const auto& [h, s] : sum)
      if (s != 0) inside.insert(h);
  } else {
    const auto bb = detail::bbox(poly);
    for (std::size_t h = 0; h < spec.holes.size(); ++h) {
      const ChartPoint c = *spec.holes[h].at;
      const long i0 = detail::floor_q(Q((bb.x0 - c.x) / spec.width)), i1 = detail::floor_q(Q((bb.x1 - c.x) / spec.width)) + 1;
      const long j0 = detail::floor_q(Q((bb.y0 - c.y) / spec.height)), j1 = detail::floor_q(Q((bb.y1 - c.y) / spec.height)) + 1;
      for (long i = i0; i <= i1; ++i)
        for (long j = j0; j <= j1; ++j)
          if (detail::winding(poly, {Q(c.x + i * spec.width), Q(c.y + j * spec.height)}) != 0) inside.insert(static_cast<int>(h));
    }
  }
  L.enclosed.assign(inside.begin(), inside.end());
  // kind from the hole groups
  std::map<int, std::pair<int, int>> split;  // group -> (inside, outside)
  for (std::size_t h = 0; h < spec.holes.size(); ++h) {
    auto& s = split[spec.holes[h].group];
    (inside.count(static_cast<int>(h)) ? s.first : s.second)++;
  }
  bool straddle = false;
  for (const auto& [g, s] : split)
    if (s.first && s.second) straddle = true;
  auto capped = [&](bool in) {
    for (std::size_t h = 0; h < spec.holes.size(); ++h)
      if ((inside.count(static_cast<int>(h)) > 0) == in && spec.holes[h].type != HoleType::disk) return false;
    return true;
  };
  if (straddle)
    L.kind = LoopKind::nonsep;
  else if (capped(true) || (!spec.torus && capped(false)))
    L.kind = LoopKind::trivial;
  else
    L.kind = LoopKind::separating;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    int n = 0;
    for (int h : inside)
      if (spec.holes[static_cast<std::size_t>(h)].group == groups[g]) ++n;
    L.homology[2 + g] = n % 2;
  }
  if (L.kind == LoopKind::trivial) {
    L.key = "T";
  } else if (!spec.torus) {
    L.word = canonical_word(spec, word);
    L.key = std::string(1, loop_kind_char(L.kind)) + "[" + word_str(spec, L.word) + "]";
  } else {
    std::string labels;
    for (int h : L.enclosed) labels += (labels.empty() ? "" : ",") + spec.holes[static_cast<std::size_t>(h)].label;
    L.key = std::string(1, loop_kind_char(L.kind)) + "{" + labels + "}";
  }
  if (L.arrows) L.key += "@" + std::to_string(L.arrows);
  return L;
}

// Loops of one state; bit x of mask set means the A-smoothing at crossing x.
inline std::vector<LoopDarts> resolve_state(const ChartDiagram& d, std::uint32_t mask) {
  std::vector<int> partner(2 * d.arcs.size(), -1);
  for (std::size_t x = 0; x < d.crossings.size(); ++x) {
    const auto& h = d.crossings[x].half;
    const bool a = (mask >> x) & 1u;
    auto pair = [&](int i, int j) {
      partner[static_cast<std::size_t>(h[static_cast<std::size_t>(i)])] = h[static_cast<std::size_t>(j)];
      partner[static_cast<std::size_t>(h[static_cast<std::size_t>(j)])] = h[static_cast<std::size_t>(i)];
    };
    if (a) {
      pair(0, 1);
      pair(2, 3);
    } else {
      pair(1, 2);
      pair(3, 0);
    }
  }
  std::vector<char> used(d.arcs.size(), 0);
  std::vector<LoopDarts> loops;
  for (std::size_t e0 = 0; e0 < d.arcs.size(); ++e0) {
    if (used[e0]) continue;
    LoopDarts darts;
    int e = static_cast<int>(e0);
    bool fwd = true;
    do {
      used[static_cast<std::size_t>(e)] = 1;
      darts.push_back({e, fwd});
      const int end = 2 * e + (fwd ? 1 : 0);
      const int nh = partner[static_cast<std::size_t>(end)];
      e = nh / 2;
      fwd = nh % 2 == 0;
    } while (!(e == static_cast<int>(e0) && fwd));
    loops.push_back(darts);
  }
  for (std::size_t f = 0; f < d.free_loops.size(); ++f) loops.push_back({{-static_cast<int>(f) - 1, true}});
  return loops;
}

inline ResolutionTerm resolution_term(const ChartDiagram& d, std::uint32_t mask, bool simplify = true) {
  ResolutionTerm t;
  t.mask = mask;
  t.plus = std::popcount(mask);
  t.minus = static_cast<int>(d.crossings.size()) - t.plus;
  t.coefficient = LaurentPoly::A(t.plus - t.minus);
  for (const auto& darts : resolve_state(d, mask)) {
    ChartLoop l = classify_loop(d, darts);
    if (simplify && l.kind == LoopKind::trivial && l.arrows == 0) {
      t.coefficient = t.coefficient * delta();
      continue;
    }
    t.loops.push_back(l);
  }
  return t;
}

inline std::vector<ResolutionTerm> enumerate_resolutions(const ChartDiagram& d, bool simplify = true) {
  const std::uint32_t n = 1u << d.crossings.size();
  std::vector<ResolutionTerm> out;
  out.reserve(n);
  for (std::uint32_t m = 0; m < n; ++m) out.push_back(resolution_term(d, m, simplify));
  return out;
}

// '+' for the A-smoothing, crossings ordered by position (x, then y)
inline std::vector<int> crossing_order(const ChartDiagram& d) {
  std::vector<int> o(d.crossings.size());
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = static_cast<int>(i);
  std::sort(o.begin(), o.end(), [&](int a, int b) {
    const auto& p = d.crossings[static_cast<std::size_t>(a)].at;
    const auto& q = d.crossings[static_cast<std::size_t>(b)].at;
    return p.x != q.x ? p.x < q.x : p.y < q.y;
  });
  return o;
}
inline std::string mask_signs(const ChartDiagram& d, std::uint32_t mask, const std::vector<int>& order) {
  (void)d;
  std::string s;
  for (int x : order) s += ((mask >> x) & 1u) ? '+' : '-';
  return s;
}

// ---- named configurations ---------------------------------------------------------------

struct ChartConfig {
  std::string kind;  // sphere, sphere0, torus, two_holed_torus, valency2, twist
  int n = 1;
  int a = 0, b = 0;
  int genus = 2;
  bool square_trivial = true;  // sphere: the small square bounds a disk
};

inline std::string config_str(const ChartConfig& c) {
  if (c.kind == "sphere") return "sphere(n=" + std::to_string(c.n) + (c.square_trivial ? "" : ",square=essential") + ")";
  if (c.kind == "torus" || c.kind == "twist") return c.kind + "(n=" + std::to_string(c.n) + ")";
  if (c.kind == "two_holed_torus") return "two_holed_torus(a=" + std::to_string(c.a) + ",b=" + std::to_string(c.b) + ")";
  if (c.kind == "valency2") return "valency2(g=" + std::to_string(c.genus) + ")";
  return c.kind;
}

namespace detail {

inline ChartPoint P(long x, long y) { return {Q(x), Q(y)}; }
inline ChartPoint P(const Q& x, const Q& y) { return {x, y}; }

// closed meander through the crossings 0..m-1 of the axis (crossing k at x = 2k)
inline std::vector<ChartPoint> meander(const std::vector<std::array<int, 3>>& above, const std::vector<std::array<int, 3>>& below) {
  std::map<int, std::pair<int, int>> up, dn;
  for (const auto& [a, b, h] : above) {
    up[a] = {b, h};
    up[b] = {a, h};
  }
  for (const auto& [a, b, h] : below) {
    dn[a] = {b, h};
    dn[b] = {a, h};
  }
  std::vector<ChartPoint> pts;
  int k = 0;
  do {
    const auto [k2, h] = up.at(k);
    pts.push_back(P(2 * k, h));
    pts.push_back(P(2 * k2, h));
    const auto [k3, dep] = dn.at(k2);
    pts.push_back(P(2 * k2, -dep));
    pts.push_back(P(2 * k3, -dep));
    k = k3;
  } while (k != 0);
  return pts;
}

inline ChartHole hole(const std::string& label, HoleType t, int group, std::optional<ChartPoint> at = std::nullopt) {
  return ChartHole{label, t, group, at};
}

}  // namespace detail

// gamma_on_top selects which of the two stacked products is drawn.
inline ChartSpec config_chart(const ChartConfig& cfg, bool gamma_on_top) {
  using detail::P;
  ChartSpec s;
  s.name = config_str(cfg);
  const int top = gamma_on_top ? 1 : 0, bottom = 1 - top;
  const Q half(1, 2);
  if (cfg.kind == "sphere") {
    const int n = cfg.n;
    if (n < 1) throw InputError("field 'n' of sphere must be >= 1");
    std::vector<std::array<int, 3>> above, below{{0, 1, 1}};
    for (int k = 0; k <= n + 1; ++k) above.push_back({k, 2 * n + 3 - k, n + 2 - k});
    for (int j = 0; j <= n; ++j) below.push_back({n + 2 - j, n + 3 + j, j + 1});
    s.curves.push_back({"gamma", detail::meander(above, below), {}, top, {}});
    const long B = n + 5;
    s.curves.push_back({"delta", {P(-1, 0), P(4 * n + 7, 0), P(4 * n + 7, -B), P(-1, -B)}, {}, bottom, {}});
    s.holes = {detail::hole("O", HoleType::boundary, 0),
               detail::hole("H", HoleType::nonsep, 0, P(Q(3, 4), -half)),
               detail::hole("R1", HoleType::separating, 1, P(Q(2 * n + 3), half)),
               detail::hole("R2", HoleType::separating, 2, P(Q(2 * n + 5), -half)),
               detail::hole("Q", cfg.square_trivial ? HoleType::disk : HoleType::separating, 3, P(Q(5, 4), half))};
  } else if (cfg.kind == "sphere0") {
    // meander below the axis, delta above it
    auto g = detail::meander({{0, 3, 2}, {1, 2, 1}}, {{0, 1, 1}, {2, 3, 1}});
    for (auto& p : g) p.y = -p.y;
    s.curves.push_back({"gamma", g, {}, top, {}});
    s.curves.push_back({"delta", {P(-1, 0), P(-1, 6), P(7, 6), P(7, 0)}, {}, bottom, {}});
    s.holes = {detail::hole("O", HoleType::boundary, 0),
               detail::hole("H", HoleType::nonsep, 0, P(Q(5), half)),
               detail::hole("R1", HoleType::separating, 1, P(Q(1), half)),
               detail::hole("R2", HoleType::separating, 2, P(Q(3), -half)),
               detail::hole("Q", HoleType::disk, 3, P(Q(5, 2), Q(5)))};
  } else if (cfg.kind == "twist") {
    if (cfg.n == 1) {
      s.torus = true;
      s.width = s.height = 4;
      ChartCurve g{"gamma", {P(0, 2), P(1, 2)}, P(4, 0), top, {}};
      if (cfg.a) g.arrows[0] = cfg.a;
      s.curves.push_back(g);
      s.curves.push_back({"delta", {P(2, 0)}, P(0, 4), bottom, {}});
      s.holes = {detail::hole("C", HoleType::separating, 0, P(0, 0))};
    } else if (cfg.n == 2) {
      ChartCurve g{"gamma", {P(-1, -1), P(7, -1), P(7, 3), P(-1, 3)}, {}, top, {}};
      if (cfg.a) g.arrows[3] = cfg.a;
      s.curves.push_back(g);
      s.curves.push_back({"delta", {P(3, -2), P(11, -2), P(11, 2), P(3, 2)}, {}, bottom, {}});
      s.holes = {detail::hole("O", HoleType::boundary, 0),
                 detail::hole("P1", HoleType::separating, 1, P(1, 0)),
                 detail::hole("P2", HoleType::separating, 2, P(5, 1)),
                 detail::hole("P3", HoleType::separating, 3, P(9, 0))};
    } else {
      throw InputError("field 'n' of twist must be 1 or 2");
    }
  } else if (cfg.kind == "torus") {
    const int n = cfg.n;
    if (n < 3) throw InputError("field 'n' of torus must be >= 3");
    s.torus = true;
    s.width = 2 * n;
    s.height = 4;
    s.curves.push_back({"gamma", {P(1, 0)}, P(2 * n, 4 * n), top, {}});
    s.curves.push_back({"delta", {P(half, Q(2))}, P(2 * n, 0), bottom, {}});
    for (int m = 0; m < n; ++m) {
      Q x = Q(7, 2) + 2 * m;
      if (x > 2 * n) x -= 2 * n;
      s.holes.push_back(detail::hole("W" + std::to_string(m), HoleType::separating, m, P(x, Q(3))));
    }
  } else if (cfg.kind == "two_holed_torus") {
    s.torus = true;
    s.width = s.height = 8;
    ChartCurve c1{"gamma1", {P(2, 0), P(2, 1)}, P(0, 8), top, {}}, c2{"gamma2", {P(6, 0), P(6, 1)}, P(0, 8), top, {}};
    if (cfg.a) c1.arrows[0] = cfg.a;
    if (cfg.b) c2.arrows[0] = cfg.b;
    s.curves.push_back(c1);
    s.curves.push_back(c2);
    s.curves.push_back({"delta", {P(0, 4)}, P(8, 0), bottom, {}});
    s.holes = {detail::hole("U", HoleType::separating, 0, P(4, 2)), detail::hole("V", HoleType::separating, 1, P(7, 2))};
  } else if (cfg.kind == "valency2") {
    if (cfg.genus < 1) throw InputError("field 'genus' of valency2 must be >= 1");
    s.torus = true;
    s.width = s.height = 8;
    s.curves.push_back({"gamma", {P(4, 0)}, P(0, 8), top, {}});
    s.curves.push_back({"delta", {P(0, 1), P(6, 1), P(6, 3), P(2, 3), P(2, 5), P(7, 5), P(7, 1)}, P(8, 0), bottom, {}});
    s.holes = {detail::hole("C1", HoleType::separating, 1, P(5, 2)), detail::hole("C2", HoleType::separating, 2, P(3, 4)),
               detail::hole("K", cfg.genus == 1 ? HoleType::disk : HoleType::separating, 3, P(1, 7))};
  } else {
    throw InputError("field 'config': unsupported configuration '" + cfg.kind + "'");
  }
  return s;
}

// ---- relations from commutators ---------------------------------------------------------

struct ChartRelation {
  Relation relation;
  std::map<std::string, int> degree;
  std::map<std::string, std::vector<int>> homology;
  std::map<std::string, LaurentPoly> top, bottom;  // gamma.delta and delta.gamma grouped by multicurve
  int crossings = 0;
  std::vector<std::string> heads() const {
    std::vector<std::string> h;
    for (const auto& [k, c] : relation.terms)
      if (degree.at(k) == relation.max_degree) h.push_back(k);
    return h;
  }
};

inline ChartRelation commutator_relation(const ChartSpec& upper, const ChartSpec& lower, const std::string& derivation) {
  ChartRelation out;
  const ChartDiagram du = build_chart(upper), dl = build_chart(lower);
  if (du.crossings.size() != dl.crossings.size()) throw InputError("stacked diagrams differ in crossing count");
  out.crossings = static_cast<int>(du.crossings.size());
  auto collect = [&](const ChartDiagram& d, std::map<std::string, LaurentPoly>& into) {
    for (const auto& t : enumerate_resolutions(d)) {
      const std::string k = t.multicurve();
      into[k] = into[k] + t.coefficient;
      out.degree[k] = t.degree();
      out.homology[k] = t.homology();
    }
  };
  collect(du, out.top);
  collect(dl, out.bottom);
  std::set<std::string> keys;
  for (const auto& [k, c] : out.top) keys.insert(k);
  for (const auto& [k, c] : out.bottom) keys.insert(k);
  Relation& rel = out.relation;
  rel.derivation = derivation;
  for (const auto& k : keys) {
    LaurentPoly c;
    if (auto it = out.top.find(k); it != out.top.end()) c = c + it->second;
    if (auto it = out.bottom.find(k); it != out.bottom.end()) c = c - it->second;
    if (!c.is_zero()) rel.terms[k] = RationalFn(c);
  }
  rel.max_degree = -1;
  for (const auto& [k, c] : rel.terms) rel.max_degree = std::max(rel.max_degree, out.degree.at(k));
  for (const auto& [k, c] : rel.terms)
    if (out.degree.at(k) == rel.max_degree) {
      rel.head = k;
      break;
    }
  return out;
}

inline ChartRelation derive_chart_relation(const ChartConfig& cfg) {
  return commutator_relation(config_chart(cfg, true), config_chart(cfg, false), config_str(cfg));
}

inline Relation derive_relation(const ChartConfig& cfg) { return derive_chart_relation(cfg).relation; }

inline std::string relation_text(const Relation& rel) {
  std::string s;
  for (const auto& [k, c] : rel.terms) {
    s += (s.empty() ? "  " : "\n+ ") + std::string("[") + c.str() + "] * " + k;
  }
  return rel.derivation + ":\n" + (s.empty() ? "  0" : s) + "\n= 0";
}

}  // namespace skein
