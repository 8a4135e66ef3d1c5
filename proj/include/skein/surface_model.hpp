#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace skein {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Letters: a_i -> 2i-1, b_i -> 2i, inverses negated.
using Letter = int;

inline Letter gen_a(int i, int e = 1) { return e * (2 * i - 1); }
inline Letter gen_b(int i, int e = 1) { return e * (2 * i); }
inline int letter_index(Letter l) { return (std::abs(l) + 1) / 2; }
inline bool letter_is_b(Letter l) { return std::abs(l) % 2 == 0; }

class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> ls) {
    for (Letter l : ls) push(l);
  }
  explicit Word(const std::vector<Letter>& ls) {
    for (Letter l : ls) push(l);
  }

  const std::vector<Letter>& letters() const { return l_; }
  bool empty() const { return l_.empty(); }
  std::size_t size() const { return l_.size(); }

  void push(Letter l) {
    if (l == 0) throw InputError("invalid letter");
    if (!l_.empty() && l_.back() == -l)
      l_.pop_back();
    else
      l_.push_back(l);
  }
  Word& operator*=(const Word& o) {
    for (Letter l : o.l_) push(l);
    return *this;
  }
  friend Word operator*(Word a, const Word& b) { return a *= b; }
  Word inverse() const {
    Word r;
    for (auto it = l_.rbegin(); it != l_.rend(); ++it) r.l_.push_back(-*it);
    return r;
  }
  Word pow(int k) const {
    Word base = k < 0 ? inverse() : *this, r;
    for (int i = 0; i < std::abs(k); ++i) r *= base;
    return r;
  }
  friend bool operator==(const Word& a, const Word& b) { return a.l_ == b.l_; }
  friend bool operator!=(const Word& a, const Word& b) { return a.l_ != b.l_; }
  friend bool operator<(const Word& a, const Word& b) { return a.l_ < b.l_; }

  int max_index() const {
    int m = 0;
    for (Letter l : l_) m = std::max(m, letter_index(l));
    return m;
  }

  Word cyclically_reduced() const {
    std::size_t b = 0, e = l_.size();
    while (e - b >= 2 && l_[b] == -l_[e - 1]) {
      ++b;
      --e;
    }
    Word r;
    r.l_.assign(l_.begin() + static_cast<long>(b), l_.begin() + static_cast<long>(e));
    return r;
  }

  // lexicographically least rotation of the cyclic reduction
  Word cyclic_normal() const {
    Word c = cyclically_reduced();
    const auto& v = c.l_;
    if (v.size() < 2) return c;
    std::vector<Letter> best = v;
    for (std::size_t k = 1; k < v.size(); ++k) {
      std::vector<Letter> rot(v.begin() + static_cast<long>(k), v.end());
      rot.insert(rot.end(), v.begin(), v.begin() + static_cast<long>(k));
      if (rot < best) best = rot;
    }
    Word r;
    r.l_ = best;
    return r;
  }

  std::string str() const {
    if (l_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < l_.size(); ++i) {
      if (i) s += ' ';
      Letter l = l_[i];
      s += letter_is_b(l) ? 'b' : 'a';
      s += std::to_string(letter_index(l));
      if (l < 0) s += "^-1";
    }
    return s;
  }

  // "a1 b1^-1 a2", exponents of any sign allowed ("a1^2")
  static Word parse(std::string_view text) {
    Word w;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
      if (tok == "1") continue;
      if (tok.size() < 2 || (tok[0] != 'a' && tok[0] != 'b')) throw InputError("bad word token '" + tok + "'");
      std::size_t pos = 1;
      while (pos < tok.size() && std::isdigit(static_cast<unsigned char>(tok[pos]))) ++pos;
      if (pos == 1) throw InputError("bad word token '" + tok + "'");
      int idx = std::stoi(tok.substr(1, pos - 1));
      int e = 1;
      if (pos < tok.size()) {
        if (tok[pos] != '^') throw InputError("bad word token '" + tok + "'");
        e = std::stoi(tok.substr(pos + 1));
      }
      if (idx < 1) throw InputError("generator index must be positive in '" + tok + "'");
      Letter l = tok[0] == 'a' ? gen_a(idx) : gen_b(idx);
      for (int k = 0; k < std::abs(e); ++k) w.push(e < 0 ? -l : l);
    }
    return w;
  }

 private:
  std::vector<Letter> l_;
};

// Two words represent the same unoriented free homotopy class.
inline bool same_curve(const Word& x, const Word& y) {
  Word nx = x.cyclic_normal();
  return nx == y.cyclic_normal() || nx == y.inverse().cyclic_normal();
}
inline bool conjugate(const Word& x, const Word& y) { return x.cyclic_normal() == y.cyclic_normal(); }

struct Homology2Class {
  int genus = 0;
  std::uint64_t bits = 0;

  Homology2Class() = default;
  Homology2Class(int g, std::uint64_t b) : genus(g), bits(b) {}
  static Homology2Class a(int g, int i) { return {g, std::uint64_t{1} << (2 * i - 2)}; }
  static Homology2Class b(int g, int i) { return {g, std::uint64_t{1} << (2 * i - 1)}; }

  bool is_zero() const { return bits == 0; }
  bool bit(int k) const { return (bits >> k) & 1u; }
  bool eps(int i) const { return bit(2 * i - 2); }
  bool dlt(int i) const { return bit(2 * i - 1); }
  Homology2Class operator+(const Homology2Class& o) const { return {std::max(genus, o.genus), bits ^ o.bits}; }
  Homology2Class& operator+=(const Homology2Class& o) { return *this = *this + o; }
  friend bool operator==(const Homology2Class& x, const Homology2Class& y) { return x.bits == y.bits; }
  friend bool operator!=(const Homology2Class& x, const Homology2Class& y) { return x.bits != y.bits; }
  friend bool operator<(const Homology2Class& x, const Homology2Class& y) { return x.bits < y.bits; }

  // mod-2 intersection pairing
  int pairing(const Homology2Class& o) const {
    int s = 0;
    for (int i = 1; i <= std::max(genus, o.genus); ++i) s += (eps(i) & o.dlt(i)) + (dlt(i) & o.eps(i));
    return s & 1;
  }

  std::string str() const {
    std::string s;
    for (int k = 0; k < 2 * genus; ++k) s += bit(k) ? '1' : '0';
    return s;
  }
  static Homology2Class parse(std::string_view s) {
    if (s.empty() || s.size() % 2) throw InputError("homology class must be a bit string of even length");
    Homology2Class h(static_cast<int>(s.size() / 2), 0);
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] == '1')
        h.bits |= std::uint64_t{1} << k;
      else if (s[k] != '0')
        throw InputError("homology class must be a bit string");
    }
    return h;
  }
};

inline Homology2Class homology_of_word(const Word& w, int genus) {
  Homology2Class h(genus, 0);
  for (Letter l : w.letters()) {
    int i = letter_index(l);
    if (i > genus) throw InputError("generator index exceeds genus in word " + w.str());
    h.bits ^= std::uint64_t{1} << (letter_is_b(l) ? 2 * i - 1 : 2 * i - 2);
  }
  return h;
}

inline Word f_representative(const Homology2Class& h) {
  if (h.is_zero()) throw InputError("the canonical family has no representative of the zero class");
  Word w;
  for (int i = 1; i <= h.genus; ++i) {
    if (h.eps(i)) w.push(gen_a(i));
    if (h.dlt(i)) w.push(gen_b(i, -1));
  }
  return w;
}

inline bool is_f_word(const Word& w, int genus) {
  if (w.empty() || w.max_index() > genus) return false;
  return f_representative(homology_of_word(w, genus)) == w;
}

// F-membership up to free homotopy
inline std::optional<Word> as_f_word(const Word& w, int genus) {
  if (w.max_index() > genus) return std::nullopt;
  Homology2Class h = homology_of_word(w, genus);
  if (h.is_zero()) return std::nullopt;
  Word f = f_representative(h);
  if (same_curve(f, w)) return f;
  return std::nullopt;
}

inline std::vector<Word> enumerate_f_words(int genus) {
  std::vector<Word> out;
  for (std::uint64_t b = 1; b < (std::uint64_t{1} << (2 * genus)); ++b) out.push_back(f_representative({genus, b}));
  return out;
}

struct SurfaceSpec {
  int genus;
  explicit SurfaceSpec(int g) : genus(g) {
    if (g < 2) throw InputError("genus must be at least 2");
  }
  int pants_count() const { return 2 * genus; }
  int kmax() const { return 4 * genus + 4; }
};

enum class CurveKind { trivial, alpha, beta, gamma, f_word, sausage, sausage_e, auxiliary };
enum class AuxTag { A, B, Bp, C, D, Dp };

inline const char* aux_name(AuxTag t) {
  switch (t) {
    case AuxTag::A: return "A";
    case AuxTag::B: return "B";
    case AuxTag::Bp: return "Bp";
    case AuxTag::C: return "C";
    case AuxTag::D: return "D";
    case AuxTag::Dp: return "Dp";
  }
  return "?";
}

inline AuxTag parse_aux(std::string_view s) {
  if (s == "A") return AuxTag::A;
  if (s == "B") return AuxTag::B;
  if (s == "Bp" || s == "B'") return AuxTag::Bp;
  if (s == "C") return AuxTag::C;
  if (s == "D") return AuxTag::D;
  if (s == "Dp" || s == "D'") return AuxTag::Dp;
  throw InputError("unknown auxiliary tag '" + std::string(s) + "'");
}

inline Word gamma_word(int i) { return Word{gen_a(i + 1, -1), gen_b(i), gen_a(i), gen_b(i, -1)}; }

inline Word aux_word(AuxTag t, int i) {
  switch (t) {
    case AuxTag::A: return Word{gen_a(i), gen_a(i + 1, -1), gen_b(i)};
    case AuxTag::B: return Word{gen_a(i), gen_b(i, -1), gen_b(i + 1, -1)};
    case AuxTag::Bp: return Word{gen_a(i), gen_b(i, -1), gen_a(i + 1), gen_b(i + 1, -1)};
    case AuxTag::C: return Word{gen_b(i, -1), gen_a(i + 1)};
    case AuxTag::D: return Word{gen_b(i, -1), gen_b(i + 1, -1)};
    case AuxTag::Dp: return Word{gen_b(i, -1), gen_a(i + 1), gen_b(i + 1, -1)};
  }
  return {};
}

// Sausage positions 0..2g: even positions bound the pieces of genus j on their left,
// odd positions 2j-1 and the partner e_j cross handle j.
struct CurveCatalogEntry {
  CurveKind kind = CurveKind::trivial;
  int index = 0;  // i for Lickorish/aux, position for sausage, handle for sausage_e
  AuxTag tag = AuxTag::A;
  Homology2Class fclass;  // f_word only
  int genus = 2;

  static CurveCatalogEntry trivial(int g) { return {CurveKind::trivial, 0, AuxTag::A, {}, g}; }
  static CurveCatalogEntry alpha(int g, int i) { return checked({CurveKind::alpha, i, AuxTag::A, {}, g}); }
  static CurveCatalogEntry beta(int g, int i) { return checked({CurveKind::beta, i, AuxTag::A, {}, g}); }
  static CurveCatalogEntry gamma(int g, int i) { return checked({CurveKind::gamma, i, AuxTag::A, {}, g}); }
  static CurveCatalogEntry f_word(const Homology2Class& h) {
    if (h.is_zero()) throw InputError("f_word needs a non-zero class");
    return {CurveKind::f_word, 0, AuxTag::A, h, h.genus};
  }
  static CurveCatalogEntry sausage(int g, int k) { return checked({CurveKind::sausage, k, AuxTag::A, {}, g}); }
  static CurveCatalogEntry sausage_e(int g, int j) { return checked({CurveKind::sausage_e, j, AuxTag::A, {}, g}); }
  static CurveCatalogEntry auxiliary(int g, AuxTag t, int i) { return checked({CurveKind::auxiliary, i, t, {}, g}); }

  std::optional<Word> word() const {
    switch (kind) {
      case CurveKind::alpha: return Word{gen_a(index)};
      case CurveKind::beta: return Word{gen_b(index)};
      case CurveKind::gamma: return gamma_word(index);
      case CurveKind::f_word: return f_representative(fclass);
      case CurveKind::auxiliary: return aux_word(tag, index);
      default: return std::nullopt;
    }
  }

  Homology2Class homology() const {
    if (auto w = word()) return homology_of_word(*w, genus);
    if (kind == CurveKind::sausage && index % 2 == 1) return Homology2Class::a(genus, (index + 1) / 2);
    if (kind == CurveKind::sausage_e) return Homology2Class::a(genus, index);
    return {genus, 0};
  }

  // trivial in the surface (bounds a disk)
  bool is_trivial() const {
    return kind == CurveKind::trivial || (kind == CurveKind::sausage && (index == 0 || index == 2 * genus));
  }
  bool separating() const { return kind == CurveKind::sausage && index % 2 == 0 && !is_trivial(); }
  bool nonseparating() const { return !is_trivial() && !separating(); }

  std::string id() const {
    switch (kind) {
      case CurveKind::trivial: return "trivial";
      case CurveKind::alpha: return "alpha:" + std::to_string(index);
      case CurveKind::beta: return "beta:" + std::to_string(index);
      case CurveKind::gamma: return "gamma:" + std::to_string(index);
      case CurveKind::f_word: return "fword:" + fclass.str();
      case CurveKind::sausage: return "sausage:" + std::to_string(index);
      case CurveKind::sausage_e: return "sausage_e:" + std::to_string(index);
      case CurveKind::auxiliary: return std::string("aux:") + aux_name(tag) + ":" + std::to_string(index);
    }
    return "?";
  }

  static CurveCatalogEntry parse(std::string_view id, int g) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : id) {
      if (c == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    auto num = [&](std::size_t k) {
      if (k >= parts.size()) throw InputError("curve id '" + std::string(id) + "' is missing an index");
      try {
        return std::stoi(parts[k]);
      } catch (...) {
        throw InputError("curve id '" + std::string(id) + "' has a bad index");
      }
    };
    const std::string& k = parts[0];
    if (k == "trivial") return trivial(g);
    if (k == "alpha") return alpha(g, num(1));
    if (k == "beta") return beta(g, num(1));
    if (k == "gamma") return gamma(g, num(1));
    if (k == "fword") {
      if (parts.size() < 2) throw InputError("fword needs a class");
      Homology2Class h = Homology2Class::parse(parts[1]);
      if (h.genus != g) throw InputError("fword class length does not match genus");
      return f_word(h);
    }
    if (k == "sausage") return sausage(g, num(1));
    if (k == "sausage_e") return sausage_e(g, num(1));
    if (k == "aux") {
      if (parts.size() < 3) throw InputError("aux curve needs tag and index");
      return auxiliary(g, parse_aux(parts[1]), num(2));
    }
    throw InputError("unknown curve kind '" + k + "'");
  }

  friend bool operator==(const CurveCatalogEntry& x, const CurveCatalogEntry& y) { return x.id() == y.id(); }
  friend bool operator<(const CurveCatalogEntry& x, const CurveCatalogEntry& y) { return x.id() < y.id(); }

 private:
  static CurveCatalogEntry checked(CurveCatalogEntry e) {
    const int g = e.genus;
    bool ok = true;
    switch (e.kind) {
      case CurveKind::alpha:
      case CurveKind::beta: ok = e.index >= 1 && e.index <= g; break;
      case CurveKind::gamma:
      case CurveKind::auxiliary: ok = e.index >= 1 && e.index <= g - 1; break;
      case CurveKind::sausage: ok = e.index >= 0 && e.index <= 2 * g; break;
      case CurveKind::sausage_e: ok = e.index >= 1 && e.index <= g; break;
      default: break;
    }
    if (!ok) throw InputError("curve index out of range for " + e.id() + " at genus " + std::to_string(g));
    return e;
  }
};

// ---- Lickorish twists on words ------------------------------------------------

enum class Lickorish { alpha, beta, gamma };

struct TwistGen {
  Lickorish kind;
  int index;
  std::string name() const {
    const char* n = kind == Lickorish::alpha ? "alpha" : kind == Lickorish::beta ? "beta" : "gamma";
    return std::string(n) + ":" + std::to_string(index);
  }
  Homology2Class homology(int g) const {
    switch (kind) {
      case Lickorish::alpha: return Homology2Class::a(g, index);
      case Lickorish::beta: return Homology2Class::b(g, index);
      case Lickorish::gamma: return Homology2Class::a(g, index) + Homology2Class::a(g, index + 1);
    }
    return {};
  }
  friend bool operator==(const TwistGen& x, const TwistGen& y) { return x.kind == y.kind && x.index == y.index; }
};

inline std::vector<TwistGen> lickorish_generators(int g) {
  std::vector<TwistGen> v;
  for (int i = 1; i <= g; ++i) v.push_back({Lickorish::alpha, i});
  for (int i = 1; i <= g; ++i) v.push_back({Lickorish::beta, i});
  for (int i = 1; i < g; ++i) v.push_back({Lickorish::gamma, i});
  return v;
}

inline Word substitute(const Word& w, const std::map<Letter, Word>& images) {
  Word r;
  for (Letter l : w.letters()) {
    auto it = images.find(std::abs(l));
    if (it == images.end())
      r.push(l);
    else
      r *= l > 0 ? it->second : it->second.inverse();
  }
  return r;
}

inline std::map<Letter, Word> twist_images(const TwistGen& t, int eps) {
  const int i = t.index;
  std::map<Letter, Word> m;
  switch (t.kind) {
    case Lickorish::alpha: m[gen_b(i)] = Word{gen_b(i)} * Word{gen_a(i)}.pow(eps); break;
    case Lickorish::beta: m[gen_a(i)] = Word{gen_a(i)} * Word{gen_b(i)}.pow(-eps); break;
    case Lickorish::gamma: {
      Word g = gamma_word(i).pow(eps), gi = g.inverse();
      m[gen_b(i)] = g * Word{gen_b(i)};
      m[gen_a(i + 1)] = g * Word{gen_a(i + 1)} * gi;
      m[gen_b(i + 1)] = Word{gen_b(i + 1)} * gi;
      break;
    }
  }
  return m;
}

// one application of a Lickorish twist with exponent eps = +-1, iterated for |k| > 1
inline Word apply_twist(const Word& w, const TwistGen& t, int k) {
  Word r = w;
  const int eps = k >= 0 ? 1 : -1;
  auto m = twist_images(t, eps);
  for (int n = 0; n < std::abs(k); ++n) r = substitute(r, m);
  return r;
}

inline Word surface_relator(int g) {
  Word r;
  for (int i = 1; i <= g; ++i) r *= Word{gen_a(i), gen_b(i), gen_a(i, -1), gen_b(i, -1)};
  return r;
}

// ---- intersection numbers -----------------------------------------------------

class NotTabulated : public std::runtime_error {
 public:
  NotTabulated() : std::runtime_error("intersection not tabulated") {}
};

namespace detail {
// |exponent sum| of the letters with index i of the given type, if all share a sign
inline std::optional<int> uniform_count(const Word& w, int i, bool b) {
  int pos = 0, neg = 0;
  const Word c = w.cyclic_normal();
  for (Letter l : c.letters())
    if (letter_index(l) == i && letter_is_b(l) == b) (l > 0 ? pos : neg)++;
  if (pos && neg) return std::nullopt;
  return pos + neg;
}
}  // namespace detail

// i(gamma_i, c) for c in F: odd pairing gives 1; otherwise 0 when the twist fixes c, else 2.
inline int gamma_f_intersection(int i, const Word& c, int g) {
  const Homology2Class h = homology_of_word(c, g);
  const TwistGen t{Lickorish::gamma, i};
  if (h.pairing(t.homology(g))) return 1;
  return same_curve(apply_twist(c, t, 1), c) ? 0 : 2;
}

inline int lickorish_intersection(const TwistGen& t, const Word& w, int g) {
  switch (t.kind) {
    case Lickorish::alpha:
      if (auto n = detail::uniform_count(w, t.index, true)) return *n;
      throw NotTabulated();
    case Lickorish::beta:
      if (auto n = detail::uniform_count(w, t.index, false)) return *n;
      throw NotTabulated();
    case Lickorish::gamma:
      for (int k : {0, 1, -1, 2, -2}) {
        Word v = apply_twist(w, t, k);
        if (auto f = as_f_word(v, g)) return gamma_f_intersection(t.index, *f, g);
      }
      throw NotTabulated();
  }
  throw NotTabulated();
}

// Auxiliary pairs (X, Y) with i(X, Y) = 1: the word contains X^m Y as a block.
inline const std::vector<std::pair<AuxTag, AuxTag>>& aux_pairs() {
  static const std::vector<std::pair<AuxTag, AuxTag>> p = {
      {AuxTag::A, AuxTag::B}, {AuxTag::C, AuxTag::D}, {AuxTag::A, AuxTag::Bp}, {AuxTag::C, AuxTag::Dp}};
  return p;
}

// Rotates the cyclic word so that it reads X^m Y rest (X^0 Y allowed).
struct AuxBlock {
  int power = 0;
  Word rest;
};

inline std::optional<AuxBlock> find_aux_block(const Word& word, AuxTag x, AuxTag y, int i) {
  const Word X = aux_word(x, i), Y = aux_word(y, i);
  const std::vector<Letter> v = word.cyclically_reduced().letters();
  const std::size_t n = v.size();
  if (n == 0) return std::nullopt;
  auto at = [&](std::size_t k) { return v[k % n]; };
  auto match_at = [&](std::size_t pos, const Word& pat) {
    for (std::size_t k = 0; k < pat.size(); ++k)
      if (at(pos + k) != pat.letters()[k]) return false;
    return true;
  };
  for (int sign : {1, -1}) {
    const Word Xs = sign > 0 ? X : X.inverse();
    for (std::size_t start = 0; start < n; ++start) {
      std::size_t pos = start;
      int m = 0;
      while (pos - start + Xs.size() + Y.size() <= n && match_at(pos, Xs)) {
        pos += Xs.size();
        ++m;
      }
      for (; m >= (sign < 0 ? 1 : 0); --m, pos -= Xs.size()) {
        if (pos - start + Y.size() > n || !match_at(pos, Y)) continue;
        std::vector<Letter> rest;
        for (std::size_t k = pos + Y.size(); k < start + n; ++k) rest.push_back(at(k));
        return AuxBlock{sign * m, Word(rest)};
      }
    }
  }
  return std::nullopt;
}

inline std::optional<Word> apply_aux_twist(const Word& word, AuxTag x, AuxTag y, int i, int k) {
  auto b = find_aux_block(word, x, y, i);
  if (!b) return std::nullopt;
  return aux_word(x, i).pow(b->power + k) * aux_word(y, i) * b->rest;
}

inline int intersection_number(const CurveCatalogEntry& x, const CurveCatalogEntry& y) {
  const int g = std::max(x.genus, y.genus);
  auto lick = [](const CurveCatalogEntry& e) -> std::optional<TwistGen> {
    if (e.kind == CurveKind::alpha) return TwistGen{Lickorish::alpha, e.index};
    if (e.kind == CurveKind::beta) return TwistGen{Lickorish::beta, e.index};
    if (e.kind == CurveKind::gamma) return TwistGen{Lickorish::gamma, e.index};
    return std::nullopt;
  };
  if (auto t = lick(x); t && y.kind == CurveKind::f_word) return lickorish_intersection(*t, *y.word(), g);
  if (auto t = lick(y); t && x.kind == CurveKind::f_word) return lickorish_intersection(*t, *x.word(), g);
  if (x.kind == CurveKind::auxiliary && y.kind == CurveKind::auxiliary && x.index == y.index) {
    for (auto [p, q] : aux_pairs())
      if ((x.tag == p && y.tag == q) || (x.tag == q && y.tag == p)) return 1;
  }
  throw NotTabulated();
}

// ---- basis elements -----------------------------------------------------------

struct BasisElement {
  bool trivial = true;
  int k = 0;  // arrows on the trivial curve, or 0/1 on the non-separating one
  Homology2Class h;

  static BasisElement trivial_arrows(int k) { return {true, k, {}}; }
  static BasisElement nonsep(const Homology2Class& h, int arrows) {
    if (h.is_zero()) throw InputError("non-separating basis element needs a non-zero class");
    return {false, ((arrows % 2) + 2) % 2, h};
  }

  std::string id() const {
    if (trivial) return "trivial:" + std::to_string(k);
    return "nonsep:" + h.str() + ":" + std::to_string(k);
  }
  static BasisElement parse(std::string_view s) {
    std::string str(s);
    if (str.rfind("trivial:", 0) == 0) return trivial_arrows(std::stoi(str.substr(8)));
    if (str.rfind("nonsep:", 0) == 0) {
      auto c = str.find(':', 7);
      if (c == std::string::npos) throw InputError("bad basis id '" + str + "'");
      return nonsep(Homology2Class::parse(str.substr(7, c - 7)), std::stoi(str.substr(c + 1)));
    }
    throw InputError("bad basis id '" + str + "'");
  }
  // (homology, arrow parity)
  std::pair<Homology2Class, int> grading(int g) const {
    if (trivial) return {Homology2Class(g, 0), k % 2};
    return {h, k};
  }
  friend bool operator==(const BasisElement& x, const BasisElement& y) {
    return x.trivial == y.trivial && x.k == y.k && (x.trivial || x.h == y.h);
  }
  friend bool operator<(const BasisElement& x, const BasisElement& y) {
    if (x.trivial != y.trivial) return x.trivial;
    if (x.trivial) return x.k < y.k;
    if (x.h.bits != y.h.bits) return x.h.bits < y.h.bits;
    return x.k < y.k;
  }
};

inline std::vector<BasisElement> enumerate_basis(int g) {
  if (g < 2) throw InputError("genus must be at least 2");
  std::vector<BasisElement> out;
  for (int k = 0; k <= 2 * g; ++k) out.push_back(BasisElement::trivial_arrows(k));
  for (std::uint64_t b = 1; b < (std::uint64_t{1} << (2 * g)); ++b)
    for (int a = 0; a < 2; ++a) out.push_back(BasisElement::nonsep({g, b}, a));
  return out;
}

}  // namespace skein
