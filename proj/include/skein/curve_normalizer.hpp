#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skein/surface_model.hpp"

namespace skein {

enum class Justification { i1_square, i2_single };

inline const char* justification_name(Justification j) { return j == Justification::i1_square ? "i1_square" : "i2_single"; }

struct TwistCurve {
  bool auxiliary = false;
  TwistGen lick{Lickorish::alpha, 1};
  AuxTag tag = AuxTag::A, partner = AuxTag::B;
  int aux_index = 1;

  static TwistCurve of(TwistGen t) { return {false, t, AuxTag::A, AuxTag::B, 1}; }
  static TwistCurve aux(AuxTag x, AuxTag y, int i) { return {true, {Lickorish::alpha, 1}, x, y, i}; }

  std::string name() const {
    if (!auxiliary) return lick.name();
    return std::string("aux:") + aux_name(tag) + ":" + std::to_string(aux_index);
  }
};

struct TwistMove {
  TwistCurve curve;
  int exponent = 0;
  Justification justification = Justification::i1_square;
  int intersection = 1;
};

struct EquivCertificate {
  int genus = 2;
  Word start;
  std::vector<TwistMove> moves;
  std::vector<Word> steps;  // word after each move
  Word end;
};

// Applies a move; auxiliary twists act on an X^m Y block and fail without one.
inline std::optional<Word> replay_move(const Word& w, const TwistMove& m) {
  if (!m.curve.auxiliary) return apply_twist(w, m.curve.lick, m.exponent);
  return apply_aux_twist(w, m.curve.tag, m.curve.partner, m.curve.aux_index, m.exponent);
}

// Intersection of the move's twist curve with the word it acts on, if tabulated.
inline std::optional<int> move_intersection(const Word& w, const TwistMove& m, int g) {
  if (m.curve.auxiliary) {
    for (auto [x, y] : aux_pairs())
      if (x == m.curve.tag && y == m.curve.partner && find_aux_block(w, x, y, m.curve.aux_index)) return 1;
    return std::nullopt;
  }
  try {
    return lickorish_intersection(m.curve.lick, w, g);
  } catch (const NotTabulated&) {
    return std::nullopt;
  }
}

struct VerifyReport {
  bool ok = true;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

inline VerifyReport verify_certificate(const EquivCertificate& cert) {
  auto fail = [](std::string d) { return VerifyReport{false, std::move(d)}; };
  if (cert.steps.size() != cert.moves.size()) return fail("step count does not match move count");
  Word cur = cert.start;
  for (std::size_t k = 0; k < cert.moves.size(); ++k) {
    const TwistMove& m = cert.moves[k];
    auto n = move_intersection(cur, m, cert.genus);
    if (!n) return fail("move " + std::to_string(k) + ": intersection not tabulated");
    if (*n != m.intersection) return fail("move " + std::to_string(k) + ": recorded intersection differs");
    if (m.justification == Justification::i1_square) {
      if (*n != 1 || m.exponent % 2 != 0 || m.exponent == 0)
        return fail("move " + std::to_string(k) + ": i1_square needs intersection 1 and a non-zero even exponent");
    } else {
      if (*n != 2 || std::abs(m.exponent) != 1)
        return fail("move " + std::to_string(k) + ": i2_single needs intersection 2 and exponent +-1");
    }
    auto next = replay_move(cur, m);
    if (!next) return fail("move " + std::to_string(k) + ": auxiliary block not found");
    if (!same_curve(*next, cert.steps[k])) return fail("move " + std::to_string(k) + ": replay differs from recorded word");
    cur = *next;
  }
  if (!is_f_word(cert.end, cert.genus)) return fail("end word is not canonical");
  if (!same_curve(cur, cert.end)) return fail("final word does not match end");
  if (homology_of_word(cert.start, cert.genus) != homology_of_word(cert.end, cert.genus))
    return fail("homology changed");
  return {};
}

class UnsupportedProvenance : public InputError {
 public:
  using InputError::InputError;
};

namespace detail {

inline Word middle_word(const Word& c, int i) {
  Word t;
  for (Letter l : c.letters())
    if (letter_index(l) == i || letter_index(l) == i + 1) t.push(l);
  return t;
}

struct GammaCase {
  Word middle;
  int sign;  // the twist sign the chain starts from
  std::vector<TwistMove> chain;
};

inline TwistMove lick_move(Lickorish k, int i, int e, Justification j = Justification::i1_square) {
  return {TwistCurve::of({k, i}), e, j, j == Justification::i1_square ? 1 : 2};
}
inline TwistMove aux_move(AuxTag x, AuxTag y, int i, int e) {
  return {TwistCurve::aux(x, y, i), e, Justification::i1_square, 1};
}

inline std::vector<GammaCase> gamma_cases(int i) {
  const Letter ai = gen_a(i), bi_ = gen_b(i, -1), aj = gen_a(i + 1), bj_ = gen_b(i + 1, -1);
  using L = Lickorish;
  const auto I2 = Justification::i2_single;
  return {
      {Word{bi_}, 1, {lick_move(L::alpha, i, -2)}},
      {Word{ai, bi_}, 1, {}},
      {Word{bi_, aj}, -1, {}},
      {Word{ai, bi_, aj}, -1, {lick_move(L::alpha, i, 2)}},
      {Word{bj_}, -1, {lick_move(L::beta, i, -2), lick_move(L::alpha, i, -1, I2), lick_move(L::beta, i, -2)}},
      {Word{aj, bj_},
       -1,
       {lick_move(L::beta, i, -2), lick_move(L::alpha, i, -1, I2), lick_move(L::beta, i, -2),
        lick_move(L::alpha, i + 1, 2)}},
      {Word{ai, bj_},
       1,
       {aux_move(AuxTag::A, AuxTag::B, i, -2), aux_move(AuxTag::C, AuxTag::D, i, -2),
        lick_move(L::alpha, i + 1, -2)}},
      {Word{ai, aj, bj_}, 1, {aux_move(AuxTag::A, AuxTag::Bp, i, -2), aux_move(AuxTag::C, AuxTag::Dp, i, -2)}},
  };
}

}  // namespace detail

// Certificate that tau^eps(c) is equivalent to a canonical word, for c canonical.
inline EquivCertificate normalize_to_F(const Word& c, const TwistGen& tau, int eps, int g) {
  if (c.max_index() > g || homology_of_word(c, g).is_zero() || !is_f_word(c, g)) throw UnsupportedProvenance("start curve " + c.str() + " is not canonical");
  if (eps != 1 && eps != -1) throw UnsupportedProvenance("twist exponent must be +-1");
  if (tau.index < 1 || tau.index > (tau.kind == Lickorish::gamma ? g - 1 : g))
    throw UnsupportedProvenance("twist " + tau.name() + " does not exist at genus " + std::to_string(g));

  EquivCertificate cert;
  cert.genus = g;
  cert.start = apply_twist(c, tau, eps);
  Word cur = cert.start;
  auto push = [&](const TwistMove& m) {
    auto n = replay_move(cur, m);
    if (!n) throw std::logic_error("normalization chain broke at " + m.curve.name());
    cert.moves.push_back(m);
    cert.steps.push_back(*n);
    cur = *n;
  };
  auto finish = [&] {
    auto f = as_f_word(cur, g);
    if (!f) throw std::logic_error("normalization of " + c.str() + " under " + tau.name() + " ended off the family");
    cert.end = *f;
    return cert;
  };

  const int n = lickorish_intersection(tau, c, g);
  if (n == 0) return finish();
  if (tau.kind != Lickorish::gamma) {
    // exactly one of tau^{+1}(c), tau^{-1}(c) is canonical
    if (!as_f_word(cur, g)) push(detail::lick_move(tau.kind, tau.index, -2 * eps));
    return finish();
  }
  if (n == 2) {
    push(detail::lick_move(Lickorish::gamma, tau.index, -eps, Justification::i2_single));
    return finish();
  }
  const Word t = detail::middle_word(c, tau.index);
  for (const auto& gc : detail::gamma_cases(tau.index)) {
    if (gc.middle != t) continue;
    if (gc.sign != eps) push(detail::lick_move(Lickorish::gamma, tau.index, 2 * gc.sign));
    for (const auto& m : gc.chain) push(m);
    return finish();
  }
  throw std::logic_error("middle word " + t.str() + " missing from the case table");
}

// Basis element of a non-separating catalog curve: its class with the arrow parity.
inline BasisElement skein_class(const CurveCatalogEntry& e, int arrows) {
  if (!e.nonseparating()) throw InputError("skein_class needs a non-separating curve, got " + e.id());
  return BasisElement::nonsep(e.homology(), arrows);
}

}  // namespace skein
