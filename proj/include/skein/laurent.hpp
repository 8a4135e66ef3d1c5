#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace skein {

using Q = mpq_class;

class ArithmeticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Laurent polynomial in A with exact rational coefficients.
class LaurentPoly {
 public:
  using Terms = std::map<int, Q>;

  LaurentPoly() = default;
  LaurentPoly(long c) { set(0, Q(c)); }  // NOLINT(google-explicit-constructor)
  LaurentPoly(const Q& c) { set(0, c); }  // NOLINT(google-explicit-constructor)

  static LaurentPoly monomial(int e, const Q& c = 1) {
    LaurentPoly p;
    p.set(e, c);
    return p;
  }
  static LaurentPoly A(int e = 1) { return monomial(e, 1); }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  int min_exp() const { return t_.empty() ? 0 : t_.begin()->first; }
  int max_exp() const { return t_.empty() ? 0 : t_.rbegin()->first; }
  int span() const { return max_exp() - min_exp(); }
  Q coeff(int e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Q(0) : it->second;
  }
  Q lead() const { return t_.empty() ? Q(0) : t_.rbegin()->second; }
  Q low() const { return t_.empty() ? Q(0) : t_.begin()->second; }
  bool is_monomial() const { return t_.size() == 1; }
  bool is_one() const { return t_.size() == 1 && t_.begin()->first == 0 && t_.begin()->second == 1; }

  void set(int e, const Q& c) {
    if (c == 0)
      t_.erase(e);
    else
      t_[e] = c;
  }
  void add_term(int e, const Q& c) {
    if (c == 0) return;
    auto [it, fresh] = t_.try_emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) t_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.t_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
  }
  LaurentPoly& operator*=(const Q& c) {
    if (c == 0) {
      t_.clear();
      return *this;
    }
    for (auto& [e, v] : t_) v *= c;
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator-(LaurentPoly a) {
    for (auto& [e, v] : a.t_) v = -v;
    return a;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [e1, c1] : a.t_)
      for (const auto& [e2, c2] : b.t_) r.add_term(e1 + e2, c1 * c2);
    return r;
  }
  friend LaurentPoly operator*(LaurentPoly a, const Q& c) { return a *= c; }
  friend LaurentPoly operator*(const Q& c, LaurentPoly a) { return a *= c; }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
  friend bool operator<(const LaurentPoly& a, const LaurentPoly& b) {
    return std::lexicographical_compare(a.t_.begin(), a.t_.end(), b.t_.begin(), b.t_.end(),
                                        [](const auto& x, const auto& y) {
                                          if (x.first != y.first) return x.first < y.first;
                                          return x.second < y.second;
                                        });
  }

  LaurentPoly shifted(int k) const {
    LaurentPoly r;
    for (const auto& [e, c] : t_) r.t_.emplace(e + k, c);
    return r;
  }
  // A -> A^-1
  LaurentPoly mirrored() const {
    LaurentPoly r;
    for (const auto& [e, c] : t_) r.t_.emplace(-e, c);
    return r;
  }
  LaurentPoly pow(unsigned n) const {
    LaurentPoly r(1), b = *this;
    while (n) {
      if (n & 1u) r *= b;
      n >>= 1u;
      if (n) b *= b;
    }
    return r;
  }

  Q eval(const Q& a) const {
    if (a == 0 && !t_.empty() && min_exp() < 0) throw ArithmeticError("evaluation of negative power at A=0");
    Q r = 0;
    for (const auto& [e, c] : t_) r += c * qpow(a, e);
    return r;
  }

  static Q qpow(const Q& a, int e) {
    Q r = 1, b = a;
    if (e < 0) {
      b = 1 / a;
      e = -e;
    }
    while (e) {
      if (e & 1) r *= b;
      e >>= 1;
      if (e) b *= b;
    }
    return r;
  }

  std::string str() const;
  static LaurentPoly parse(std::string_view s);

 private:
  Terms t_;
};

inline LaurentPoly brace(int n) { return LaurentPoly::A(n) - LaurentPoly::A(-n); }

namespace detail {

inline std::string qstr(const Q& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_str();
}

// Division of ordinary polynomials stored with min exponent 0.
inline void poly_divmod(const LaurentPoly& a, const LaurentPoly& b, LaurentPoly& q, LaurentPoly& r) {
  if (b.is_zero()) throw ArithmeticError("polynomial division by zero");
  q = LaurentPoly();
  r = a;
  const int db = b.max_exp();
  const Q lb = b.lead();
  while (!r.is_zero() && r.max_exp() >= db) {
    const int e = r.max_exp() - db;
    const Q c = r.lead() / lb;
    q.add_term(e, c);
    for (const auto& [be, bc] : b.terms()) r.add_term(be + e, -c * bc);
  }
}

inline LaurentPoly to_poly(const LaurentPoly& p) { return p.shifted(-p.min_exp()); }

}  // namespace detail

// Monic polynomial gcd with lowest exponent 0; units A^j are ignored.
inline LaurentPoly gcd(const LaurentPoly& x, const LaurentPoly& y) {
  if (x.is_zero() && y.is_zero()) return LaurentPoly(1);
  LaurentPoly a = detail::to_poly(x), b = detail::to_poly(y);
  if (a.is_zero()) std::swap(a, b);
  while (!b.is_zero()) {
    LaurentPoly q, r;
    detail::poly_divmod(a, b, q, r);
    a = std::move(b);
    b = r.is_zero() ? r : detail::to_poly(r);
    if (!b.is_zero()) b *= Q(1) / b.lead();
  }
  a = detail::to_poly(a);
  a *= Q(1) / a.lead();
  return a;
}

// Exact quotient x / y when y divides x up to nothing (returns nullopt otherwise).
inline std::optional<LaurentPoly> exact_div(const LaurentPoly& x, const LaurentPoly& y) {
  if (y.is_zero()) throw ArithmeticError("division by zero polynomial");
  if (x.is_zero()) return LaurentPoly();
  LaurentPoly q, r;
  detail::poly_divmod(detail::to_poly(x), detail::to_poly(y), q, r);
  if (!r.is_zero()) return std::nullopt;
  return q.shifted(x.min_exp() - y.min_exp());
}

inline std::string LaurentPoly::str() const {
  if (t_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    const int e = it->first;
    Q c = it->second;
    const bool neg = c < 0;
    if (neg) c = -c;
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    std::string var;
    if (e == 1)
      var = "A";
    else if (e != 0)
      var = "A^" + std::to_string(e);
    if (var.empty())
      out += detail::qstr(c);
    else if (c == 1)
      out += var;
    else
      out += detail::qstr(c) + "*" + var;
  }
  return out;
}

inline LaurentPoly LaurentPoly::parse(std::string_view s) {
  std::string src;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) src += ch;
  if (src.empty()) throw ArithmeticError("empty polynomial");
  LaurentPoly p;
  std::size_t i = 0;
  auto read_int = [&](bool allow_sign) -> long long {
    std::size_t j = i;
    if (allow_sign && j < src.size() && (src[j] == '-' || src[j] == '+')) ++j;
    std::size_t d = j;
    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
    if (j == d) throw ArithmeticError("expected integer in '" + src + "'");
    long long v = std::stoll(src.substr(i, j - i));
    i = j;
    return v;
  };
  while (i < src.size()) {
    int sign = 1;
    if (src[i] == '+' || src[i] == '-') {
      if (src[i] == '-') sign = -1;
      ++i;
    }
    Q coef = 1;
    bool have_coef = false;
    if (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '/')) ++j;
      coef = Q(src.substr(i, j - i));
      coef.canonicalize();
      i = j;
      have_coef = true;
      if (i < src.size() && src[i] == '*') ++i;
    }
    int e = 0;
    if (i < src.size() && src[i] == 'A') {
      ++i;
      e = 1;
      if (i < src.size() && src[i] == '^') {
        ++i;
        bool paren = i < src.size() && src[i] == '(';
        if (paren) ++i;
        e = static_cast<int>(read_int(true));
        if (paren) {
          if (i >= src.size() || src[i] != ')') throw ArithmeticError("unbalanced exponent in '" + src + "'");
          ++i;
        }
      }
    } else if (!have_coef) {
      throw ArithmeticError("unexpected character in polynomial '" + src + "'");
    }
    p.add_term(e, sign * coef);
    if (i < src.size() && src[i] != '+' && src[i] != '-')
      throw ArithmeticError("unexpected character in polynomial '" + src + "'");
  }
  return p;
}

// Multiset of brace indices k whose {k} was inverted, plus non-brace records.
class BraceLedger {
 public:
  explicit BraceLedger(int kmax = 12) : kmax_(kmax) {}

  int kmax() const { return kmax_; }
  void set_kmax(int k) { kmax_ = k; }
  void add(int k, int times = 1) {
    if (k <= 0) throw ArithmeticError("brace index must be positive");
    counts_[k] += times;
  }
  void add_nonbrace(std::string what) { nonbrace_.push_back(std::move(what)); }
  void merge(const BraceLedger& o) {
    for (const auto& [k, n] : o.counts_) counts_[k] += n;
    nonbrace_.insert(nonbrace_.end(), o.nonbrace_.begin(), o.nonbrace_.end());
  }
  const std::map<int, int>& counts() const { return counts_; }
  const std::vector<std::string>& nonbrace() const { return nonbrace_; }
  bool empty() const { return counts_.empty() && nonbrace_.empty(); }
  std::vector<int> sorted() const {
    std::vector<int> v;
    for (const auto& [k, n] : counts_) v.insert(v.end(), n, k);
    return v;
  }
  int total() const {
    int t = 0;
    for (const auto& [k, n] : counts_) t += n;
    return t;
  }
  // product of {k} over all logged entries
  LaurentPoly product() const {
    LaurentPoly p(1);
    for (const auto& [k, n] : counts_) p *= brace(k).pow(static_cast<unsigned>(n));
    return p;
  }
  friend bool operator==(const BraceLedger& a, const BraceLedger& b) {
    return a.counts_ == b.counts_ && a.nonbrace_ == b.nonbrace_;
  }

 private:
  int kmax_;
  std::map<int, int> counts_;
  std::vector<std::string> nonbrace_;
};

namespace detail {
inline bool factor_rec(const LaurentPoly& p, int kmax, std::vector<int>& out) {
  if (p.is_monomial()) return true;
  if (p.is_zero()) return false;
  for (int k = std::min(kmax, p.span() / 2); k >= 1; --k) {
    auto q = exact_div(p, brace(k));
    if (!q) continue;
    out.push_back(k);
    if (factor_rec(*q, k, out)) return true;
    out.pop_back();
  }
  return false;
}
}  // namespace detail

// Writes p = unit * prod {k_i} with k_i <= kmax, or returns nullopt.
inline std::optional<std::vector<int>> factor_braces(const LaurentPoly& p, int kmax) {
  std::vector<int> ks;
  if (!detail::factor_rec(p, kmax, ks)) return std::nullopt;
  std::sort(ks.begin(), ks.end());
  return ks;
}

class RationalFn {
 public:
  RationalFn() : den_(1) {}
  RationalFn(long c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFn(const Q& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFn(const LaurentPoly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalFn(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw ArithmeticError("zero denominator");
    canonicalize();
  }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }

  friend RationalFn operator+(const RationalFn& x, const RationalFn& y) {
    if (x.den_ == y.den_) {
      if (x.den_.is_one()) return RationalFn(x.num_ + y.num_, Trusted{});
      return RationalFn(x.num_ + y.num_, x.den_);
    }
    return RationalFn(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
  }
  friend RationalFn operator-(const RationalFn& x) { return RationalFn(-x.num_, x.den_, Trusted{}); }
  friend RationalFn operator-(const RationalFn& x, const RationalFn& y) { return x + (-y); }
  friend RationalFn operator*(const RationalFn& x, const RationalFn& y) {
    if (x.is_zero() || y.is_zero()) return RationalFn();
    if (x.den_.is_one() && y.den_.is_one()) return RationalFn(x.num_ * y.num_, Trusted{});
    return RationalFn(x.num_ * y.num_, x.den_ * y.den_);
  }
  RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
  RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
  RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }

  RationalFn inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero: ill-posed relation application");
    return RationalFn(den_, num_);
  }
  // Division without ledger bookkeeping; callers that invert braces must use div().
  friend RationalFn operator/(const RationalFn& x, const RationalFn& y) { return x * y.inverse(); }

  friend bool operator==(const RationalFn& x, const RationalFn& y) { return x.num_ == y.num_ && x.den_ == y.den_; }
  friend bool operator!=(const RationalFn& x, const RationalFn& y) { return !(x == y); }
  // cross-multiplication test, independent of canonical form
  static bool equal_cross(const RationalFn& x, const RationalFn& y) { return x.num_ * y.den_ == y.num_ * x.den_; }
  friend bool operator<(const RationalFn& x, const RationalFn& y) {
    if (x.num_ != y.num_) return x.num_ < y.num_;
    return x.den_ < y.den_;
  }

  RationalFn mirrored() const { return RationalFn(num_.mirrored(), den_.mirrored()); }

  Q eval(const Q& a) const {
    Q d = den_.eval(a);
    if (d == 0) throw ArithmeticError(pole_message(a));
    return num_.eval(a) / d;
  }

  std::string pole_message(const Q& a) const {
    std::string factor = "(" + den_.str() + ")";
    for (int k = 1; k <= 64; ++k) {
      if (brace(k).eval(a) == 0 && exact_div(den_, brace(k))) {
        factor = "{" + std::to_string(k) + "}";
        break;
      }
    }
    return "pole at A=" + detail::qstr(a) + ": denominator factor " + factor;
  }

  std::string str() const {
    if (den_.is_one()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

  static RationalFn parse(std::string_view s) {
    std::string src(s);
    // split at a top-level '/' that follows ')'
    int depth = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      char c = src[i];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == '/' && depth == 0 && i > 0) {
        std::size_t j = i;
        while (j > 0 && std::isspace(static_cast<unsigned char>(src[j - 1]))) --j;
        if (j > 0 && src[j - 1] == ')') {
          return RationalFn(LaurentPoly::parse(strip_parens(src.substr(0, i))),
                            LaurentPoly::parse(strip_parens(src.substr(i + 1))));
        }
      }
    }
    return RationalFn(LaurentPoly::parse(strip_parens(src)));
  }

 private:
  struct Trusted {};
  RationalFn(LaurentPoly num, Trusted) : num_(std::move(num)), den_(1) {}
  RationalFn(LaurentPoly num, LaurentPoly den, Trusted) : num_(std::move(num)), den_(std::move(den)) {}

  static std::string strip_parens(std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return s;
    s = s.substr(b, e - b + 1);
    while (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
      int depth = 0;
      bool wraps = true;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (depth == 0 && i + 1 < s.size()) {
          wraps = false;
          break;
        }
      }
      if (!wraps) break;
      s = s.substr(1, s.size() - 2);
    }
    return s;
  }

  void canonicalize() {
    if (num_.is_zero()) {
      den_ = LaurentPoly(1);
      return;
    }
    if (!den_.is_monomial()) {
      LaurentPoly g = gcd(num_, den_);
      if (!g.is_one()) {
        num_ = *exact_div(num_, g);
        den_ = *exact_div(den_, g);
      }
    }
    const int k = den_.min_exp();
    const Q c = den_.lead();
    num_ = num_.shifted(-k) * (Q(1) / c);
    den_ = den_.shifted(-k) * (Q(1) / c);
  }

  LaurentPoly num_;
  LaurentPoly den_;
};

enum class ArithOp { add, sub, mul, div };

// Field arithmetic; div records the inverted factor of y's numerator in the ledger.
inline RationalFn rf_arith(ArithOp op, const RationalFn& x, const RationalFn& y, BraceLedger& ledger) {
  switch (op) {
    case ArithOp::add:
      return x + y;
    case ArithOp::sub:
      return x - y;
    case ArithOp::mul:
      return x * y;
    case ArithOp::div: {
      if (y.is_zero()) throw ArithmeticError("division by zero: ill-posed relation application");
      if (!y.num().is_monomial()) {
        if (auto ks = factor_braces(y.num(), ledger.kmax()))
          for (int k : *ks) ledger.add(k);
        else
          ledger.add_nonbrace(y.num().str());
      }
      return x / y;
    }
  }
  return x;
}

inline Q rf_eval(const RationalFn& x, const Q& a) { return x.eval(a); }

// True when den divides unit * prod of the ledger braces.
inline bool denominator_covered(const RationalFn& x, const BraceLedger& ledger) {
  if (x.den().is_monomial()) return true;
  return exact_div(ledger.product(), x.den()).has_value();
}

// Brace factorisation of a canonical denominator, when it is a product of braces up to unit
// and cyclotomic cofactors absorbed by a larger brace; reports the multiset used.
inline std::optional<std::vector<int>> covering_braces(const LaurentPoly& den, int kmax) {
  if (den.is_monomial()) return std::vector<int>{};
  if (auto exact = factor_braces(den, kmax)) return exact;
  // smallest multiset of braces whose product is divisible by den (greedy by degree)
  std::vector<int> used;
  LaurentPoly rest = den;
  while (!rest.is_monomial()) {
    bool progressed = false;
    for (int k = 1; k <= kmax; ++k) {
      LaurentPoly g = gcd(rest, brace(k));
      if (!g.is_one()) {
        rest = *exact_div(rest, g);
        used.push_back(k);
        progressed = true;
        break;
      }
    }
    if (!progressed) return std::nullopt;
  }
  std::sort(used.begin(), used.end());
  return used;
}

}  // namespace skein
