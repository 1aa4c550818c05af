#include "qua/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace qua {

namespace {

int g_param_count = 4;

int nv() { return 1 + g_param_count; }

Mono mono_unit() { return Mono(nv(), 0); }

long mono_degree(const Mono& m) {
  long d = 0;
  for (int32_t e : m) d += e;
  return d;
}

// Descending graded-lex comparator for term maps.
struct MonoDesc {
  bool operator()(const Mono& a, const Mono& b) const {
    return mono_graded_lex_less(b, a);
  }
};

void check_compatible(const Poly& a, const Poly& b) {
  if (!a.t.empty() && !b.t.empty() && a.nvars() != b.nvars())
    throw std::logic_error("parameter context mismatch between polynomial values");
}

Poly from_map(std::map<Mono, mpz_class, MonoDesc>&& acc) {
  Poly r;
  r.t.reserve(acc.size());
  for (auto& kv : acc)
    if (kv.second != 0) r.t.emplace_back(kv.first, kv.second);
  return r;
}

Poly pos_normalize(Poly a) {
  if (!a.t.empty() && a.t[0].second < 0)
    for (auto& tm : a.t) tm.second = -tm.second;
  return a;
}

mpz_class icontent(const Poly& a) {
  mpz_class g = 0;
  for (const auto& tm : a.t) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), tm.second.get_mpz_t());
  return g;
}

int deg_v(const Poly& a, int v) {
  int d = 0;
  for (const auto& tm : a.t) d = std::max(d, static_cast<int>(tm.first[v]));
  return d;
}

// Coefficient of v^k, with the v-exponent zeroed out.
Poly coeff_v(const Poly& a, int v, int k) {
  std::map<Mono, mpz_class, MonoDesc> acc;
  for (const auto& tm : a.t)
    if (tm.first[v] == k) {
      Mono m = tm.first;
      m[v] = 0;
      acc[m] += tm.second;
    }
  return from_map(std::move(acc));
}

Poly shift_v(const Poly& a, int v, int k) {
  Poly r = a;
  for (auto& tm : r.t) tm.first[v] += k;
  std::sort(r.t.begin(), r.t.end(), [](const auto& x, const auto& y) {
    return mono_graded_lex_less(y.first, x.first);
  });
  return r;
}

Poly gcd_rec(const Poly& A, const Poly& B);

Poly cont_v(const Poly& a, int v) {
  Poly g = poly_zero();
  int d = deg_v(a, v);
  for (int k = 0; k <= d; ++k) {
    Poly c = coeff_v(a, v, k);
    if (!c.is_zero()) g = gcd_rec(g, c);
    if (g.is_one()) break;
  }
  return g;
}

// Any lc(B)-multiple of the pseudo-remainder of A by B with respect to v;
// the caller re-primitivizes, so the exact lc power is irrelevant.
Poly prem_v(const Poly& A, const Poly& B, int v) {
  Poly R = A;
  const int dB = deg_v(B, v);
  const Poly lB = coeff_v(B, v, dB);
  int guard = 0;
  while (!R.is_zero() && deg_v(R, v) >= dB) {
    const int dR = deg_v(R, v);
    const Poly lR = coeff_v(R, v, dR);
    R = poly_sub(poly_mul(lB, R), poly_mul(shift_v(lR, v, dR - dB), B));
    if (++guard > 20000) throw std::logic_error("pseudo-remainder did not terminate");
  }
  return R;
}

Poly gcd_rec(const Poly& A, const Poly& B) {
  if (A.is_zero()) return pos_normalize(B);
  if (B.is_zero()) return pos_normalize(A);
  check_compatible(A, B);
  if (A.is_constant() || B.is_constant()) {
    mpz_class g;
    mpz_class ca = icontent(A), cb = icontent(B);
    mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    return poly_const(g);
  }
  if (A.t.size() == 1 && B.t.size() == 1) {
    Mono m(A.t[0].first.size(), 0);
    for (size_t v = 0; v < m.size(); ++v)
      m[v] = std::min(A.t[0].first[v], B.t[0].first[v]);
    mpz_class g;
    mpz_class ca = abs(A.t[0].second), cb = abs(B.t[0].second);
    mpz_gcd(g.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    return poly_mono(m, g);
  }
  int v = -1;
  for (int i = 0; i < A.nvars(); ++i)
    if (deg_v(A, i) > 0 || deg_v(B, i) > 0) {
      v = i;
      break;
    }
  if (v < 0) throw std::logic_error("unreachable: no main variable");
  if (deg_v(A, v) == 0) return gcd_rec(A, cont_v(B, v));
  if (deg_v(B, v) == 0) return gcd_rec(cont_v(A, v), B);

  const Poly cA = cont_v(A, v), cB = cont_v(B, v);
  Poly pA = poly_divexact(A, cA), pB = poly_divexact(B, cB);
  if (deg_v(pA, v) < deg_v(pB, v)) std::swap(pA, pB);
  int guard = 0;
  while (!pB.is_zero()) {
    if (deg_v(pB, v) == 0) {
      pA = poly_const(1);
      break;
    }
    Poly R = prem_v(pA, pB, v);
    if (!R.is_zero()) R = poly_divexact(R, cont_v(R, v));
    pA = std::move(pB);
    pB = std::move(R);
    if (++guard > 20000) throw std::logic_error("gcd remainder sequence did not terminate");
  }
  return pos_normalize(poly_mul(gcd_rec(cA, cB), pA));
}

}  // namespace

int param_count() { return g_param_count; }

void set_param_count(int p) {
  if (p < 0 || p > 32) throw std::invalid_argument("parameter count out of range");
  g_param_count = p;
}

bool mono_graded_lex_less(const Mono& a, const Mono& b) {
  const long da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool Poly::is_one() const {
  return t.size() == 1 && t[0].second == 1 && mono_degree(t[0].first) == 0;
}

bool Poly::is_constant() const {
  return t.empty() || (t.size() == 1 && mono_degree(t[0].first) == 0);
}

Poly poly_zero() { return Poly{}; }

Poly poly_const(const mpz_class& c) {
  Poly r;
  if (c != 0) r.t.emplace_back(mono_unit(), c);
  return r;
}

Poly poly_mono(Mono m, const mpz_class& c) {
  if (static_cast<int>(m.size()) != nv())
    throw std::logic_error("monomial arity does not match parameter context");
  for (int32_t e : m)
    if (e < 0) throw std::logic_error("negative exponent in polynomial monomial");
  Poly r;
  if (c != 0) r.t.emplace_back(std::move(m), c);
  return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
  check_compatible(a, b);
  Poly r;
  r.t.reserve(a.t.size() + b.t.size());
  size_t i = 0, j = 0;
  while (i < a.t.size() && j < b.t.size()) {
    if (a.t[i].first == b.t[j].first) {
      mpz_class c = a.t[i].second + b.t[j].second;
      if (c != 0) r.t.emplace_back(a.t[i].first, std::move(c));
      ++i, ++j;
    } else if (mono_graded_lex_less(b.t[j].first, a.t[i].first)) {
      r.t.push_back(a.t[i++]);
    } else {
      r.t.push_back(b.t[j++]);
    }
  }
  while (i < a.t.size()) r.t.push_back(a.t[i++]);
  while (j < b.t.size()) r.t.push_back(b.t[j++]);
  return r;
}

Poly poly_neg(const Poly& a) {
  Poly r = a;
  for (auto& tm : r.t) tm.second = -tm.second;
  return r;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_mul(const Poly& a, const Poly& b) {
  check_compatible(a, b);
  if (a.is_zero() || b.is_zero()) return poly_zero();
  std::map<Mono, mpz_class, MonoDesc> acc;
  for (const auto& ta : a.t)
    for (const auto& tb : b.t) {
      Mono m = ta.first;
      for (size_t v = 0; v < m.size(); ++v) m[v] += tb.first[v];
      acc[std::move(m)] += ta.second * tb.second;
    }
  return from_map(std::move(acc));
}

Poly poly_pow(const Poly& a, unsigned k) {
  Poly r = poly_const(1);
  Poly base = a;
  while (k) {
    if (k & 1u) r = poly_mul(r, base);
    k >>= 1u;
    if (k) base = poly_mul(base, base);
  }
  return r;
}

Poly poly_divexact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::logic_error("exact division by zero polynomial");
  check_compatible(a, b);
  if (b.is_one()) return a;
  Poly q;
  Poly r = a;
  int guard = 0;
  while (!r.is_zero()) {
    const auto& ltr = r.t[0];
    const auto& ltb = b.t[0];
    Mono m = ltr.first;
    for (size_t v = 0; v < m.size(); ++v) {
      m[v] -= ltb.first[v];
      if (m[v] < 0) throw std::logic_error("inexact polynomial division");
    }
    mpz_class c, rem;
    mpz_tdiv_qr(c.get_mpz_t(), rem.get_mpz_t(), ltr.second.get_mpz_t(),
                ltb.second.get_mpz_t());
    if (rem != 0) throw std::logic_error("inexact polynomial division");
    Poly term;
    term.t.emplace_back(std::move(m), std::move(c));
    q = poly_add(q, term);
    r = poly_sub(r, poly_mul(term, b));
    if (++guard > 100000) throw std::logic_error("division did not terminate");
  }
  return q;
}

Poly poly_gcd(const Poly& a, const Poly& b) { return gcd_rec(a, b); }

std::optional<Poly> poly_sqrt(const Poly& a) {
  if (a.is_zero()) return poly_zero();
  // Leading term must itself be a square.
  Mono lm = a.t[0].first;
  for (auto& e : lm) {
    if (e % 2 != 0) return std::nullopt;
    e /= 2;
  }
  if (a.t[0].second < 0) return std::nullopt;
  mpz_class lc, lcrem;
  mpz_sqrtrem(lc.get_mpz_t(), lcrem.get_mpz_t(), a.t[0].second.get_mpz_t());
  if (lcrem != 0) return std::nullopt;
  Poly s0;
  s0.t.emplace_back(std::move(lm), lc);
  Poly s = s0;
  Poly twice_s0 = poly_mul(poly_const(2), s0);
  size_t guard = 4 * a.t.size() + 16;
  while (true) {
    Poly r = poly_sub(a, poly_mul(s, s));
    if (r.is_zero()) return s;
    // Next term of the root: lt(r) / (2 lt(s0)), which must divide exactly
    // and be strictly smaller than the last term added.
    const auto& ltr = r.t[0];
    const auto& ltd = twice_s0.t[0];
    Mono m = ltr.first;
    for (size_t v = 0; v < m.size(); ++v) {
      m[v] -= ltd.first[v];
      if (m[v] < 0) return std::nullopt;
    }
    mpz_class c, rem;
    mpz_tdiv_qr(c.get_mpz_t(), rem.get_mpz_t(), ltr.second.get_mpz_t(),
                ltd.second.get_mpz_t());
    if (rem != 0) return std::nullopt;
    if (!mono_graded_lex_less(m, s.t.back().first)) return std::nullopt;
    Poly term;
    term.t.emplace_back(std::move(m), std::move(c));
    s = poly_add(s, term);
    if (guard-- == 0) return std::nullopt;
  }
}

namespace {

// Print one variable power: u as q^(a/2), d_j as cj^(a/2); a may be negative.
void var_power_str(std::ostream& os, int v, long a) {
  const std::string name = v == 0 ? "q" : "c" + std::to_string(v);
  if (a % 2 == 0) {
    long k = a / 2;
    if (k == 0) return;
    os << name;
    if (k != 1) os << "^" << k;
  } else {
    os << name << "^(" << a << "/2)";
  }
}

void term_str(std::ostream& os, const Mono& m, const mpz_class& c_abs) {
  bool printed = false;
  if (c_abs != 1 || mono_degree(m) == 0) {
    os << c_abs.get_str();
    printed = true;
  }
  for (size_t v = 0; v < m.size(); ++v) {
    if (m[v] == 0) continue;
    if (printed) os << "*";
    var_power_str(os, static_cast<int>(v), m[v]);
    printed = true;
  }
}

}  // namespace

std::string poly_str(const Poly& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& tm : a.t) {
    const bool neg = tm.second < 0;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    term_str(os, tm.first, abs(tm.second));
  }
  return os.str();
}

Scalar::Scalar() : num_(poly_zero()), den_(poly_const(1)) {}

Scalar Scalar::from_int(long v) { return from_mpz(mpz_class(v)); }

Scalar Scalar::from_mpz(const mpz_class& v) {
  Scalar s;
  s.num_ = poly_const(v);
  return s;
}

Scalar Scalar::q() { return q_half_pow(2); }

Scalar Scalar::q_pow(int a) { return q_half_pow(2 * a); }

Scalar Scalar::q_half_pow(int a) {
  Mono m = mono_unit();
  Scalar s;
  if (a >= 0) {
    m[0] = a;
    s.num_ = poly_mono(m, 1);
  } else {
    m[0] = -a;
    s.num_ = poly_const(1);
    s.den_ = poly_mono(m, 1);
  }
  return s;
}

Scalar Scalar::param(int j) { return param_half_pow(j, 2); }

Scalar Scalar::param_half_pow(int j, int a) {
  if (j < 1 || j > g_param_count)
    throw std::invalid_argument("parameter index out of range");
  Mono m = mono_unit();
  Scalar s;
  if (a >= 0) {
    m[j] = a;
    s.num_ = poly_mono(m, 1);
  } else {
    m[j] = -a;
    s.num_ = poly_const(1);
    s.den_ = poly_mono(m, 1);
  }
  return s;
}

Scalar Scalar::make(Poly num, Poly den) {
  if (den.is_zero()) throw math_error("zero denominator");
  Scalar s;
  if (num.is_zero()) return s;
  Poly g = poly_gcd(num, den);
  if (!g.is_one()) {
    num = poly_divexact(num, g);
    den = poly_divexact(den, g);
  }
  if (den.t[0].second < 0) {
    num = poly_neg(num);
    den = poly_neg(den);
  }
  s.num_ = std::move(num);
  s.den_ = std::move(den);
  return s;
}

bool Scalar::is_one() const { return num_.is_one() && den_.is_one(); }

namespace {

int poly_cmp(const Poly& a, const Poly& b) {
  const size_t n = std::min(a.t.size(), b.t.size());
  for (size_t i = 0; i < n; ++i) {
    if (a.t[i].first != b.t[i].first)
      return mono_graded_lex_less(a.t[i].first, b.t[i].first) ? -1 : 1;
    int c = cmp(a.t[i].second, b.t[i].second);
    if (c != 0) return c;
  }
  if (a.t.size() != b.t.size()) return a.t.size() < b.t.size() ? -1 : 1;
  return 0;
}

}  // namespace

bool Scalar::operator<(const Scalar& o) const {
  int c = poly_cmp(num_, o.num_);
  if (c != 0) return c < 0;
  return poly_cmp(den_, o.den_) < 0;
}

Scalar Scalar::operator+(const Scalar& o) const {
  return make(poly_add(poly_mul(num_, o.den_), poly_mul(o.num_, den_)),
              poly_mul(den_, o.den_));
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator-() const {
  Scalar s = *this;
  s.num_ = poly_neg(s.num_);
  return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
  return make(poly_mul(num_, o.num_), poly_mul(den_, o.den_));
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inv(); }

Scalar Scalar::inv() const {
  if (is_zero()) throw math_error("division by zero");
  return make(den_, num_);
}

Scalar Scalar::pow(int a) const {
  if (a == 0) return one();
  if (a < 0) return inv().pow(-a);
  return make(poly_pow(num_, static_cast<unsigned>(a)),
              poly_pow(den_, static_cast<unsigned>(a)));
}

std::string Scalar::str() const {
  if (den_.is_one()) return poly_str(num_);
  return "(" + poly_str(num_) + ")/(" + poly_str(den_) + ")";
}

// ---------------------------------------------------------------------------
// Literal parser.

namespace {

struct Lexer {
  const std::string& s;
  size_t pos = 0;

  explicit Lexer(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  char get() {
    char c = peek();
    if (pos < s.size()) ++pos;
    return c;
  }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("scalar parse error at position " +
                                std::to_string(pos) + ": " + what);
  }
  mpz_class integer() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    return mpz_class(s.substr(start, pos - start));
  }
  long small_integer() {
    mpz_class v = integer();
    if (!v.fits_slong_p()) fail("exponent too large");
    return v.get_si();
  }
};

struct Parser {
  Lexer lx;

  explicit Parser(const std::string& text) : lx(text) {}

  // exponent := '-'? INT | '(' '-'? INT ('/' '2')? ')'
  // Returns {numerator-of-halves, seen_half}: q^e means u^(2e), q^(a/2) means u^a.
  std::pair<long, bool> exponent() {
    bool neg = false;
    if (lx.eat('(')) {
      if (lx.eat('-')) neg = true;
      long a = lx.small_integer();
      bool half = false;
      if (lx.eat('/')) {
        long d = lx.small_integer();
        if (d != 2) lx.fail("only half powers are supported");
        half = true;
      }
      if (!lx.eat(')')) lx.fail("expected ')'");
      return {neg ? -a : a, half};
    }
    if (lx.eat('-')) neg = true;
    long a = lx.small_integer();
    return {neg ? -a : a, false};
  }

  Scalar base() {
    char c = lx.peek();
    if (c == '(') {
      lx.get();
      Scalar v = expr();
      if (!lx.eat(')')) lx.fail("expected ')'");
      if (lx.peek() == '^') {
        lx.get();
        auto [a, half] = exponent();
        if (half) lx.fail("half powers are only supported on q and parameters");
        return v.pow(static_cast<int>(a));
      }
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mpz_class v = lx.integer();
      Scalar s = Scalar::from_mpz(v);
      if (lx.peek() == '^') {
        lx.get();
        auto [a, half] = exponent();
        if (half) lx.fail("half powers are only supported on q and parameters");
        return s.pow(static_cast<int>(a));
      }
      return s;
    }
    if (c == 'q') {
      lx.get();
      if (lx.peek() == '^') {
        lx.get();
        auto [a, half] = exponent();
        return half ? Scalar::q_half_pow(static_cast<int>(a))
                    : Scalar::q_pow(static_cast<int>(a));
      }
      return Scalar::q();
    }
    if (c == 'c') {
      lx.get();
      long j = lx.small_integer();
      if (lx.peek() == '^') {
        lx.get();
        auto [a, half] = exponent();
        return half ? Scalar::param_half_pow(static_cast<int>(j), static_cast<int>(a))
                    : Scalar::param_half_pow(static_cast<int>(j), 2 * static_cast<int>(a));
      }
      return Scalar::param(static_cast<int>(j));
    }
    lx.fail("expected a value");
  }

  Scalar factor() {
    if (lx.eat('-')) return -factor();
    return base();
  }

  Scalar term() {
    Scalar v = factor();
    while (true) {
      char c = lx.peek();
      if (c == '*') {
        lx.get();
        v = v * factor();
      } else if (c == '/') {
        lx.get();
        v = v / factor();
      } else {
        return v;
      }
    }
  }

  Scalar expr() {
    Scalar v = term();
    while (true) {
      char c = lx.peek();
      if (c == '+') {
        lx.get();
        v = v + term();
      } else if (c == '-') {
        lx.get();
        v = v - term();
      } else {
        return v;
      }
    }
  }

  Scalar run() {
    Scalar v = expr();
    if (lx.peek() != '\0') lx.fail("trailing input");
    return v;
  }
};

}  // namespace

Scalar parse_scalar(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Toral tower.

ToralScalar::ToralScalar() : de(g_param_count, 0) {}

ToralScalar ToralScalar::one() { return ToralScalar(); }

ToralScalar ToralScalar::minus_one() {
  ToralScalar t;
  t.sign = -1;
  return t;
}

ToralScalar ToralScalar::q_half_pow(int a) {
  ToralScalar t;
  t.ue = a;
  return t;
}

ToralScalar ToralScalar::param_half_pow(int j, int a) {
  if (j < 1 || j > g_param_count)
    throw std::invalid_argument("parameter index out of range");
  ToralScalar t;
  t.de[j - 1] = a;
  return t;
}

ToralScalar ToralScalar::mul(const ToralScalar& o) const {
  if (de.size() != o.de.size())
    throw std::logic_error("parameter context mismatch between toral values");
  ToralScalar t = *this;
  t.sign *= o.sign;
  t.ue += o.ue;
  for (size_t i = 0; i < de.size(); ++i) t.de[i] += o.de[i];
  return t;
}

ToralScalar ToralScalar::inv() const { return pow(-1); }

ToralScalar ToralScalar::pow(int a) const {
  ToralScalar t = *this;
  t.sign = (a % 2 == 0) ? 1 : sign;
  t.ue = ue * a;
  for (auto& e : t.de) e *= a;
  return t;
}

ToralScalar ToralScalar::negated() const {
  ToralScalar t = *this;
  t.sign = -t.sign;
  return t;
}

bool ToralScalar::is_one() const {
  if (sign != 1 || ue != 0) return false;
  return std::all_of(de.begin(), de.end(), [](int32_t e) { return e == 0; });
}

bool ToralScalar::operator<(const ToralScalar& o) const {
  if (sign != o.sign) return sign < o.sign;
  if (ue != o.ue) return ue < o.ue;
  return de < o.de;
}

Scalar ToralScalar::to_scalar() const {
  Mono mn = mono_unit(), md = mono_unit();
  if (ue >= 0)
    mn[0] = ue;
  else
    md[0] = -ue;
  for (size_t j = 0; j < de.size(); ++j) {
    if (de[j] >= 0)
      mn[j + 1] = de[j];
    else
      md[j + 1] = -de[j];
  }
  return Scalar::make(poly_mono(mn, sign), poly_mono(md, 1));
}

std::string ToralScalar::str() const {
  std::ostringstream os;
  if (sign < 0) os << "-";
  bool printed = false;
  for (size_t v = 0; v < de.size() + 1; ++v) {
    long a = v == 0 ? ue : de[v - 1];
    if (a == 0) continue;
    if (printed) os << "*";
    var_power_str(os, static_cast<int>(v), a);
    printed = true;
  }
  if (!printed) os << "1";
  return os.str();
}

std::optional<ToralScalar> as_toral(const Scalar& s) {
  if (s.is_zero()) return std::nullopt;
  const Poly& n = s.num();
  const Poly& d = s.den();
  if (n.t.size() != 1 || d.t.size() != 1) return std::nullopt;
  const mpz_class& nc = n.t[0].second;
  if (nc != 1 && nc != -1) return std::nullopt;
  if (d.t[0].second != 1) return std::nullopt;
  ToralScalar t;
  t.sign = nc < 0 ? -1 : 1;
  t.de.assign(n.t[0].first.size() - 1, 0);
  t.ue = n.t[0].first[0] - d.t[0].first[0];
  for (size_t j = 1; j < n.t[0].first.size(); ++j)
    t.de[j - 1] = n.t[0].first[j] - d.t[0].first[j];
  return t;
}

ToralScalar toral_sqrt(const ToralScalar& s) {
  if (s.sign < 0) throw math_error("square root requires quadratic extension");
  if (s.ue % 2 != 0) throw math_error("square root requires quadratic extension");
  for (int32_t e : s.de)
    if (e % 2 != 0) throw math_error("square root requires quadratic extension");
  ToralScalar t = s;
  t.ue /= 2;
  for (auto& e : t.de) e /= 2;
  return t;
}

Scalar scalar_sqrt_perfect(const Scalar& s) {
  auto n = poly_sqrt(s.num());
  if (!n) throw math_error("value is not a perfect square");
  auto d = poly_sqrt(s.den());
  if (!d) throw math_error("value is not a perfect square");
  return Scalar::make(*n, *d);
}

Scalar qint(int k) {
  Scalar num = Scalar::q_pow(k) - Scalar::q_pow(-k);
  return num / q_minus_qinv();
}

Scalar qbracket(const Scalar& K, int j) {
  Scalar num = Scalar::q_pow(j) * K - Scalar::q_pow(-j) * K.inv();
  return num / q_minus_qinv();
}

Scalar q_minus_qinv() { return Scalar::q() - Scalar::q_pow(-1); }

}  // namespace qua
