#pragma once

// Exact scalar arithmetic for the engine: the field Q(u, d_1..d_p) with the
// conventions q = u^2 and c_j = d_j^2, so that q^(1/2) and c_j^(1/2) exist in
// the tower.  Values are canonical fractions of integer polynomials; equality
// is structural and doubles as the zero test.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qua {

// Raised for semantic math failures (division by zero, non-square square
// roots, proportionality failures, ...).  Grammar problems raise
// std::invalid_argument; engine invariant violations raise std::logic_error.
class math_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of formal parameters c_1..c_p.  Fixed once per session; tests may
// reset it between fixtures, which invalidates values created earlier.
int param_count();
void set_param_count(int p);

// Monomial exponents: index 0 is u, indices 1..p are d_1..d_p.
using Mono = std::vector<int32_t>;

// Integer multivariate polynomial, terms sorted descending in graded-lex
// order on the exponent vectors, no zero coefficients.
struct Poly {
  std::vector<std::pair<Mono, mpz_class>> t;

  bool is_zero() const { return t.empty(); }
  bool is_one() const;
  bool is_constant() const;
  int nvars() const { return t.empty() ? 0 : static_cast<int>(t[0].first.size()); }
  bool operator==(const Poly& o) const { return t == o.t; }
};

bool mono_graded_lex_less(const Mono& a, const Mono& b);

Poly poly_zero();
Poly poly_const(const mpz_class& c);
Poly poly_mono(Mono m, const mpz_class& c);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, unsigned k);
// Exact division; throws std::logic_error if the division is not exact.
Poly poly_divexact(const Poly& a, const Poly& b);
// Full gcd over Z[u,d..], including integer content, with positive leading
// coefficient in graded-lex order.  gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);
// Exact polynomial square root, or nullopt when a is not a perfect square.
std::optional<Poly> poly_sqrt(const Poly& a);
std::string poly_str(const Poly& a);

// Canonical fraction num/den: den nonzero, gcd(num, den) = 1 (including
// integer content), leading coefficient of den positive.  Zero is 0/1.
class Scalar {
 public:
  Scalar();  // zero
  static Scalar from_int(long v);
  static Scalar from_mpz(const mpz_class& v);
  static Scalar one() { return from_int(1); }
  static Scalar q();                      // u^2
  static Scalar q_pow(int a);             // q^a
  static Scalar q_half_pow(int a);        // u^a, i.e. q^(a/2)
  static Scalar param(int j);             // c_j = d_j^2, 1-based
  static Scalar param_half_pow(int j, int a);  // d_j^a, i.e. c_j^(a/2)
  static Scalar make(Poly num, Poly den);      // canonicalizes; den != 0

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;

  bool operator==(const Scalar& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  // Arbitrary strict total order (for canonical containers).
  bool operator<(const Scalar& o) const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator-() const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // throws math_error on zero
  Scalar inv() const;                       // throws math_error on zero
  Scalar pow(int a) const;

  std::string str() const;

 private:
  Poly num_, den_;
};

// Literal grammar: integers, q, q^a, q^(a/2), c1..cp with the same powers,
// +, -, *, /, parentheses.  q^(1/2) elevates to u, c1^(1/2) to d_1.
Scalar parse_scalar(const std::string& text);

// Sign * u^ue * prod_j d_j^de[j]: the subgroup where module weights live.
struct ToralScalar {
  int sign = 1;             // +1 or -1
  int32_t ue = 0;           // exponent of u (q^(ue/2))
  std::vector<int32_t> de;  // exponents of d_j, size param_count()

  ToralScalar();
  static ToralScalar one();
  static ToralScalar minus_one();
  static ToralScalar q_half_pow(int a);
  static ToralScalar param_half_pow(int j, int a);

  ToralScalar mul(const ToralScalar& o) const;
  ToralScalar inv() const;
  ToralScalar pow(int a) const;
  ToralScalar negated() const;
  bool is_one() const;
  bool operator==(const ToralScalar& o) const {
    return sign == o.sign && ue == o.ue && de == o.de;
  }
  bool operator!=(const ToralScalar& o) const { return !(*this == o); }
  bool operator<(const ToralScalar& o) const;

  Scalar to_scalar() const;
  std::string str() const;
};

// Recognize a Scalar as toral, if it is one.
std::optional<ToralScalar> as_toral(const Scalar& s);
// Square root within the toral tower; throws math_error("requires quadratic
// extension") when the value is not a perfect square there.
ToralScalar toral_sqrt(const ToralScalar& s);
// Square root of a Scalar that is a perfect square of a field element
// (used for discriminants); throws math_error otherwise.
Scalar scalar_sqrt_perfect(const Scalar& s);

// Quantum integer [k] = (q^k - q^-k)/(q - q^-1).
Scalar qint(int k);
// Bracket [K; j] = (q^j K - q^-j K^-1)/(q - q^-1) for invertible K.
Scalar qbracket(const Scalar& K, int j);
// q - q^-1, the ubiquitous normalizer.
Scalar q_minus_qinv();

}  // namespace qua
