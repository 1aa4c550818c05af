#include "doctest.h"
#include "qua/scalar.hpp"

#include <vector>

using namespace qua;

namespace {

// Restores the parameter context when a test changes it.
struct ParamGuard {
  int saved = param_count();
  ~ParamGuard() { set_param_count(saved); }
};

Scalar S(const std::string& text) { return parse_scalar(text); }

}  // namespace

TEST_CASE("quantum integers match closed forms") {
  CHECK(qint(0).is_zero());
  CHECK(qint(1) == Scalar::one());
  CHECK(qint(2) == S("q + q^-1"));
  CHECK(qint(3) == S("q^2 + 1 + q^-2"));
  CHECK(qint(4) == S("q^3 + q + q^-1 + q^-3"));
  for (int k = -6; k <= 6; ++k) {
    CHECK(qint(-k) == -qint(k));
    CHECK(qint(k) * q_minus_qinv() == Scalar::q_pow(k) - Scalar::q_pow(-k));
  }
}

TEST_CASE("bracket shift against power arguments") {
  for (int m = -4; m <= 4; ++m)
    for (int j = -3; j <= 3; ++j)
      CHECK(qbracket(Scalar::q_pow(m), j) == qint(m + j));
  // The bracket of a toral weight stays a ratio of toral data.
  Scalar w = S("c1*q^(1/2)");
  Scalar expect = (Scalar::q() * w - Scalar::q_pow(-1) * w.inv()) / q_minus_qinv();
  CHECK(qbracket(w, 1) == expect);
  CHECK(qbracket(w, 0) * q_minus_qinv() == w - w.inv());
}

TEST_CASE("canonical fractions cancel common factors") {
  CHECK(S("(q^2 - 1)/(q - 1)") == S("q + 1"));
  CHECK(S("(c1^2 - 1)/(c1 - 1)") == S("c1 + 1"));
  CHECK(S("(q*c1 - q)/(c1 - 1)") == Scalar::q());
  CHECK(S("(q - q^-1)/(q^(1/2) - q^(-1/2))") == S("q^(1/2) + q^(-1/2)"));
  // Denominator sign is pinned, so equal values collide structurally.
  CHECK(S("1/(1 - q)") == S("-1/(q - 1)"));
  CHECK(S("q^(1/2)*q^(3/2)") == Scalar::q_pow(2));
  CHECK(S("c2^(1/2)*c2^(1/2)") == Scalar::param(2));
}

TEST_CASE("field axioms on a deterministic sample") {
  const std::vector<Scalar> xs = {
      S("0"),          S("1"),
      S("-3"),         S("q"),
      S("q^-2"),       S("q^(1/2) - q^(-1/2)"),
      S("c1 + q"),     S("(c2 - q^2)/(q + 1)"),
      S("c3*q^(3/2)"), S("(c1*c4 - 1)/(q - q^-1)"),
  };
  for (const auto& a : xs)
    for (const auto& b : xs) {
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK(a - b == -(b - a));
      if (!b.is_zero()) CHECK((a / b) * b == a);
    }
  for (const auto& a : xs)
    for (const auto& b : xs)
      for (const auto& c : xs) {
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
      }
  for (const auto& a : xs) {
    CHECK(a + Scalar() == a);
    CHECK(a * Scalar::one() == a);
    CHECK((a - a).is_zero());
    if (!a.is_zero()) {
      CHECK(a * a.inv() == Scalar::one());
      CHECK(a.pow(3) == a * a * a);
      CHECK(a.pow(-2) == (a * a).inv());
    }
  }
}

TEST_CASE("powers and parse round trips") {
  const std::vector<std::string> samples = {
      "0",
      "1",
      "-1",
      "q",
      "q^3",
      "q^-1",
      "q^(1/2)",
      "q^(-3/2)",
      "c1",
      "c2^(1/2)",
      "c4^-2",
      "q + q^-1",
      "(q^2 + c1)/(q - 1)",
      "-c3*q^(1/2) + 2",
  };
  for (const auto& text : samples) {
    Scalar v = S(text);
    CHECK(parse_scalar(v.str()) == v);
  }
  CHECK(Scalar::q_half_pow(1).pow(2) == Scalar::q());
  CHECK(Scalar::param_half_pow(2, 1).pow(2) == Scalar::param(2));
  CHECK(Scalar::q_half_pow(-3) == Scalar::q_half_pow(3).inv());
}

TEST_CASE("perfect square detection") {
  Scalar a = S("(q + 1)/(c1 - q)");
  CHECK(scalar_sqrt_perfect(a * a) * scalar_sqrt_perfect(a * a) == a * a);
  Scalar b = S("q^(1/2) - c2");
  CHECK(scalar_sqrt_perfect(b * b) * scalar_sqrt_perfect(b * b) == b * b);
  CHECK(scalar_sqrt_perfect(Scalar::q()) == Scalar::q_half_pow(1));
  CHECK(scalar_sqrt_perfect(Scalar::from_int(9)) == Scalar::from_int(3));
  CHECK_THROWS_AS(scalar_sqrt_perfect(S("q + 1")), math_error);
  CHECK_THROWS_AS(scalar_sqrt_perfect(S("-1")), math_error);
}

TEST_CASE("toral recognition and square roots") {
  Scalar t = S("-q^(3/2)*c1^-1");
  auto tt = as_toral(t);
  REQUIRE(tt.has_value());
  CHECK(tt->sign == -1);
  CHECK(tt->ue == 3);
  CHECK(tt->de[0] == -2);
  CHECK(tt->to_scalar() == t);
  CHECK(parse_scalar(tt->str()) == t);

  CHECK(!as_toral(S("q + 1")).has_value());
  CHECK(!as_toral(S("2*q")).has_value());
  CHECK(!as_toral(Scalar()).has_value());

  auto w = as_toral(S("q^3*c1"));
  REQUIRE(w.has_value());
  ToralScalar r = toral_sqrt(*w);
  CHECK(r.mul(r) == *w);
  CHECK(r.to_scalar() == S("q^(3/2)*c1^(1/2)"));

  CHECK_THROWS_WITH_AS(toral_sqrt(*as_toral(S("-q^2"))),
                       "square root requires quadratic extension", math_error);
  CHECK_THROWS_AS(toral_sqrt(*as_toral(S("q^(1/2)"))), math_error);
  CHECK_THROWS_AS(toral_sqrt(*as_toral(S("c1^(1/2)"))), math_error);

  ToralScalar u = ToralScalar::q_half_pow(2).mul(ToralScalar::param_half_pow(3, -1));
  CHECK(u.mul(u.inv()).is_one());
  CHECK(u.pow(2) == u.mul(u));
  CHECK(u.negated().negated() == u);
}

TEST_CASE("error reporting") {
  CHECK_THROWS_AS(Scalar().inv(), math_error);
  CHECK_THROWS_AS(S("1/0"), math_error);
  CHECK_THROWS_AS(S("q +"), std::invalid_argument);
  CHECK_THROWS_AS(S("q^(1/3)"), std::invalid_argument);
  CHECK_THROWS_AS(S("x"), std::invalid_argument);
  CHECK_THROWS_AS(S("(q + 1"), std::invalid_argument);
  CHECK_THROWS_AS(Scalar::param(0), std::invalid_argument);
  CHECK_THROWS_AS(Scalar::param(param_count() + 1), std::invalid_argument);
}

TEST_CASE("parameter context is adjustable") {
  ParamGuard guard;
  set_param_count(2);
  CHECK(param_count() == 2);
  Scalar v = S("c1*c2 - q");
  CHECK(v + Scalar::q() == Scalar::param(1) * Scalar::param(2));
  CHECK_THROWS_AS(Scalar::param(3), std::invalid_argument);
  ToralScalar t = ToralScalar::param_half_pow(2, 4);
  CHECK(t.de.size() == 2);
}

TEST_CASE("ordering is a strict total order on samples") {
  const std::vector<Scalar> xs = {S("0"), S("1"), S("q"), S("q + 1"),
                                  S("c1"), S("(q+1)/(q-1)")};
  for (const auto& a : xs)
    for (const auto& b : xs) {
      const bool lt = a < b, gt = b < a, eq = a == b;
      CHECK(((lt ? 1 : 0) + (gt ? 1 : 0) + (eq ? 1 : 0)) == 1);
    }
}
