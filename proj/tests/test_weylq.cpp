#include "doctest.h"

#include <vector>

#include "qua/weylq.hpp"

using namespace qua;

namespace {

GwaElement xy(int n, int i, int j) {
    return multiply_gwa(GwaElement::gen_x(n, i), GwaElement::gen_y(n, j));
}

}  // namespace

TEST_CASE("products follow the displayed exchange rules") {
    const int n = 2;
    const GwaElement x1 = GwaElement::gen_x(n, 1);
    const GwaElement y1 = GwaElement::gen_y(n, 1);
    const GwaElement w1 = GwaElement::omega(n, 1);

    CHECK(multiply_gwa(y1, x1) == gwa_t(n, 1));
    CHECK(multiply_gwa(w1, x1) == (x1 * w1) * Scalar::q());
    CHECK(multiply_gwa(w1, y1) == (y1 * w1) * Scalar::q_pow(-1));
    CHECK(multiply_gwa(y1, GwaElement::gen_x(n, 2)) ==
          GwaElement::gen_x(n, 2) * y1);

    const Scalar qmi = q_minus_qinv().inv();
    CHECK(x1 * y1 == (GwaElement::omega(n, 1, 1) - GwaElement::omega(n, 1, -1)) * qmi);
    CHECK(y1 * x1 - (x1 * y1) * Scalar::q_pow(-1) == w1);

    CHECK(x1 * GwaElement::gen_x(n, 3) == GwaElement::gen_x(n, 3) * x1);
    CHECK(y1 * GwaElement::gen_y(n, 2) == GwaElement::gen_y(n, 2) * y1);

    // powers through the split rules
    const GwaElement y1sq = y1 * y1;
    CHECK(y1sq.terms().size() == 1);
    CHECK((y1sq * x1) * x1 == y1sq * (x1 * x1));

    const std::vector<GwaElement> samples = {
        x1, GwaElement::gen_y(n, 2), GwaElement::omega(n, 3, -2),
        xy(n, 1, 3) + qeuler(n) * Scalar::param(1), y1 * y1 * x1};
    for (const auto& a : samples)
        for (const auto& b : samples)
            for (const auto& c : samples) CHECK((a * b) * c == a * (b * c));

    CHECK_THROWS_AS(GwaElement::gen_x(n, 4), std::invalid_argument);
    GwaMonomial bad = gwa_unit_monomial(n);
    bad.x[0] = bad.y[0] = 1;
    CHECK_THROWS_AS(GwaElement::monomial(n, bad), std::invalid_argument);
}

TEST_CASE("euler grading is additive and detected") {
    const int n = 2;
    CHECK(euler_degree(GwaElement::gen_x(n, 1)) == 1);
    CHECK(euler_degree(GwaElement::gen_y(n, 2)) == -1);
    CHECK(euler_degree(GwaElement::omega(n, 3)) == 0);
    CHECK(euler_degree(xy(n, 1, 2) + xy(n, 2, 3)) == 0);
    CHECK(euler_degree(GwaElement::zero(n)) == 0);
    CHECK_FALSE(euler_degree(GwaElement::gen_x(n, 1) + GwaElement::gen_y(n, 1)).has_value());

    const GwaElement a = GwaElement::gen_x(n, 1) * GwaElement::gen_x(n, 2);
    const GwaElement b = GwaElement::gen_y(n, 1);
    CHECK(*euler_degree(a * b) == *euler_degree(a) + *euler_degree(b));

    // conjugation by the q-Euler element scales by q^degree
    for (const auto& [elem, deg] : {std::pair{GwaElement::gen_x(n, 2), 1},
                                    std::pair{b * b * b, -3},
                                    std::pair{xy(n, 3, 1), 0}}) {
        CHECK(qeuler(n) * elem == (elem * qeuler(n)) * Scalar::q_pow(deg));
    }
}

TEST_CASE("sigma and t accessors match their defining values") {
    const int n = 2;
    CHECK(gwa_t(n, 2) == multiply_gwa(GwaElement::gen_y(n, 2), GwaElement::gen_x(n, 2)));
    CHECK(gwa_sigma(1, GwaElement::omega(n, 1)) == GwaElement::omega(n, 1) * Scalar::q_pow(-1));
    CHECK(gwa_sigma(2, GwaElement::omega(n, 1)) == GwaElement::omega(n, 1));
    CHECK(gwa_sigma(3, qeuler(n)) == qeuler(n) * Scalar::q_pow(-1));
    CHECK_THROWS_AS(gwa_sigma(1, GwaElement::gen_x(n, 1)), std::invalid_argument);
}

TEST_CASE("pi is a homomorphism onto degree zero") {
    for (int n = 1; n <= 3; ++n) {
        const IdentityReport rep = check_pi_homomorphism(n);
        INFO("rank ", n);
        CHECK(rep.all_pass());
        CHECK_FALSE(rep.instances.empty());
    }

    const int n = 2;
    CHECK(pi(AlgebraElement::gen_e(n, 1)) == xy(n, 1, 2));
    CHECK(pi(AlgebraElement::gen_f(n, 2)) == xy(n, 3, 2));
    for (int j = 1; j <= n + 1; ++j)
        CHECK(pi(AlgebraElement::kbar(n, j)) == GwaElement::omega(n, j));
    CHECK(pi(AlgebraElement::k_laurent(n, {1, 1, 1})) == qeuler(n));

    const std::vector<AlgebraElement> samples = {
        AlgebraElement::gen_e(n, 1),
        root_vector(n, Root{1, 3}),
        root_vector(n, Root{3, 1}) * AlgebraElement::kbar(n, 2, -1),
        commutator(AlgebraElement::gen_e(n, 1), AlgebraElement::gen_f(n, 1)),
    };
    for (const auto& a : samples) {
        CHECK(euler_degree(pi(a)) == 0);
        for (const auto& b : samples) CHECK(pi(a * b) == pi(a) * pi(b));
    }
}

TEST_CASE("omega-corrected bracket recursions generate the off-diagonal pairs") {
    const int n = 2;
    const GwaElement lhs = qcommutator_gwa(xy(n, 1, 2), pi(AlgebraElement::gen_e(n, 2)),
                                            Scalar::q());
    CHECK(multiply_gwa(GwaElement::omega(n, 2), lhs) == xy(n, 1, 3));
    CHECK(multiply_gwa(GwaElement::omega(n, 2, -1), lhs) != xy(n, 1, 3));

    const GwaElement flhs = qcommutator_gwa(xy(n, 3, 2), pi(AlgebraElement::gen_f(n, 1)),
                                             Scalar::q());
    CHECK(multiply_gwa(GwaElement::omega(n, 2), flhs) == xy(n, 3, 1));

    const int m = 3;
    const GwaElement deep = qcommutator_gwa(xy(m, 1, 3), pi(AlgebraElement::gen_e(m, 3)),
                                             Scalar::q());
    CHECK(multiply_gwa(GwaElement::omega(m, 3), deep) == xy(m, 1, 4));
}

TEST_CASE("degree zero preimages land on the nose") {
    const int n = 2;
    CHECK(degree_zero_preimage(GwaElement::omega(n, 2)) == AlgebraElement::kbar(n, 2));
    CHECK(degree_zero_preimage(xy(n, 1, 2)) == AlgebraElement::gen_e(n, 1));
    CHECK(degree_zero_preimage(xy(n, 2, 1)) == AlgebraElement::gen_f(n, 1));

    // every degree-zero monomial of small total degree pulls back exactly
    for (int i = 1; i <= n + 1; ++i)
        for (int j = 1; j <= n + 1; ++j) {
            if (i == j) continue;
            const GwaElement a = xy(n, i, j);
            CHECK(pi(degree_zero_preimage(a)) == a);
        }
    const GwaElement big =
        xy(n, 1, 3) * xy(n, 2, 1) * GwaElement::omega(n, 1, -2) * Scalar::param(1) +
        qeuler(n) * q_minus_qinv();
    CHECK(pi(degree_zero_preimage(big)) == big);

    CHECK_THROWS_AS(degree_zero_preimage(GwaElement::gen_x(n, 1)), math_error);
}

TEST_CASE("cyclic bracket form matches the homomorphism image") {
    const int n = 2;
    const Scalar qmi = q_minus_qinv().inv();
    auto bracket = [&](int idx, int m) {
        return GwaElement::omega(n, idx, 1) * (Scalar::q_pow(m) * qmi) -
               GwaElement::omega(n, idx, -1) * (Scalar::q_pow(-m) * qmi);
    };

    const AlgebraElement F1E1 =
        AlgebraElement::gen_f(n, 1) * AlgebraElement::gen_e(n, 1);
    CHECK(cyclic_bracket_form(F1E1) == multiply_gwa(bracket(1, 1), bracket(2, 0)));

    CHECK(cyclic_bracket_form(AlgebraElement::kbar(n, 1)) == GwaElement::omega(n, 1));

    const AlgebraElement chain = AlgebraElement::gen_f(n, 1) * AlgebraElement::gen_f(n, 2) *
                                 AlgebraElement::gen_e(n, 2) * AlgebraElement::gen_e(n, 1);
    CHECK(cyclic_bracket_form(chain) ==
          bracket(1, 1) * bracket(3, 0) * bracket(2, 0) * bracket(2, 0));
    CHECK(cyclic_bracket_form(chain) == pi(chain));

    const AlgebraElement mixed =
        root_vector(n, Root{3, 1}) * root_vector(n, Root{1, 3}) * AlgebraElement::kbar(n, 2, -2) +
        AlgebraElement::unit(n) * Scalar::param(2);
    CHECK(cyclic_bracket_form(mixed) == pi(mixed));

    CHECK_THROWS_AS(cyclic_bracket_form(AlgebraElement::gen_e(n, 1)), math_error);
}

TEST_CASE("gwa elements print and parse round-trip") {
    const int n = 2;
    const std::vector<GwaElement> samples = {
        GwaElement::zero(n),
        GwaElement::unit(n),
        GwaElement::gen_x(n, 1),
        xy(n, 1, 3) * GwaElement::omega(n, 2, -2),
        qeuler(n) * Scalar::param(1) - GwaElement::gen_y(n, 3) * Scalar::q_pow(-2),
        gwa_t(n, 1),
    };
    for (const auto& a : samples) CHECK(parse_gwa(a.str(), n) == a);

    CHECK(parse_gwa("x1 y2", n) == xy(n, 1, 2));
    CHECK(parse_gwa("w3^-1", n) == GwaElement::omega(n, 3, -1));
    CHECK(parse_gwa("Eq", n) == qeuler(n));
    CHECK(parse_gwa("Eq^-1", n) == GwaElement::omega_laurent(n, {-1, -1, -1}));
    CHECK(parse_gwa("(q w1 - (q w1)^-1)/(q - q^-1)", n) == gwa_t(n, 1));
    CHECK(parse_gwa("x1^2 y2^3", n) ==
          GwaElement::gen_x(n, 1).pow(2) * GwaElement::gen_y(n, 2).pow(3));

    CHECK_THROWS_AS(parse_gwa("x4", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_gwa("x1^-1", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_gwa("E1", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_gwa("x1/y1", n), std::invalid_argument);
}
