#include "doctest.h"

#include <string>
#include <vector>

#include "qua/uq.hpp"

using namespace qua;

namespace {

AlgebraElement Ep(int n, int i, int j) { return root_vector(n, Root{i, j}); }
AlgebraElement Em(int n, int i, int j) { return root_vector(n, Root{j, i}); }

std::vector<int32_t> kd(int n, int plus, int minus) {
    std::vector<int32_t> k(n + 1, 0);
    k[plus - 1] += 1;
    k[minus - 1] -= 1;
    return k;
}

AlgebraElement rebuild(const AlgebraElement& a) {
    const int n = a.rank();
    AlgebraElement out = AlgebraElement::zero(n);
    for (const auto& [s, word] : expand_to_generators(a)) {
        AlgebraElement acc = AlgebraElement::scalar(n, s);
        for (const GenLetter& g : word) {
            switch (g.type) {
                case GenLetter::Type::E: acc = acc * AlgebraElement::gen_e(n, g.idx); break;
                case GenLetter::Type::F: acc = acc * AlgebraElement::gen_f(n, g.idx); break;
                case GenLetter::Type::Kb: acc = acc * AlgebraElement::kbar(n, g.idx, g.exp); break;
            }
        }
        out = out + acc;
    }
    return out;
}

}  // namespace

TEST_CASE("multiplication matches the defining relations") {
    const int n = 2;
    const AlgebraElement E1 = AlgebraElement::gen_e(n, 1);
    const AlgebraElement E2 = AlgebraElement::gen_e(n, 2);
    const AlgebraElement F1 = AlgebraElement::gen_f(n, 1);
    const AlgebraElement F2 = AlgebraElement::gen_f(n, 2);
    const AlgebraElement K1 = AlgebraElement::kbar(n, 1);

    CHECK(multiply(K1, E1) == (E1 * K1) * Scalar::q());
    CHECK(multiply(K1, F1) == (F1 * K1) * Scalar::q_pow(-1));
    CHECK(multiply(AlgebraElement::kbar(n, 2), E1) == (E1 * AlgebraElement::kbar(n, 2)) * Scalar::q_pow(-1));
    CHECK(multiply(AlgebraElement::kbar(n, 3), E1) == E1 * AlgebraElement::kbar(n, 3));

    CHECK(commutator(E1, F1) == torus_bracket(n, kd(n, 1, 2), 0));
    CHECK(commutator(E1, F2).is_zero());
    CHECK(commutator(E2, F1).is_zero());

    const Scalar two = qint(2);
    CHECK((E1 * E1 * E2 - (E1 * E2 * E1) * two + E2 * E1 * E1).is_zero());
    CHECK((F2 * F2 * F1 - (F2 * F1 * F2) * two + F1 * F2 * F2).is_zero());

    // powers of one letter stay a single monomial
    const AlgebraElement E1sq = E1 * E1;
    CHECK(E1sq.terms().size() == 1);
    CHECK(E1sq == E1.pow(2));
}

TEST_CASE("q-commutators build the composite root vectors") {
    {
        const int n = 2;
        CHECK(qcommutator(Ep(n, 1, 2), Ep(n, 2, 3), Scalar::q_pow(-1)) == -Ep(n, 1, 3));
        CHECK(qcommutator(Em(n, 2, 3), Em(n, 1, 2), Scalar::q_pow(1)) == -Em(n, 1, 3));
    }
    {
        const int n = 3;
        CHECK(qcommutator(Ep(n, 1, 2), Ep(n, 2, 4), Scalar::q_pow(-1)) == -Ep(n, 1, 4));
        CHECK(qcommutator(Ep(n, 1, 3), Ep(n, 3, 4), Scalar::q_pow(-1)) == -Ep(n, 1, 4));
        CHECK(qcommutator(Em(n, 2, 4), Em(n, 1, 2), Scalar::q_pow(1)) == -Em(n, 1, 4));
    }
}

TEST_CASE("torus conjugation scales root vectors by their weight") {
    const int n = 3;
    for (const Root& beta : convex_order(n)) {
        for (int j = 1; j <= n + 1; ++j) {
            const int w = (j == beta.i ? 1 : 0) - (j == beta.j ? 1 : 0);
            const AlgebraElement K = AlgebraElement::kbar(n, j);
            CHECK(multiply(K, Ep(n, beta.i, beta.j)) ==
                  (Ep(n, beta.i, beta.j) * K) * Scalar::q_pow(w));
            CHECK(multiply(K, Em(n, beta.i, beta.j)) ==
                  (Em(n, beta.i, beta.j) * K) * Scalar::q_pow(-w));
        }
    }
}

TEST_CASE("braid automorphism matches the generator table") {
    const int n = 2;
    const AlgebraElement E1 = AlgebraElement::gen_e(n, 1);
    const AlgebraElement E2 = AlgebraElement::gen_e(n, 2);
    const AlgebraElement F1 = AlgebraElement::gen_f(n, 1);

    CHECK(braid_T(1, E1) == -(F1 * AlgebraElement::k_sl(n, 1)));
    CHECK(braid_T(1, F1) == -(AlgebraElement::k_sl(n, 1, -1) * E1));
    CHECK(braid_T(1, E2) == (E2 * E1) * Scalar::q_pow(-1) - E1 * E2);
    CHECK(braid_T(1, AlgebraElement::kbar(n, 1)) == AlgebraElement::kbar(n, 2));
    CHECK(braid_T(1, AlgebraElement::kbar(n, 3)) == AlgebraElement::kbar(n, 3));
    CHECK(braid_T(1, AlgebraElement::k_sl(n, 2)) ==
          AlgebraElement::k_sl(n, 1) * AlgebraElement::k_sl(n, 2));

    CHECK(braid_T(1, braid_T(1, E2), true) == E2);
    CHECK(braid_T(2, braid_T(2, E1, true)) == E1);

    // the shifted simple root vector
    CHECK(braid_string({1, 2}, E1) == E2);
    CHECK_THROWS_AS(braid_T(3, E1), std::invalid_argument);
}

TEST_CASE("root vectors expand through the chain recursion") {
    {
        const int n = 2;
        const AlgebraElement E1 = AlgebraElement::gen_e(n, 1);
        const AlgebraElement E2 = AlgebraElement::gen_e(n, 2);
        CHECK(rebuild(Ep(n, 1, 3)) == (E2 * E1) * Scalar::q_pow(-1) - E1 * E2);

        const AlgebraElement F1 = AlgebraElement::gen_f(n, 1);
        const AlgebraElement F2 = AlgebraElement::gen_f(n, 2);
        CHECK(rebuild(Em(n, 1, 3)) == -(F2 * F1) + (F1 * F2) * Scalar::q_pow(1));
    }
    {
        const int n = 3;
        const std::vector<AlgebraElement> samples = {
            Ep(n, 1, 4),
            Em(n, 2, 4),
            Ep(n, 1, 3) * Em(n, 1, 4) * AlgebraElement::kbar(n, 2, -3),
            torus_bracket(n, kd(n, 1, 3), 1),
            Ep(n, 1, 4) * Ep(n, 2, 3) + Em(n, 1, 2) * Scalar::param(1),
        };
        for (const auto& a : samples) CHECK(rebuild(a) == a);
    }
}

TEST_CASE("identity sweeps pass across ranks") {
    for (const std::string& tag : identity_tags()) {
        for (int n = 1; n <= 2; ++n) {
            const IdentityReport rep = verify_identity(tag, n);
            INFO(tag, " at rank ", n);
            CHECK(rep.all_pass());
        }
    }
    for (const std::string& tag :
         {"chain-pos", "chain-neg", "mixed-target", "mixed-source", "four-index",
          "ef-same-root", "root-vector-def", "simplified-root-vector", "braid",
          "braid-inverse", "braid-shift"}) {
        const IdentityReport rep = verify_identity(tag, 3);
        INFO(tag, " at rank 3");
        CHECK(rep.all_pass());
    }
    for (const std::string& tag : {"torus", "ef-simple", "distant-commute", "serre"}) {
        const IdentityReport rep = verify_identity(tag, 4);
        INFO(tag, " at rank 4");
        CHECK(rep.all_pass());
    }
    CHECK_THROWS_AS(verify_identity("serre", 5), std::invalid_argument);
    CHECK_THROWS_AS(verify_identity("no-such-tag", 2), std::invalid_argument);
}

TEST_CASE("identity reports carry per-instance descriptions") {
    const IdentityReport rep = verify_identity("four-index", 3);
    REQUIRE(rep.instances.size() == 7);  // one quadruple at rank 3, seven residuals
    CHECK(rep.tag == "four-index");
    CHECK(rep.rank == 3);
    for (const auto& inst : rep.instances) {
        CHECK(inst.pass);
        CHECK(inst.residual.empty());
        CHECK(inst.description.find("i=1") != std::string::npos);
    }
    CHECK(verify_identity("distant-commute", 2).instances.empty());  // vacuous at rank 2
}

TEST_CASE("associativity holds on sampled triples") {
    const int n = 2;
    const std::vector<AlgebraElement> samples = {
        AlgebraElement::gen_e(n, 1),
        AlgebraElement::gen_f(n, 2),
        AlgebraElement::kbar(n, 1, -1),
        Ep(n, 1, 3),
        Em(n, 1, 3),
        AlgebraElement::gen_e(n, 2) + AlgebraElement::gen_f(n, 1) * Scalar::q(),
    };
    for (const auto& a : samples)
        for (const auto& b : samples)
            for (const auto& c : samples) CHECK((a * b) * c == a * (b * c));
}

TEST_CASE("elements print and parse round-trip") {
    const int n = 2;
    const std::vector<AlgebraElement> samples = {
        AlgebraElement::zero(n),
        AlgebraElement::unit(n),
        AlgebraElement::gen_e(n, 1),
        Ep(n, 1, 3) * Em(n, 2, 3) * AlgebraElement::kbar(n, 3, -2),
        torus_bracket(n, kd(n, 1, 2), 0),
        AlgebraElement::gen_e(n, 1) * Scalar::param(1) - AlgebraElement::gen_f(n, 1),
    };
    for (const auto& a : samples) CHECK(parse_element(a.str(), n) == a);

    CHECK(parse_element("E1", n) == AlgebraElement::gen_e(n, 1));
    CHECK(parse_element("Kb2^-3", n) == AlgebraElement::kbar(n, 2, -3));
    CHECK(parse_element("K1", n) == AlgebraElement::k_sl(n, 1));
    CHECK(parse_element("Ep(1,3) Em(1,2)", n) == Ep(n, 1, 3) * Em(n, 1, 2));
    CHECK(parse_element("q^2 E1 F2", n) ==
          (AlgebraElement::gen_e(n, 1) * AlgebraElement::gen_f(n, 2)) * Scalar::q_pow(2));
    CHECK(parse_element("(E1 F1 - F1 E1) (q - q^-1)", n) ==
          commutator(AlgebraElement::gen_e(n, 1), AlgebraElement::gen_f(n, 1)) * q_minus_qinv());
    CHECK(parse_element("E1/q", n) == AlgebraElement::gen_e(n, 1) * Scalar::q_pow(-1));
    CHECK(parse_element("c1 - q^(1/2)", n) ==
          AlgebraElement::scalar(n, Scalar::param(1) - Scalar::q_half_pow(1)));
    CHECK(parse_element("c1^(-1/2) K2", n) ==
          AlgebraElement::k_sl(n, 2) * Scalar::param_half_pow(1, -1));
    CHECK(parse_element("E1^3", n) == AlgebraElement::gen_e(n, 1).pow(3));
    CHECK(parse_element("-2 E1 + F1", n) ==
          AlgebraElement::gen_f(n, 1) - AlgebraElement::gen_e(n, 1) * Scalar::from_int(2));

    CHECK_THROWS_AS(parse_element("E5", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_element("E1^-1", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_element("E1/F1", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_element("E1 +", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_element("Zp(1,2)", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_element("Ep(2,2)", n), std::invalid_argument);
    CHECK_THROWS_AS(parse_element("E1 %", n), std::invalid_argument);
}

TEST_CASE("subalgebra and torus predicates") {
    const int n = 2;
    CHECK(in_sl_subalgebra(commutator(AlgebraElement::gen_e(n, 1), AlgebraElement::gen_f(n, 1))));
    CHECK(in_sl_subalgebra(AlgebraElement::k_sl(n, 2, -4)));
    CHECK_FALSE(in_sl_subalgebra(AlgebraElement::kbar(n, 1)));
    CHECK_FALSE(in_sl_subalgebra(AlgebraElement::gen_e(n, 1) * AlgebraElement::kbar(n, 3)));

    const auto torus = pure_torus_part(torus_bracket(n, kd(n, 1, 2), 0));
    REQUIRE(torus.has_value());
    CHECK(torus->size() == 2);
    CHECK(torus->at(kd(n, 1, 2)) == q_minus_qinv().inv());
    CHECK_FALSE(pure_torus_part(AlgebraElement::gen_e(n, 1)).has_value());

    CHECK(AlgebraElement::zero(n).str() == "0");
    CHECK(AlgebraElement::unit(n).str() == "(1)");
}
