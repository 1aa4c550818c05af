#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qua/rootsys.hpp"
#include "qua/scalar.hpp"

namespace qua {

// A PBW basis monomial of U_q(gl_{n+1}): F-part · K-part · E-part.
// f and e hold nonnegative exponents over the negative/positive root vectors
// in convex order (length n(n+1)/2); k holds Laurent exponents over
// K̄_1,…,K̄_{n+1}.
struct PbwMonomial {
    std::vector<int32_t> f;
    std::vector<int32_t> k;
    std::vector<int32_t> e;

    auto operator<=>(const PbwMonomial&) const = default;
};

PbwMonomial unit_monomial(int n);

// An element of U_q(gl_{n+1}) in PBW normal form: monomial → coefficient,
// zero coefficients never stored. Immutable value type.
class AlgebraElement {
public:
    explicit AlgebraElement(int n);

    static AlgebraElement zero(int n);
    static AlgebraElement unit(int n);
    static AlgebraElement scalar(int n, const Scalar& s);
    static AlgebraElement gen_e(int n, int i);                       // E_i
    static AlgebraElement gen_f(int n, int i);                       // F_i
    static AlgebraElement kbar(int n, int j, int exp = 1);           // K̄_j^exp
    static AlgebraElement k_sl(int n, int i, int exp = 1);           // K_i = K̄_iK̄_{i+1}^{-1}
    static AlgebraElement k_laurent(int n, std::vector<int32_t> exps);
    static AlgebraElement monomial(int n, PbwMonomial m, Scalar c = Scalar::one());

    int rank() const { return n_; }
    const std::map<PbwMonomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator-() const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement operator*(const Scalar& s) const;
    AlgebraElement pow(int m) const;  // m >= 0

    bool operator==(const AlgebraElement& o) const;
    bool operator!=(const AlgebraElement& o) const { return !(*this == o); }

    std::string str() const;

private:
    int n_;
    std::map<PbwMonomial, Scalar> terms_;

    void insert(PbwMonomial m, Scalar c);
    friend AlgebraElement multiply(const AlgebraElement&, const AlgebraElement&);
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement qcommutator(const AlgebraElement& a, const AlgebraElement& b, const Scalar& v);
AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b);

// The root vector E_β (positive β) or E_{-|β|} (negative β) as a single
// PBW letter. Consistency with the braid-string definition is covered by
// verify_identity("root-vector-def").
AlgebraElement root_vector(int n, const Root& beta);

// [K;j] = (q^j K − q^{-j} K^{-1})/(q − q^{-1}) for the torus monomial with
// the given Laurent exponents.
AlgebraElement torus_bracket(int n, const std::vector<int32_t>& kexps, int j);

// The Lusztig automorphism T_i (or its inverse), extended from the
// generator table multiplicatively and linearly.
AlgebraElement braid_T(int i, const AlgebraElement& a, bool inverse = false);

// T_{w[0]} T_{w[1]} ⋯ T_{w[m-1]} (a), rightmost applied first.
AlgebraElement braid_string(const std::vector<int>& word, const AlgebraElement& a,
                            bool inverse = false);

// Letters of a generator word: E_i, F_i, or K̄_idx^exp.
struct GenLetter {
    enum class Type { E, F, Kb };
    Type type;
    int idx;
    int exp = 1;  // used by Kb only
};
using GenWord = std::vector<GenLetter>;

// Rewrites a as a sum of scalar-weighted words in E_i, F_i, K̄_j^{±1},
// expanding PBW letters through the chain identities.
std::vector<std::pair<Scalar, GenWord>> expand_to_generators(const AlgebraElement& a);

// True when every monomial's K-exponents sum to zero, i.e. the element
// lies in the subalgebra generated by E_i, F_i, K_i^{±1}.
bool in_sl_subalgebra(const AlgebraElement& a);

// If the element is a Laurent combination of K̄ monomials only, maps each
// exponent vector to its coefficient.
std::optional<std::map<std::vector<int32_t>, Scalar>> pure_torus_part(const AlgebraElement& a);

struct IdentityInstance {
    std::string description;
    bool pass;
    std::string residual;  // normal form of LHS − RHS on failure, empty on pass
};

struct IdentityReport {
    std::string tag;
    int rank;
    std::vector<IdentityInstance> instances;
    bool all_pass() const;
};

// Known tags: torus, ef-simple, distant-commute, serre, chain-pos,
// chain-neg, mixed-target, mixed-source, q-scale-pos, q-scale-neg,
// four-index, ef-same-root, braid, braid-inverse, braid-morphism,
// braid-shift, root-vector-def, simplified-root-vector.
std::vector<std::string> identity_tags();
IdentityReport verify_identity(const std::string& tag, int n);

// Grammar: E1, F2, Kb3 (K̄_3), K2 (K_2), Ep(1,3)/Em(1,3) for E_{±(ε_1−ε_3)},
// ^ for integer powers, juxtaposition for products, +, -, / by scalars,
// Scalar literals as coefficients, parentheses.
AlgebraElement parse_element(const std::string& text, int n);

}  // namespace qua
