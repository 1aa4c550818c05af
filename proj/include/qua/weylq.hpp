#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qua/uq.hpp"

namespace qua {

// A normal-form monomial ω^w x^k y^l of the quantized Weyl algebra A^q_{n+1}.
// w holds Laurent exponents over ω_1,…,ω_{n+1}; x and y hold nonnegative
// exponents with x[i]·y[i] = 0 in every slot.
struct GwaMonomial {
    std::vector<int32_t> w;
    std::vector<int32_t> x;
    std::vector<int32_t> y;

    auto operator<=>(const GwaMonomial&) const = default;
};

GwaMonomial gwa_unit_monomial(int n);

// An element of A^q_{n+1} in normal form: monomial → coefficient, zero
// coefficients never stored. Immutable value type.
class GwaElement {
public:
    explicit GwaElement(int n);

    static GwaElement zero(int n);
    static GwaElement unit(int n);
    static GwaElement scalar(int n, const Scalar& s);
    static GwaElement gen_x(int n, int i);
    static GwaElement gen_y(int n, int i);
    static GwaElement omega(int n, int i, int exp = 1);
    static GwaElement omega_laurent(int n, std::vector<int32_t> exps);
    static GwaElement monomial(int n, GwaMonomial m, Scalar c = Scalar::one());

    int rank() const { return n_; }
    const std::map<GwaMonomial, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    GwaElement operator+(const GwaElement& o) const;
    GwaElement operator-(const GwaElement& o) const;
    GwaElement operator-() const;
    GwaElement operator*(const GwaElement& o) const;
    GwaElement operator*(const Scalar& s) const;
    GwaElement pow(int m) const;  // m >= 0

    bool operator==(const GwaElement& o) const;
    bool operator!=(const GwaElement& o) const { return !(*this == o); }

    std::string str() const;

private:
    int n_;
    std::map<GwaMonomial, Scalar> terms_;

    void insert(GwaMonomial m, Scalar c);
    friend GwaElement multiply_gwa(const GwaElement&, const GwaElement&);
};

GwaElement multiply_gwa(const GwaElement& a, const GwaElement& b);
GwaElement qcommutator_gwa(const GwaElement& a, const GwaElement& b, const Scalar& v);

// 𝔼_q = ω_1⋯ω_{n+1}, the product of all torus generators.
GwaElement qeuler(int n);

// t_i = (qω_i − (qω_i)^{-1})/(q − q^{-1}), the value of y_i x_i.
GwaElement gwa_t(int n, int i);

// The base-ring automorphism σ_j: ω_i ↦ q^{-δ_{ij}} ω_i, applied to a pure
// ω-Laurent element. Errors when a has x or y letters.
GwaElement gwa_sigma(int j, const GwaElement& a);

// Common degree Σx − Σy across all monomials, or nullopt when the element
// mixes degrees. The zero element reports degree 0.
std::optional<int> euler_degree(const GwaElement& a);

// The homomorphism E_i ↦ x_i y_{i+1}, F_i ↦ x_{i+1} y_i, K̄_i ↦ ω_i,
// extended through the generator expansion of a.
GwaElement pi(const AlgebraElement& a);

// A canonical preimage of a degree-0 element under pi, built factor by
// factor through the ω-corrected q-bracket recursions. Non-uniqueness
// modulo the kernel of pi is inherent; only pi(result) == a is promised.
AlgebraElement degree_zero_preimage(const GwaElement& a);

// Checks every defining relation with generators replaced by their images,
// straightened inside A^q_{n+1} from scratch.
IdentityReport check_pi_homomorphism(int n);

// For x in the cyclic subalgebra (all monomials of root-lattice weight
// zero), the ω-Laurent polynomial equal to pi(x), assembled from the
// bracket-product formula word by word and cross-checked against pi.
GwaElement cyclic_bracket_form(const AlgebraElement& x);

// Grammar: x1, y2, w3 (ω_3), Eq (𝔼_q), ^ for integer powers, juxtaposition
// for products, +, -, / by scalars, Scalar literals, parentheses.
GwaElement parse_gwa(const std::string& text, int n);

}  // namespace qua
