#include "qua/weylq.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace qua {

namespace {

void accumulate(std::map<GwaMonomial, Scalar>& acc, GwaMonomial m, const Scalar& c) {
    auto [pos, fresh] = acc.emplace(std::move(m), c);
    if (!fresh) {
        pos->second = pos->second + c;
        if (pos->second.is_zero()) acc.erase(pos);
    }
}

void check_slot(int i, int n) {
    if (i < 1 || i > n + 1) throw std::invalid_argument("generator index out of range");
}

}  // namespace

GwaMonomial gwa_unit_monomial(int n) {
    GwaMonomial m;
    m.w.assign(n + 1, 0);
    m.x.assign(n + 1, 0);
    m.y.assign(n + 1, 0);
    return m;
}

GwaElement::GwaElement(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("rank must be at least 1");
}

GwaElement GwaElement::zero(int n) { return GwaElement(n); }

GwaElement GwaElement::unit(int n) { return scalar(n, Scalar::one()); }

GwaElement GwaElement::scalar(int n, const Scalar& s) {
    GwaElement a(n);
    if (!s.is_zero()) a.terms_.emplace(gwa_unit_monomial(n), s);
    return a;
}

GwaElement GwaElement::gen_x(int n, int i) {
    check_slot(i, n);
    GwaMonomial m = gwa_unit_monomial(n);
    m.x[i - 1] = 1;
    return monomial(n, std::move(m));
}

GwaElement GwaElement::gen_y(int n, int i) {
    check_slot(i, n);
    GwaMonomial m = gwa_unit_monomial(n);
    m.y[i - 1] = 1;
    return monomial(n, std::move(m));
}

GwaElement GwaElement::omega(int n, int i, int exp) {
    check_slot(i, n);
    GwaMonomial m = gwa_unit_monomial(n);
    m.w[i - 1] = exp;
    return monomial(n, std::move(m));
}

GwaElement GwaElement::omega_laurent(int n, std::vector<int32_t> exps) {
    if (static_cast<int>(exps.size()) != n + 1)
        throw std::invalid_argument("torus exponent vector has wrong length");
    GwaMonomial m = gwa_unit_monomial(n);
    m.w = std::move(exps);
    return monomial(n, std::move(m));
}

GwaElement GwaElement::monomial(int n, GwaMonomial m, Scalar c) {
    if (static_cast<int>(m.w.size()) != n + 1 || static_cast<int>(m.x.size()) != n + 1 ||
        static_cast<int>(m.y.size()) != n + 1)
        throw std::invalid_argument("monomial shape does not match rank");
    for (int i = 0; i <= n; ++i) {
        if (m.x[i] < 0 || m.y[i] < 0)
            throw std::invalid_argument("negative exponent in GWA monomial");
        if (m.x[i] && m.y[i])
            throw std::invalid_argument("GWA monomial has both raising and lowering letters in one slot");
    }
    GwaElement a(n);
    if (!c.is_zero()) a.terms_.emplace(std::move(m), std::move(c));
    return a;
}

void GwaElement::insert(GwaMonomial m, Scalar c) {
    if (c.is_zero()) return;
    accumulate(terms_, std::move(m), c);
}

GwaElement GwaElement::operator+(const GwaElement& o) const {
    if (n_ != o.n_) throw std::invalid_argument("rank mismatch");
    GwaElement out = *this;
    for (const auto& [m, c] : o.terms_) out.insert(m, c);
    return out;
}

GwaElement GwaElement::operator-(const GwaElement& o) const { return *this + (-o); }

GwaElement GwaElement::operator-() const {
    GwaElement out(n_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

GwaElement GwaElement::operator*(const GwaElement& o) const { return multiply_gwa(*this, o); }

GwaElement GwaElement::operator*(const Scalar& s) const {
    GwaElement out(n_);
    if (s.is_zero()) return out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
    return out;
}

GwaElement GwaElement::pow(int m) const {
    if (m < 0) throw std::invalid_argument("negative element power");
    GwaElement out = unit(n_);
    for (int t = 0; t < m; ++t) out = out * *this;
    return out;
}

bool GwaElement::operator==(const GwaElement& o) const {
    return n_ == o.n_ && terms_ == o.terms_;
}

GwaElement multiply_gwa(const GwaElement& a, const GwaElement& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("rank mismatch");
    const int n = a.n_;
    const Scalar qmi = q_minus_qinv().inv();
    GwaElement out(n);
    for (const auto& [m1, c1] : a.terms_) {
        for (const auto& [m2, c2] : b.terms_) {
            std::vector<std::pair<GwaMonomial, Scalar>> acc{{m1, c1 * c2}};
            for (int i = 0; i <= n; ++i) {
                if (!m2.w[i]) continue;
                for (auto& [m, c] : acc) {
                    const int cross = m2.w[i] * (m.y[i] - m.x[i]);
                    if (cross) c = c * Scalar::q_pow(cross);
                    m.w[i] += m2.w[i];
                }
            }
            for (int i = 0; i <= n; ++i) {
                for (int rep = 0; rep < m2.x[i]; ++rep) {
                    std::vector<std::pair<GwaMonomial, Scalar>> next;
                    next.reserve(acc.size() * 2);
                    for (auto& [m, c] : acc) {
                        if (m.y[i] == 0) {
                            GwaMonomial mm = m;
                            mm.x[i] += 1;
                            next.push_back({std::move(mm), c});
                        } else {
                            // y_i^l x_i = (q^l ω_i − q^{-l} ω_i^{-1})/(q−q^{-1}) · y_i^{l-1}
                            const int l = m.y[i];
                            GwaMonomial up = m;
                            up.w[i] += 1;
                            up.y[i] -= 1;
                            next.push_back({std::move(up), c * Scalar::q_pow(l) * qmi});
                            GwaMonomial dn = m;
                            dn.w[i] -= 1;
                            dn.y[i] -= 1;
                            next.push_back({std::move(dn), -(c * Scalar::q_pow(-l) * qmi)});
                        }
                    }
                    acc = std::move(next);
                }
            }
            for (int i = 0; i <= n; ++i) {
                for (int rep = 0; rep < m2.y[i]; ++rep) {
                    std::vector<std::pair<GwaMonomial, Scalar>> next;
                    next.reserve(acc.size() * 2);
                    for (auto& [m, c] : acc) {
                        if (m.x[i] == 0) {
                            GwaMonomial mm = m;
                            mm.y[i] += 1;
                            next.push_back({std::move(mm), c});
                        } else {
                            // x_i^k y_i = (q^{1-k} ω_i − q^{k-1} ω_i^{-1})/(q−q^{-1}) · x_i^{k-1}
                            const int k = m.x[i];
                            GwaMonomial up = m;
                            up.w[i] += 1;
                            up.x[i] -= 1;
                            next.push_back({std::move(up), c * Scalar::q_pow(1 - k) * qmi});
                            GwaMonomial dn = m;
                            dn.w[i] -= 1;
                            dn.x[i] -= 1;
                            next.push_back({std::move(dn), -(c * Scalar::q_pow(k - 1) * qmi)});
                        }
                    }
                    acc = std::move(next);
                }
            }
            for (auto& [m, c] : acc) accumulate(out.terms_, std::move(m), c);
        }
    }
    return out;
}

GwaElement qcommutator_gwa(const GwaElement& a, const GwaElement& b, const Scalar& v) {
    return a * b - (b * a) * v;
}

GwaElement qeuler(int n) {
    return GwaElement::omega_laurent(n, std::vector<int32_t>(n + 1, 1));
}

GwaElement gwa_t(int n, int i) {
    const Scalar qmi = q_minus_qinv().inv();
    return GwaElement::omega(n, i, 1) * (Scalar::q_pow(1) * qmi) -
           GwaElement::omega(n, i, -1) * (Scalar::q_pow(-1) * qmi);
}

GwaElement gwa_sigma(int j, const GwaElement& a) {
    const int n = a.rank();
    check_slot(j, n);
    GwaElement out = GwaElement::zero(n);
    for (const auto& [m, c] : a.terms()) {
        for (int i = 0; i <= n; ++i)
            if (m.x[i] || m.y[i])
                throw std::invalid_argument("sigma acts on pure torus elements only");
        out = out + GwaElement::monomial(n, m, c * Scalar::q_pow(-m.w[j - 1]));
    }
    return out;
}

std::optional<int> euler_degree(const GwaElement& a) {
    std::optional<int> deg;
    for (const auto& [m, c] : a.terms()) {
        int d = 0;
        for (std::size_t i = 0; i < m.x.size(); ++i) d += m.x[i] - m.y[i];
        if (!deg)
            deg = d;
        else if (*deg != d)
            return std::nullopt;
    }
    return deg ? deg : std::optional<int>(0);
}

namespace {

GwaElement pi_letter(int n, const GenLetter& g) {
    switch (g.type) {
        case GenLetter::Type::E: {
            GwaMonomial m = gwa_unit_monomial(n);
            m.x[g.idx - 1] = 1;
            m.y[g.idx] = 1;
            return GwaElement::monomial(n, std::move(m));
        }
        case GenLetter::Type::F: {
            GwaMonomial m = gwa_unit_monomial(n);
            m.x[g.idx] = 1;
            m.y[g.idx - 1] = 1;
            return GwaElement::monomial(n, std::move(m));
        }
        case GenLetter::Type::Kb:
            return GwaElement::omega(n, g.idx, g.exp);
    }
    throw std::logic_error("unreachable letter type");
}

}  // namespace

GwaElement pi(const AlgebraElement& a) {
    const int n = a.rank();
    GwaElement out = GwaElement::zero(n);
    for (const auto& [s, word] : expand_to_generators(a)) {
        GwaElement acc = GwaElement::scalar(n, s);
        for (const GenLetter& g : word) acc = acc * pi_letter(n, g);
        out = out + acc;
    }
    return out;
}

namespace {

// Canonical preimage of x_i y_j (i ≠ j) under pi, via the ω-corrected
// q-bracket recursions toward the diagonal; memoized per rank and pair.
const AlgebraElement& pair_preimage(int n, int i, int j) {
    static std::shared_mutex mtx;
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const AlgebraElement>> cache;
    const std::tuple<int, int, int> key{n, i, j};
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    AlgebraElement u = AlgebraElement::zero(n);
    if (i < j) {
        u = j == i + 1 ? AlgebraElement::gen_e(n, i)
                       : AlgebraElement::kbar(n, j - 1) *
                             qcommutator(pair_preimage(n, i, j - 1),
                                         AlgebraElement::gen_e(n, j - 1), Scalar::q());
    } else {
        u = i == j + 1 ? AlgebraElement::gen_f(n, j)
                       : AlgebraElement::kbar(n, j + 1) *
                             qcommutator(pair_preimage(n, i, j + 1),
                                         AlgebraElement::gen_f(n, j), Scalar::q());
    }
    auto ptr = std::make_shared<const AlgebraElement>(std::move(u));
    std::unique_lock lock(mtx);
    return *cache.emplace(key, std::move(ptr)).first->second;
}

}  // namespace

AlgebraElement degree_zero_preimage(const GwaElement& a) {
    const int n = a.rank();
    const auto deg = euler_degree(a);
    if (!deg || *deg != 0) throw math_error("preimage requires an Euler-degree-zero element");
    AlgebraElement out = AlgebraElement::zero(n);
    for (const auto& [m, c] : a.terms()) {
        std::vector<int> xs, ys;
        for (int i = 0; i <= n; ++i) {
            xs.insert(xs.end(), m.x[i], i + 1);
            ys.insert(ys.end(), m.y[i], i + 1);
        }
        AlgebraElement term = AlgebraElement::k_laurent(n, m.w) * c;
        for (std::size_t t = 0; t < xs.size(); ++t)
            term = term * pair_preimage(n, xs[t], ys[t]);
        out = out + term;
    }
    return out;
}

IdentityReport check_pi_homomorphism(int n) {
    if (n < 1) throw std::invalid_argument("rank must be at least 1");
    if (n > 4) throw std::invalid_argument("relation sweeps are capped at rank 4");
    IdentityReport rep{"pi-homomorphism", n, {}};
    const Scalar qmi = q_minus_qinv().inv();

    auto PE = [&](int i) { return pi_letter(n, GenLetter{GenLetter::Type::E, i, 1}); };
    auto PF = [&](int i) { return pi_letter(n, GenLetter{GenLetter::Type::F, i, 1}); };
    auto PK = [&](int j, int e) { return GwaElement::omega(n, j, e); };

    auto record = [&](const GwaElement& residual, std::string desc) {
        IdentityInstance inst;
        inst.description = std::move(desc);
        inst.pass = residual.is_zero();
        if (!inst.pass) inst.residual = residual.str();
        rep.instances.push_back(std::move(inst));
    };

    for (int j = 1; j <= n + 1; ++j)
        for (int i = 1; i <= n; ++i) {
            const int w = (j == i ? 1 : 0) - (j == i + 1 ? 1 : 0);
            std::ostringstream d1, d2;
            d1 << "torus j=" << j << " i=" << i << " [E]";
            d2 << "torus j=" << j << " i=" << i << " [F]";
            record(PK(j, 1) * PE(i) - (PE(i) * PK(j, 1)) * Scalar::q_pow(w), d1.str());
            record(PK(j, 1) * PF(i) - (PF(i) * PK(j, 1)) * Scalar::q_pow(-w), d2.str());
        }
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            GwaElement res = PE(i) * PF(j) - PF(j) * PE(i);
            if (i == j)
                res = res - (PK(i, 1) * PK(i + 1, -1) - PK(i, -1) * PK(i + 1, 1)) * qmi;
            std::ostringstream d;
            d << "commutator i=" << i << " j=" << j;
            record(res, d.str());
        }
    for (int i = 1; i <= n; ++i)
        for (int j = i + 2; j <= n; ++j) {
            std::ostringstream d1, d2;
            d1 << "distant i=" << i << " j=" << j << " [E]";
            d2 << "distant i=" << i << " j=" << j << " [F]";
            record(PE(i) * PE(j) - PE(j) * PE(i), d1.str());
            record(PF(i) * PF(j) - PF(j) * PF(i), d2.str());
        }
    const Scalar two = qint(2);
    for (int i = 1; i <= n; ++i)
        for (int j : {i - 1, i + 1}) {
            if (j < 1 || j > n) continue;
            std::ostringstream d1, d2;
            d1 << "serre i=" << i << " j=" << j << " [E]";
            d2 << "serre i=" << i << " j=" << j << " [F]";
            record(PE(i) * PE(i) * PE(j) - (PE(i) * PE(j) * PE(i)) * two + PE(j) * PE(i) * PE(i),
                   d1.str());
            record(PF(i) * PF(i) * PF(j) - (PF(i) * PF(j) * PF(i)) * two + PF(j) * PF(i) * PF(i),
                   d2.str());
        }
    return rep;
}

GwaElement cyclic_bracket_form(const AlgebraElement& x) {
    const int n = x.rank();
    const auto ro = convex_order(n);
    for (const auto& [m, c] : x.terms()) {
        std::vector<int> wt(n + 1, 0);
        for (int p = 0; p < static_cast<int>(ro.size()); ++p) {
            wt[ro[p].i - 1] += m.e[p] - m.f[p];
            wt[ro[p].j - 1] += m.f[p] - m.e[p];
        }
        for (int v : wt)
            if (v) throw math_error("element is not in the cyclic subalgebra");
    }

    const Scalar qmi = q_minus_qinv().inv();
    auto bracket = [&](int idx, int mdeg) {
        return GwaElement::omega(n, idx, 1) * (Scalar::q_pow(mdeg) * qmi) -
               GwaElement::omega(n, idx, -1) * (Scalar::q_pow(-mdeg) * qmi);
    };

    GwaElement out = GwaElement::zero(n);
    for (const auto& [s, word] : expand_to_generators(x)) {
        std::vector<int> iv, jv;
        std::vector<int32_t> k(n + 1, 0);
        for (const GenLetter& g : word) {
            if (g.type == GenLetter::Type::F) iv.push_back(g.idx);
            else if (g.type == GenLetter::Type::Kb) k[g.idx - 1] += g.exp;
            else jv.push_back(g.idx);
        }
        int cs = 0;  // torus part moves to the front across the F letters
        for (int i : iv) cs += k[i - 1] - k[i];
        {
            std::vector<int> si = iv, sj = jv;
            std::sort(si.begin(), si.end());
            std::sort(sj.begin(), sj.end());
            if (si != sj) throw std::logic_error("cyclic word is not index-balanced");
        }
        GwaElement factor = GwaElement::omega_laurent(n, k) * (s * Scalar::q_pow(cs));
        const int l = static_cast<int>(iv.size());
        for (int r = 0; r < l; ++r) {
            std::multiset<int> D(jv.begin(), jv.end());
            for (int t = r + 1; t < l; ++t) {
                auto it = D.find(iv[t]);
                if (it == D.end()) throw std::logic_error("cyclic word is not index-balanced");
                D.erase(it);
            }
            const int s_r = static_cast<int>(D.count(iv[r]));
            const int sp_r = static_cast<int>(D.count(iv[r] - 1));
            int t_r = 0, tp_r = 0;
            for (int t = r + 1; t < l; ++t) {
                t_r += jv[t] == jv[r] + 1 ? 1 : 0;
                tp_r += jv[t] == jv[r] ? 1 : 0;
            }
            factor = factor * bracket(iv[r], s_r - sp_r);
            factor = factor * bracket(jv[r] + 1, t_r - tp_r);
        }
        out = out + factor;
    }
    if (out != pi(x))
        throw std::logic_error("cyclic bracket form disagrees with the homomorphism image");
    return out;
}

std::string GwaElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::vector<std::string> parts;
        auto letter = [&](const char* name, int i, int exp) {
            std::ostringstream ls;
            ls << name << i + 1;
            if (exp != 1) ls << "^" << exp;
            parts.push_back(ls.str());
        };
        for (int i = 0; i <= n_; ++i)
            if (m.w[i]) letter("w", i, m.w[i]);
        for (int i = 0; i <= n_; ++i)
            if (m.x[i]) letter("x", i, m.x[i]);
        for (int i = 0; i <= n_; ++i)
            if (m.y[i]) letter("y", i, m.y[i]);
        if (!c.is_one() || parts.empty())
            parts.insert(parts.begin(), "(" + c.str() + ")");
        for (std::size_t t = 0; t < parts.size(); ++t) {
            if (t) os << " ";
            os << parts[t];
        }
    }
    return os.str();
}

namespace {

struct GwaParser {
    const std::string& text;
    std::size_t pos = 0;
    int n;

    explicit GwaParser(const std::string& t, int rank) : text(t), n(rank) {}

    [[noreturn]] void fail(const std::string& msg) {
        throw std::invalid_argument("element parse error at position " + std::to_string(pos) +
                                    ": " + msg);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char ch) {
        skip_ws();
        if (pos < text.size() && text[pos] == ch) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    long parse_int() {
        skip_ws();
        bool neg = false;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) neg = text[pos++] == '-';
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected integer");
        long v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos++] - '0');
            if (v > 1000000) fail("integer literal too large");
        }
        return neg ? -v : v;
    }

    std::string parse_name() {
        skip_ws();
        std::string name;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos])))
            name += text[pos++];
        return name;
    }

    std::pair<long, bool> parse_exponent() {
        skip_ws();
        if (eat('(')) {
            const long a = parse_int();
            if (!eat('/')) fail("expected / in fractional exponent");
            if (parse_int() != 2) fail("only halves are supported in exponents");
            if (!eat(')')) fail("expected )");
            return {a, true};
        }
        return {parse_int(), false};
    }

    GwaElement parse_expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        GwaElement acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            if (eat('+'))
                acc = acc + parse_term();
            else if (eat('-'))
                acc = acc - parse_term();
            else
                break;
        }
        return acc;
    }

    bool at_factor_start() {
        const char ch = peek();
        return ch == '(' || std::isdigit(static_cast<unsigned char>(ch)) ||
               std::isalpha(static_cast<unsigned char>(ch));
    }

    GwaElement parse_term() {
        GwaElement acc = parse_factor();
        while (true) {
            if (eat('/'))
                acc = acc * element_as_scalar(parse_factor()).inv();
            else if (at_factor_start())
                acc = acc * parse_factor();
            else
                break;
        }
        return acc;
    }

    Scalar element_as_scalar(const GwaElement& a) {
        if (a.is_zero()) return Scalar::from_int(0);
        if (a.terms().size() == 1) {
            const auto& [m, c] = *a.terms().begin();
            if (m == gwa_unit_monomial(n)) return c;
        }
        fail("division is only defined by scalars");
    }

    GwaElement parse_factor() {
        GwaElement base = parse_primary();
        while (peek() == '^') {
            eat('^');
            const auto [a, half] = parse_exponent();
            if (half) {
                const Scalar s = element_as_scalar(base);
                const auto toral = as_toral(s);
                if (!toral) fail("half powers apply to toral scalars only");
                base = GwaElement::scalar(
                    n, toral_sqrt(*toral).pow(static_cast<int>(a)).to_scalar());
            } else {
                base = element_pow(base, static_cast<int>(a));
            }
        }
        return base;
    }

    GwaElement element_pow(const GwaElement& a, int e) {
        if (e >= 0) return a.pow(e);
        if (a.terms().size() == 1) {
            const auto& [m, c] = *a.terms().begin();
            bool xy = false;
            for (int i = 0; i <= n; ++i) xy = xy || m.x[i] || m.y[i];
            if (!xy) {
                std::vector<int32_t> w(m.w.size());
                for (std::size_t t = 0; t < w.size(); ++t) w[t] = m.w[t] * e;
                return GwaElement::omega_laurent(n, std::move(w)) * c.pow(e);
            }
        }
        fail("negative powers are only defined for scalars and torus monomials");
    }

    GwaElement parse_primary() {
        skip_ws();
        if (eat('(')) {
            GwaElement inner = parse_expr();
            if (!eat(')')) fail("expected )");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(peek())))
            return GwaElement::scalar(n, Scalar::from_int(parse_int()));
        const std::string name = parse_name();
        if (name.empty()) fail("expected a letter, number, or (");
        if (name == "q") return GwaElement::scalar(n, Scalar::q());
        if (name == "c") return GwaElement::scalar(n, Scalar::param(static_cast<int>(parse_int())));
        if (name == "Eq") return qeuler(n);
        if (name == "x") return GwaElement::gen_x(n, static_cast<int>(parse_int()));
        if (name == "y") return GwaElement::gen_y(n, static_cast<int>(parse_int()));
        if (name == "w") return GwaElement::omega(n, static_cast<int>(parse_int()));
        fail("unknown letter: " + name);
    }
};

}  // namespace

GwaElement parse_gwa(const std::string& text, int n) {
    GwaParser p(text, n);
    GwaElement out = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return out;
}

}  // namespace qua
