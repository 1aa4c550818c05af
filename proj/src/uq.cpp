#include "qua/uq.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>

namespace qua {

namespace {

const std::vector<Root>& roots_for(int n) {
    static std::shared_mutex mtx;
    static std::map<int, std::vector<Root>> cache;
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    std::unique_lock lock(mtx);
    return cache.emplace(n, convex_order(n)).first->second;
}

// One root-vector letter inside a word being straightened.
// kind: 0 = negative root vector, 1 = positive. pos: convex index.
struct EF {
    int8_t kind;
    int16_t pos;
    auto operator<=>(const EF&) const = default;
};

struct RuleTerm {
    Scalar coef;
    std::vector<int32_t> kcorr;  // torus factor picked up by the rewrite
    std::vector<EF> letters;
};
using Rule = std::vector<RuleTerm>;

std::vector<int32_t> kdelta(int n, int plus, int minus) {
    std::vector<int32_t> k(n + 1, 0);
    k[plus - 1] += 1;
    k[minus - 1] -= 1;
    return k;
}

EF mk(int8_t kind, const Root& r, int n) {
    return EF{kind, static_cast<int16_t>(convex_index(r, n))};
}

// Rewrite of the out-of-order pair x·y as a combination of shorter-or-swapped
// words. Same-kind pairs require x >lex y; mixed pairs are positive·negative.
Rule make_rule(int n, EF x, EF y) {
    const auto& ro = roots_for(n);
    const Scalar one = Scalar::one();
    const Scalar qm = q_minus_qinv();
    const int a = ro[x.pos].i, b = ro[x.pos].j;
    const int c = ro[y.pos].i, d = ro[y.pos].j;

    Rule rule;
    auto swap_term = [&](Scalar s) { rule.push_back({std::move(s), {}, {y, x}}); };

    if (x.kind == y.kind) {
        if (a == c || b == d) {
            swap_term(Scalar::q_pow(-1));
        } else if (a == d) {
            swap_term(Scalar::q_pow(1));
            rule.push_back({x.kind ? Scalar::q_pow(1) : -one, {}, {mk(x.kind, Root{c, b}, n)}});
        } else if (c < a && a < d && d < b) {
            swap_term(one);
            rule.push_back({-qm, {}, {mk(x.kind, Root{c, b}, n), mk(x.kind, Root{a, d}, n)}});
        } else {
            swap_term(one);  // disjoint or nested supports commute
        }
        return rule;
    }

    // x positive on root (a,b), y negative on root (c,d)
    if (a == c && b == d) {
        swap_term(one);
        rule.push_back({qm.inv(), kdelta(n, a, b), {}});
        rule.push_back({-qm.inv(), kdelta(n, b, a), {}});
    } else if (a == c && b < d) {
        swap_term(one);
        rule.push_back({one, kdelta(n, a, b), {mk(0, Root{b, d}, n)}});
    } else if (a == c && b > d) {
        swap_term(one);
        rule.push_back({Scalar::q_pow(-1), kdelta(n, d, a), {mk(1, Root{d, b}, n)}});
    } else if (b == d && a > c) {
        swap_term(one);
        rule.push_back({-Scalar::q_pow(1), kdelta(n, b, a), {mk(0, Root{c, a}, n)}});
    } else if (b == d && a < c) {
        swap_term(one);
        rule.push_back({-one, kdelta(n, c, b), {mk(1, Root{a, c}, n)}});
    } else if (a < c && c < b && b < d) {
        swap_term(one);
        rule.push_back({-qm, kdelta(n, c, b), {mk(0, Root{b, d}, n), mk(1, Root{a, c}, n)}});
    } else if (c < a && a < d && d < b) {
        swap_term(one);
        rule.push_back({qm, kdelta(n, d, a), {mk(1, Root{d, b}, n), mk(0, Root{c, a}, n)}});
    } else {
        swap_term(one);  // touching or disjoint or nested supports commute
    }
    return rule;
}

std::shared_ptr<const Rule> rule_for(int n, EF x, EF y) {
    static std::shared_mutex mtx;
    static std::map<uint64_t, std::shared_ptr<const Rule>> cache;
    const uint64_t key = (static_cast<uint64_t>(n) << 40) |
                         (static_cast<uint64_t>(x.kind) << 36) |
                         (static_cast<uint64_t>(x.pos) << 20) |
                         (static_cast<uint64_t>(y.kind) << 16) | static_cast<uint64_t>(y.pos);
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto rule = std::make_shared<const Rule>(make_rule(n, x, y));
    std::unique_lock lock(mtx);
    return cache.emplace(key, std::move(rule)).first->second;
}

// Exponent picked up when a torus monomial K(k) moves left across letter g.
int cross_left(const EF& g, const std::vector<int32_t>& k, const std::vector<Root>& ro) {
    const Root& r = ro[g.pos];
    return g.kind ? k[r.j - 1] - k[r.i - 1] : k[r.i - 1] - k[r.j - 1];
}

// Work form: coefficient · K(kv) · word. PBW violations are fixed pair by
// pair, leftmost first; torus corrections fold into kv across the prefix.
struct WorkItem {
    Scalar c;
    std::vector<int32_t> kv;
    std::vector<EF> w;
};

void accumulate(std::map<PbwMonomial, Scalar>& acc, PbwMonomial m, const Scalar& c) {
    auto [pos, fresh] = acc.emplace(std::move(m), c);
    if (!fresh) {
        pos->second = pos->second + c;
        if (pos->second.is_zero()) acc.erase(pos);
    }
}

void normalize_into(int n, WorkItem start, std::map<PbwMonomial, Scalar>& acc) {
    const auto& ro = roots_for(n);
    const int r = static_cast<int>(ro.size());
    std::vector<WorkItem> stack;
    stack.push_back(std::move(start));
    long steps = 0;
    while (!stack.empty()) {
        if (++steps > 20'000'000L) throw std::logic_error("straightening exceeded step budget");
        WorkItem it = std::move(stack.back());
        stack.pop_back();
        if (it.c.is_zero()) continue;

        int p = -1;
        for (int t = 0; t + 1 < static_cast<int>(it.w.size()); ++t) {
            const EF &x = it.w[t], &y = it.w[t + 1];
            if ((x.kind == 1 && y.kind == 0) || (x.kind == y.kind && x.pos > y.pos)) {
                p = t;
                break;
            }
        }
        if (p < 0) {
            PbwMonomial m;
            m.f.assign(r, 0);
            m.e.assign(r, 0);
            int csum = 0;  // K(kv) moves right across the negative part
            for (const EF& g : it.w) {
                if (g.kind == 0) {
                    m.f[g.pos] += 1;
                    csum += it.kv[ro[g.pos].j - 1] - it.kv[ro[g.pos].i - 1];
                } else {
                    m.e[g.pos] += 1;
                }
            }
            m.k = std::move(it.kv);
            accumulate(acc, std::move(m), csum ? it.c * Scalar::q_pow(csum) : it.c);
            continue;
        }

        const auto rule = rule_for(n, it.w[p], it.w[p + 1]);
        for (const RuleTerm& t : *rule) {
            WorkItem next;
            next.c = it.c * t.coef;
            next.kv = it.kv;
            if (!t.kcorr.empty()) {
                int csum = 0;
                for (int u = 0; u < p; ++u) csum += cross_left(it.w[u], t.kcorr, ro);
                if (csum) next.c = next.c * Scalar::q_pow(csum);
                for (int j = 0; j <= n; ++j) next.kv[j] += t.kcorr[j];
            }
            next.w.assign(it.w.begin(), it.w.begin() + p);
            next.w.insert(next.w.end(), t.letters.begin(), t.letters.end());
            next.w.insert(next.w.end(), it.w.begin() + p + 2, it.w.end());
            stack.push_back(std::move(next));
        }
    }
}

void check_gen_index(int i, int n, const char* what) {
    if (i < 1 || i > n) throw std::invalid_argument(std::string(what) + " index out of range");
}

}  // namespace

PbwMonomial unit_monomial(int n) {
    const int r = n * (n + 1) / 2;
    PbwMonomial m;
    m.f.assign(r, 0);
    m.k.assign(n + 1, 0);
    m.e.assign(r, 0);
    return m;
}

AlgebraElement::AlgebraElement(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("rank must be at least 1");
}

AlgebraElement AlgebraElement::zero(int n) { return AlgebraElement(n); }

AlgebraElement AlgebraElement::unit(int n) { return scalar(n, Scalar::one()); }

AlgebraElement AlgebraElement::scalar(int n, const Scalar& s) {
    AlgebraElement a(n);
    if (!s.is_zero()) a.terms_.emplace(unit_monomial(n), s);
    return a;
}

AlgebraElement AlgebraElement::gen_e(int n, int i) {
    check_gen_index(i, n, "generator");
    PbwMonomial m = unit_monomial(n);
    m.e[convex_index(Root{i, i + 1}, n)] = 1;
    return monomial(n, std::move(m));
}

AlgebraElement AlgebraElement::gen_f(int n, int i) {
    check_gen_index(i, n, "generator");
    PbwMonomial m = unit_monomial(n);
    m.f[convex_index(Root{i, i + 1}, n)] = 1;
    return monomial(n, std::move(m));
}

AlgebraElement AlgebraElement::kbar(int n, int j, int exp) {
    if (j < 1 || j > n + 1) throw std::invalid_argument("torus index out of range");
    PbwMonomial m = unit_monomial(n);
    m.k[j - 1] = exp;
    return monomial(n, std::move(m));
}

AlgebraElement AlgebraElement::k_sl(int n, int i, int exp) {
    check_gen_index(i, n, "torus");
    PbwMonomial m = unit_monomial(n);
    m.k[i - 1] = exp;
    m.k[i] = -exp;
    return monomial(n, std::move(m));
}

AlgebraElement AlgebraElement::k_laurent(int n, std::vector<int32_t> exps) {
    if (static_cast<int>(exps.size()) != n + 1)
        throw std::invalid_argument("torus exponent vector has wrong length");
    PbwMonomial m = unit_monomial(n);
    m.k = std::move(exps);
    return monomial(n, std::move(m));
}

AlgebraElement AlgebraElement::monomial(int n, PbwMonomial m, Scalar c) {
    const int r = n * (n + 1) / 2;
    if (static_cast<int>(m.f.size()) != r || static_cast<int>(m.e.size()) != r ||
        static_cast<int>(m.k.size()) != n + 1)
        throw std::invalid_argument("monomial shape does not match rank");
    for (int32_t v : m.f)
        if (v < 0) throw std::invalid_argument("negative exponent in PBW monomial");
    for (int32_t v : m.e)
        if (v < 0) throw std::invalid_argument("negative exponent in PBW monomial");
    AlgebraElement a(n);
    if (!c.is_zero()) a.terms_.emplace(std::move(m), std::move(c));
    return a;
}

void AlgebraElement::insert(PbwMonomial m, Scalar c) {
    if (c.is_zero()) return;
    accumulate(terms_, std::move(m), c);
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    if (n_ != o.n_) throw std::invalid_argument("rank mismatch");
    AlgebraElement out = *this;
    for (const auto& [m, c] : o.terms_) out.insert(m, c);
    return out;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const { return *this + (-o); }

AlgebraElement AlgebraElement::operator-() const {
    AlgebraElement out(n_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
    return multiply(*this, o);
}

AlgebraElement AlgebraElement::operator*(const Scalar& s) const {
    AlgebraElement out(n_);
    if (s.is_zero()) return out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, c * s);
    return out;
}

AlgebraElement AlgebraElement::pow(int m) const {
    if (m < 0) throw std::invalid_argument("negative element power");
    AlgebraElement out = unit(n_);
    for (int t = 0; t < m; ++t) out = out * *this;
    return out;
}

bool AlgebraElement::operator==(const AlgebraElement& o) const {
    return n_ == o.n_ && terms_ == o.terms_;
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("rank mismatch");
    const int n = a.n_;
    const auto& ro = roots_for(n);
    AlgebraElement out(n);
    for (const auto& [m1, c1] : a.terms_) {
        for (const auto& [m2, c2] : b.terms_) {
            WorkItem it;
            it.kv.resize(n + 1);
            for (int j = 0; j <= n; ++j) it.kv[j] = m1.k[j] + m2.k[j];

            auto push_letters = [&](const std::vector<int32_t>& exps, int8_t kind) {
                for (int p = 0; p < static_cast<int>(exps.size()); ++p)
                    for (int t = 0; t < exps[p]; ++t)
                        it.w.push_back(EF{kind, static_cast<int16_t>(p)});
            };

            int csum = 0;
            push_letters(m1.f, 0);
            for (const EF& g : it.w) csum += cross_left(g, m1.k, ro);
            push_letters(m1.e, 1);
            push_letters(m2.f, 0);
            for (const EF& g : it.w) csum += cross_left(g, m2.k, ro);
            push_letters(m2.e, 1);

            it.c = c1 * c2;
            if (csum) it.c = it.c * Scalar::q_pow(csum);
            normalize_into(n, std::move(it), out.terms_);
        }
    }
    return out;
}

AlgebraElement qcommutator(const AlgebraElement& a, const AlgebraElement& b, const Scalar& v) {
    return a * b - (b * a) * v;
}

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) {
    return qcommutator(a, b, Scalar::one());
}

AlgebraElement root_vector(int n, const Root& beta) {
    check_root(beta, n);
    PbwMonomial m = unit_monomial(n);
    if (beta.positive())
        m.e[convex_index(beta, n)] = 1;
    else
        m.f[convex_index(beta.negated(), n)] = 1;
    return AlgebraElement::monomial(n, std::move(m));
}

AlgebraElement torus_bracket(int n, const std::vector<int32_t>& kexps, int j) {
    std::vector<int32_t> neg(kexps.size());
    for (std::size_t t = 0; t < kexps.size(); ++t) neg[t] = -kexps[t];
    const Scalar d = q_minus_qinv().inv();
    return AlgebraElement::k_laurent(n, kexps) * (Scalar::q_pow(j) * d) -
           AlgebraElement::k_laurent(n, std::move(neg)) * (Scalar::q_pow(-j) * d);
}

namespace {

using Expansion = std::vector<std::pair<Scalar, GenWord>>;

// E_{(a,b)} and its negative companion written in simple generators via the
// two chain recursions; memoized per root and sign.
const Expansion& letter_expansion(int8_t kind, int a, int b) {
    static std::shared_mutex mtx;
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const Expansion>> cache;
    const std::tuple<int, int, int> key{kind, a, b};
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    Expansion exp;
    if (b == a + 1) {
        exp.push_back({Scalar::one(),
                       {GenLetter{kind ? GenLetter::Type::E : GenLetter::Type::F, a, 1}}});
    } else {
        const Expansion& inner = letter_expansion(kind, a, b - 1);
        const GenLetter last{kind ? GenLetter::Type::E : GenLetter::Type::F, b - 1, 1};
        for (const auto& [s, w] : inner) {
            GenWord pre{last};
            pre.insert(pre.end(), w.begin(), w.end());
            GenWord post = w;
            post.push_back(last);
            if (kind) {
                // E_{(a,b)} = q^{-1} E_{b-1} E_{(a,b-1)} − E_{(a,b-1)} E_{b-1}
                exp.push_back({s * Scalar::q_pow(-1), std::move(pre)});
                exp.push_back({-s, std::move(post)});
            } else {
                // negative side: −F_{b-1} F_{(a,b-1)} + q F_{(a,b-1)} F_{b-1}
                exp.push_back({-s, std::move(pre)});
                exp.push_back({s * Scalar::q_pow(1), std::move(post)});
            }
        }
    }
    auto ptr = std::make_shared<const Expansion>(std::move(exp));
    std::unique_lock lock(mtx);
    return *cache.emplace(key, std::move(ptr)).first->second;
}

}  // namespace

std::vector<std::pair<Scalar, GenWord>> expand_to_generators(const AlgebraElement& a) {
    const int n = a.rank();
    const auto& ro = roots_for(n);
    std::vector<std::pair<Scalar, GenWord>> out;
    for (const auto& [m, c] : a.terms()) {
        std::vector<std::pair<Scalar, GenWord>> words{{c, {}}};
        auto fold_expansion = [&](const Expansion& exp) {
            std::vector<std::pair<Scalar, GenWord>> next;
            next.reserve(words.size() * exp.size());
            for (const auto& [s1, w1] : words)
                for (const auto& [s2, w2] : exp) {
                    GenWord w = w1;
                    w.insert(w.end(), w2.begin(), w2.end());
                    next.push_back({s1 * s2, std::move(w)});
                }
            words = std::move(next);
        };
        for (int p = 0; p < static_cast<int>(m.f.size()); ++p)
            for (int t = 0; t < m.f[p]; ++t) fold_expansion(letter_expansion(0, ro[p].i, ro[p].j));
        for (int j = 0; j <= n; ++j)
            if (m.k[j])
                for (auto& [s, w] : words) w.push_back(GenLetter{GenLetter::Type::Kb, j + 1, m.k[j]});
        for (int p = 0; p < static_cast<int>(m.e.size()); ++p)
            for (int t = 0; t < m.e[p]; ++t) fold_expansion(letter_expansion(1, ro[p].i, ro[p].j));
        out.insert(out.end(), std::make_move_iterator(words.begin()),
                   std::make_move_iterator(words.end()));
    }
    return out;
}

bool in_sl_subalgebra(const AlgebraElement& a) {
    for (const auto& [m, c] : a.terms()) {
        int32_t sum = 0;
        for (int32_t v : m.k) sum += v;
        if (sum != 0) return false;
    }
    return true;
}

std::optional<std::map<std::vector<int32_t>, Scalar>> pure_torus_part(const AlgebraElement& a) {
    std::map<std::vector<int32_t>, Scalar> out;
    for (const auto& [m, c] : a.terms()) {
        for (int32_t v : m.f)
            if (v) return std::nullopt;
        for (int32_t v : m.e)
            if (v) return std::nullopt;
        out.emplace(m.k, c);
    }
    return out;
}

AlgebraElement braid_T(int i, const AlgebraElement& a, bool inverse) {
    const int n = a.rank();
    check_gen_index(i, n, "automorphism");
    const Scalar qinv = Scalar::q_pow(-1);
    const Scalar qq = Scalar::q_pow(1);

    auto image = [&](const GenLetter& g) -> AlgebraElement {
        switch (g.type) {
            case GenLetter::Type::Kb: {
                const int j = g.idx == i ? i + 1 : (g.idx == i + 1 ? i : g.idx);
                return AlgebraElement::kbar(n, j, g.exp);
            }
            case GenLetter::Type::E: {
                const int j = g.idx;
                if (j == i)
                    return inverse ? -(AlgebraElement::k_sl(n, i, -1) * AlgebraElement::gen_f(n, i))
                                   : -(AlgebraElement::gen_f(n, i) * AlgebraElement::k_sl(n, i));
                if (j == i + 1 || j == i - 1) {
                    const AlgebraElement Ei = AlgebraElement::gen_e(n, i);
                    const AlgebraElement Ej = AlgebraElement::gen_e(n, j);
                    return inverse ? (Ei * Ej) * qinv - Ej * Ei : (Ej * Ei) * qinv - Ei * Ej;
                }
                return AlgebraElement::gen_e(n, j);
            }
            case GenLetter::Type::F: {
                const int j = g.idx;
                if (j == i)
                    return inverse ? -(AlgebraElement::gen_e(n, i) * AlgebraElement::k_sl(n, i))
                                   : -(AlgebraElement::k_sl(n, i, -1) * AlgebraElement::gen_e(n, i));
                if (j == i + 1 || j == i - 1) {
                    const AlgebraElement Fi = AlgebraElement::gen_f(n, i);
                    const AlgebraElement Fj = AlgebraElement::gen_f(n, j);
                    return inverse ? (Fj * Fi) * qq - Fi * Fj : (Fi * Fj) * qq - Fj * Fi;
                }
                return AlgebraElement::gen_f(n, j);
            }
        }
        throw std::logic_error("unreachable letter type");
    };

    AlgebraElement out = AlgebraElement::zero(n);
    for (const auto& [s, word] : expand_to_generators(a)) {
        AlgebraElement acc = AlgebraElement::scalar(n, s);
        for (const GenLetter& g : word) acc = acc * image(g);
        out = out + acc;
    }
    return out;
}

AlgebraElement braid_string(const std::vector<int>& word, const AlgebraElement& a, bool inverse) {
    AlgebraElement out = a;
    for (auto it = word.rbegin(); it != word.rend(); ++it) out = braid_T(*it, out, inverse);
    return out;
}

namespace {

AlgebraElement Ep(int n, int i, int j) { return root_vector(n, Root{i, j}); }
AlgebraElement Em(int n, int i, int j) { return root_vector(n, Root{j, i}); }

std::string tuple_desc(std::initializer_list<std::pair<const char*, int>> parts,
                       const std::string& variant) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, v] : parts) {
        if (!first) os << " ";
        first = false;
        os << name << "=" << v;
    }
    if (!variant.empty()) os << " [" << variant << "]";
    return os.str();
}

void check_zero(IdentityReport& rep, const AlgebraElement& residual, std::string desc) {
    IdentityInstance inst;
    inst.description = std::move(desc);
    inst.pass = residual.is_zero();
    if (!inst.pass) inst.residual = residual.str();
    rep.instances.push_back(std::move(inst));
}

void check_equal(IdentityReport& rep, const AlgebraElement& lhs, const AlgebraElement& rhs,
                 std::string desc) {
    check_zero(rep, lhs - rhs, std::move(desc));
}

std::vector<AlgebraElement> all_generators(int n) {
    std::vector<AlgebraElement> gens;
    for (int i = 1; i <= n; ++i) {
        gens.push_back(AlgebraElement::gen_e(n, i));
        gens.push_back(AlgebraElement::gen_f(n, i));
    }
    for (int j = 1; j <= n + 1; ++j) gens.push_back(AlgebraElement::kbar(n, j));
    return gens;
}

}  // namespace

std::vector<std::string> identity_tags() {
    return {"torus",       "ef-simple",     "distant-commute", "serre",
            "chain-pos",   "chain-neg",     "mixed-target",    "mixed-source",
            "q-scale-pos", "q-scale-neg",   "four-index",      "ef-same-root",
            "braid",       "braid-inverse", "braid-morphism",  "braid-shift",
            "root-vector-def", "simplified-root-vector"};
}

IdentityReport verify_identity(const std::string& tag, int n) {
    if (n < 1) throw std::invalid_argument("rank must be at least 1");
    if (n > 4) throw std::invalid_argument("identity sweeps are capped at rank 4");
    IdentityReport rep{tag, n, {}};
    const Scalar qm = q_minus_qinv();

    if (tag == "torus") {
        for (int j = 1; j <= n + 1; ++j)
            for (int i = 1; i <= n; ++i) {
                const int w = (j == i ? 1 : 0) - (j == i + 1 ? 1 : 0);
                const AlgebraElement K = AlgebraElement::kbar(n, j);
                const AlgebraElement E = AlgebraElement::gen_e(n, i);
                const AlgebraElement F = AlgebraElement::gen_f(n, i);
                check_zero(rep, K * E - (E * K) * Scalar::q_pow(w),
                           tuple_desc({{"j", j}, {"i", i}}, "E"));
                check_zero(rep, K * F - (F * K) * Scalar::q_pow(-w),
                           tuple_desc({{"j", j}, {"i", i}}, "F"));
            }
    } else if (tag == "ef-simple") {
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                AlgebraElement res = commutator(AlgebraElement::gen_e(n, i),
                                                AlgebraElement::gen_f(n, j));
                if (i == j) res = res - torus_bracket(n, kdelta(n, i, i + 1), 0);
                check_zero(rep, res, tuple_desc({{"i", i}, {"j", j}}, ""));
            }
    } else if (tag == "distant-commute") {
        for (int i = 1; i <= n; ++i)
            for (int j = i + 2; j <= n; ++j) {
                check_zero(rep,
                           commutator(AlgebraElement::gen_e(n, i), AlgebraElement::gen_e(n, j)),
                           tuple_desc({{"i", i}, {"j", j}}, "E"));
                check_zero(rep,
                           commutator(AlgebraElement::gen_f(n, i), AlgebraElement::gen_f(n, j)),
                           tuple_desc({{"i", i}, {"j", j}}, "F"));
            }
    } else if (tag == "serre") {
        const Scalar two = qint(2);
        for (int i = 1; i <= n; ++i)
            for (int j : {i - 1, i + 1}) {
                if (j < 1 || j > n) continue;
                const AlgebraElement Ei = AlgebraElement::gen_e(n, i);
                const AlgebraElement Ej = AlgebraElement::gen_e(n, j);
                const AlgebraElement Fi = AlgebraElement::gen_f(n, i);
                const AlgebraElement Fj = AlgebraElement::gen_f(n, j);
                check_zero(rep, Ei * Ei * Ej - (Ei * Ej * Ei) * two + Ej * Ei * Ei,
                           tuple_desc({{"i", i}, {"j", j}}, "E"));
                check_zero(rep, Fi * Fi * Fj - (Fi * Fj * Fi) * two + Fj * Fi * Fi,
                           tuple_desc({{"i", i}, {"j", j}}, "F"));
            }
    } else if (tag == "chain-pos" || tag == "chain-neg") {
        for (int i = 1; i <= n + 1; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                for (int k = j + 1; k <= n + 1; ++k) {
                    const AlgebraElement res =
                        tag == "chain-pos"
                            ? Ep(n, i, k) + qcommutator(Ep(n, i, j), Ep(n, j, k), Scalar::q_pow(-1))
                            : Em(n, i, k) + qcommutator(Em(n, j, k), Em(n, i, j), Scalar::q_pow(1));
                    check_zero(rep, res, tuple_desc({{"i", i}, {"j", j}, {"k", k}}, ""));
                }
    } else if (tag == "mixed-target" || tag == "mixed-source") {
        for (int i = 1; i <= n + 1; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                for (int k = j + 1; k <= n + 1; ++k) {
                    if (tag == "mixed-target") {
                        check_zero(rep,
                                   commutator(Ep(n, j, k), Em(n, i, k)) +
                                       (AlgebraElement::k_laurent(n, kdelta(n, k, j)) *
                                        Em(n, i, j)) * Scalar::q_pow(1),
                                   tuple_desc({{"i", i}, {"j", j}, {"k", k}}, "first"));
                        check_zero(rep,
                                   commutator(Ep(n, i, k), Em(n, j, k)) +
                                       AlgebraElement::k_laurent(n, kdelta(n, j, k)) * Ep(n, i, j),
                                   tuple_desc({{"i", i}, {"j", j}, {"k", k}}, "second"));
                    } else {
                        check_zero(rep,
                                   commutator(Ep(n, i, j), Em(n, i, k)) -
                                       AlgebraElement::k_laurent(n, kdelta(n, i, j)) * Em(n, j, k),
                                   tuple_desc({{"i", i}, {"j", j}, {"k", k}}, "first"));
                        check_zero(rep,
                                   commutator(Ep(n, i, k), Em(n, i, j)) -
                                       (AlgebraElement::k_laurent(n, kdelta(n, j, i)) *
                                        Ep(n, j, k)) * Scalar::q_pow(-1),
                                   tuple_desc({{"i", i}, {"j", j}, {"k", k}}, "second"));
                    }
                }
    } else if (tag == "q-scale-pos" || tag == "q-scale-neg") {
        const bool pos = tag == "q-scale-pos";
        for (int i = 1; i <= n + 1; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                for (int k = j + 1; k <= n + 1; ++k) {
                    auto V = [&](int a, int b) { return pos ? Ep(n, a, b) : Em(n, a, b); };
                    check_zero(rep, V(j, k) * V(i, k) - (V(i, k) * V(j, k)) * Scalar::q_pow(-1),
                               tuple_desc({{"i", i}, {"j", j}, {"k", k}}, "shared-target"));
                    check_zero(rep, V(i, k) * V(i, j) - (V(i, j) * V(i, k)) * Scalar::q_pow(-1),
                               tuple_desc({{"i", i}, {"j", j}, {"k", k}}, "shared-source"));
                }
    } else if (tag == "four-index") {
        for (int i = 1; i <= n + 1; ++i)
            for (int j = i + 1; j <= n + 1; ++j)
                for (int k = j + 1; k <= n + 1; ++k)
                    for (int l = k + 1; l <= n + 1; ++l) {
                        auto desc = [&](const char* v) {
                            return tuple_desc({{"i", i}, {"j", j}, {"k", k}, {"l", l}}, v);
                        };
                        check_zero(rep, commutator(Ep(n, i, j), Em(n, k, l)), desc("mixed-zero"));
                        check_zero(rep, commutator(Ep(n, i, j), Ep(n, k, l)), desc("disjoint"));
                        check_zero(rep, commutator(Ep(n, i, l), Ep(n, j, k)), desc("nested"));
                        check_zero(rep,
                                   commutator(Ep(n, i, k), Ep(n, j, l)) -
                                       (Ep(n, i, l) * Ep(n, j, k)) * qm,
                                   desc("pos-interleave"));
                        check_zero(rep,
                                   commutator(Em(n, i, k), Em(n, j, l)) -
                                       (Em(n, i, l) * Em(n, j, k)) * qm,
                                   desc("neg-interleave"));
                        check_zero(rep,
                                   commutator(Ep(n, i, k), Em(n, j, l)) +
                                       (AlgebraElement::k_laurent(n, kdelta(n, j, k)) *
                                        Em(n, k, l) * Ep(n, i, j)) * qm,
                                   desc("mixed-interleave"));
                        check_zero(rep,
                                   commutator(Ep(n, j, l), Em(n, i, k)) -
                                       (AlgebraElement::k_laurent(n, kdelta(n, k, j)) *
                                        Ep(n, k, l) * Em(n, i, j)) * qm,
                                   desc("mixed-interleave-flip"));
                    }
    } else if (tag == "ef-same-root") {
        for (const Root& beta : convex_order(n))
            check_zero(rep,
                       commutator(Ep(n, beta.i, beta.j), Em(n, beta.i, beta.j)) -
                           torus_bracket(n, kdelta(n, beta.i, beta.j), 0),
                       tuple_desc({{"i", beta.i}, {"j", beta.j}}, ""));
    } else if (tag == "braid") {
        const auto gens = all_generators(n);
        for (int i = 1; i + 1 <= n; ++i)
            for (std::size_t g = 0; g < gens.size(); ++g)
                check_equal(rep, braid_string({i, i + 1, i}, gens[g]),
                            braid_string({i + 1, i, i + 1}, gens[g]),
                            tuple_desc({{"i", i}, {"g", static_cast<int>(g)}}, "adjacent"));
        for (int i = 1; i <= n; ++i)
            for (int j = i + 2; j <= n; ++j)
                for (std::size_t g = 0; g < gens.size(); ++g)
                    check_equal(rep, braid_string({i, j}, gens[g]), braid_string({j, i}, gens[g]),
                                tuple_desc({{"i", i}, {"j", j}, {"g", static_cast<int>(g)}},
                                           "distant"));
    } else if (tag == "braid-inverse") {
        const auto gens = all_generators(n);
        for (int i = 1; i <= n; ++i)
            for (std::size_t g = 0; g < gens.size(); ++g) {
                check_equal(rep, braid_T(i, braid_T(i, gens[g]), true), gens[g],
                            tuple_desc({{"i", i}, {"g", static_cast<int>(g)}}, "T then inverse"));
                check_equal(rep, braid_T(i, braid_T(i, gens[g], true)), gens[g],
                            tuple_desc({{"i", i}, {"g", static_cast<int>(g)}}, "inverse then T"));
            }
    } else if (tag == "braid-morphism") {
        const auto gens = all_generators(n);
        for (int i = 1; i <= n; ++i)
            for (std::size_t g1 = 0; g1 < gens.size(); ++g1)
                for (std::size_t g2 = 0; g2 < gens.size(); ++g2) {
                    check_equal(rep, braid_T(i, gens[g1] * gens[g2]),
                                braid_T(i, gens[g1]) * braid_T(i, gens[g2]),
                                tuple_desc({{"i", i},
                                            {"g1", static_cast<int>(g1)},
                                            {"g2", static_cast<int>(g2)}},
                                           ""));
                }
    } else if (tag == "braid-shift") {
        for (int i = 1; i + 1 <= n; ++i)
            check_equal(rep, braid_string({i, i + 1}, AlgebraElement::gen_e(n, i)),
                        AlgebraElement::gen_e(n, i + 1), tuple_desc({{"i", i}}, ""));
    } else if (tag == "root-vector-def") {
        const auto word = w0_word(n);
        const auto order = convex_order(n);
        for (std::size_t k = 0; k < order.size(); ++k) {
            const std::vector<int> prefix(word.begin(), word.begin() + k);
            const int ik = word[k];
            check_equal(rep, braid_string(prefix, AlgebraElement::gen_e(n, ik)),
                        root_vector(n, order[k]),
                        tuple_desc({{"i", order[k].i}, {"j", order[k].j}}, "positive"));
            check_equal(rep, braid_string(prefix, AlgebraElement::gen_f(n, ik)),
                        root_vector(n, order[k].negated()),
                        tuple_desc({{"i", order[k].i}, {"j", order[k].j}}, "negative"));
        }
    } else if (tag == "simplified-root-vector") {
        for (const Root& beta : convex_order(n)) {
            std::vector<int> word;
            for (int t = beta.i; t <= beta.j - 2; ++t) word.push_back(t);
            check_equal(rep, braid_string(word, AlgebraElement::gen_e(n, beta.j - 1)),
                        root_vector(n, beta),
                        tuple_desc({{"i", beta.i}, {"j", beta.j}}, "positive"));
            check_equal(rep, braid_string(word, AlgebraElement::gen_f(n, beta.j - 1)),
                        root_vector(n, beta.negated()),
                        tuple_desc({{"i", beta.i}, {"j", beta.j}}, "negative"));
        }
    } else {
        throw std::invalid_argument("unknown identity tag: " + tag);
    }
    return rep;
}

bool IdentityReport::all_pass() const {
    for (const auto& inst : instances)
        if (!inst.pass) return false;
    return true;
}

std::string AlgebraElement::str() const {
    if (terms_.empty()) return "0";
    const auto& ro = roots_for(n_);
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::vector<std::string> parts;
        bool any_letter = false;
        auto letter = [&](const char* name, int p, int exp) {
            std::ostringstream ls;
            ls << name << "(" << ro[p].i << "," << ro[p].j << ")";
            if (exp != 1) ls << "^" << exp;
            parts.push_back(ls.str());
            any_letter = true;
        };
        for (int p = 0; p < static_cast<int>(m.f.size()); ++p)
            if (m.f[p]) letter("Em", p, m.f[p]);
        for (int j = 0; j <= n_; ++j)
            if (m.k[j]) {
                std::ostringstream ls;
                ls << "Kb" << j + 1;
                if (m.k[j] != 1) ls << "^" << m.k[j];
                parts.push_back(ls.str());
                any_letter = true;
            }
        for (int p = 0; p < static_cast<int>(m.e.size()); ++p)
            if (m.e[p]) letter("Ep", p, m.e[p]);
        if (!c.is_one() || !any_letter)
            parts.insert(parts.begin(), "(" + c.str() + ")");
        for (std::size_t t = 0; t < parts.size(); ++t) {
            if (t) os << " ";
            os << parts[t];
        }
    }
    return os.str();
}

namespace {

struct ElementParser {
    const std::string& text;
    std::size_t pos = 0;
    int n;

    explicit ElementParser(const std::string& t, int rank) : text(t), n(rank) {}

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

    // exponent after '^': integer, or (a/2) with odd a for half powers
    std::pair<long, bool> parse_exponent() {
        skip_ws();
        if (eat('(')) {
            const long a = parse_int();
            if (!eat('/')) fail("expected / in fractional exponent");
            const long den = parse_int();
            if (den != 2) fail("only halves are supported in exponents");
            if (!eat(')')) fail("expected )");
            return {a, true};
        }
        return {parse_int(), false};
    }

    AlgebraElement parse_expr() {
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        AlgebraElement acc = parse_term();
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

    AlgebraElement parse_term() {
        AlgebraElement acc = parse_factor();
        while (true) {
            if (eat('/')) {
                const AlgebraElement rhs = parse_factor();
                acc = acc * element_as_scalar(rhs).inv();
            } else if (at_factor_start()) {
                acc = acc * parse_factor();
            } else {
                break;
            }
        }
        return acc;
    }

    Scalar element_as_scalar(const AlgebraElement& a) {
        if (a.is_zero()) return Scalar::from_int(0);
        if (a.terms().size() == 1) {
            const auto& [m, c] = *a.terms().begin();
            if (m == unit_monomial(n)) return c;
        }
        fail("division is only defined by scalars");
    }

    AlgebraElement parse_factor() {
        AlgebraElement base = parse_primary();
        while (peek() == '^') {
            eat('^');
            // only scalar bases admit half powers; letters take integer powers
            const auto [a, half] = parse_exponent();
            if (half) {
                const Scalar s = element_as_scalar(base);
                const auto toral = as_toral(s);
                if (!toral) fail("half powers apply to toral scalars only");
                base = AlgebraElement::scalar(
                    n, toral_sqrt(*toral).pow(static_cast<int>(a)).to_scalar());
            } else {
                base = element_pow(base, static_cast<int>(a));
            }
        }
        return base;
    }

    AlgebraElement element_pow(const AlgebraElement& a, int e) {
        if (e >= 0) return a.pow(e);
        // negative powers: scalars and torus monomials only
        if (a.terms().size() == 1) {
            const auto& [m, c] = *a.terms().begin();
            bool ef = false;
            for (int32_t v : m.f) ef = ef || v;
            for (int32_t v : m.e) ef = ef || v;
            if (!ef) {
                std::vector<int32_t> k(m.k.size());
                for (std::size_t t = 0; t < k.size(); ++t) k[t] = m.k[t] * e;
                return AlgebraElement::k_laurent(n, std::move(k)) * c.pow(e);
            }
        }
        fail("negative powers are only defined for scalars and torus monomials");
    }

    AlgebraElement parse_primary() {
        skip_ws();
        if (eat('(')) {
            AlgebraElement inner = parse_expr();
            if (!eat(')')) fail("expected )");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(peek())))
            return AlgebraElement::scalar(n, Scalar::from_int(parse_int()));
        const std::string name = parse_name();
        if (name.empty()) fail("expected a letter, number, or (");
        if (name == "q") return AlgebraElement::scalar(n, Scalar::q());
        if (name == "c") {
            const long j = parse_int();
            return AlgebraElement::scalar(n, Scalar::param(static_cast<int>(j)));
        }
        if (name == "Ep" || name == "Em") {
            if (!eat('(')) fail("expected ( after root-vector letter");
            const long i = parse_int();
            if (!eat(',')) fail("expected , in root-vector letter");
            const long j = parse_int();
            if (!eat(')')) fail("expected )");
            if (i < 1 || j <= i || j > n + 1) fail("root indices out of range");
            const Root r{static_cast<int>(i), static_cast<int>(j)};
            return root_vector(n, name == "Ep" ? r : r.negated());
        }
        if (name == "E" || name == "F" || name == "K" || name == "Kb") {
            const long idx = parse_int();
            if (name == "E") return AlgebraElement::gen_e(n, static_cast<int>(idx));
            if (name == "F") return AlgebraElement::gen_f(n, static_cast<int>(idx));
            if (name == "K") return AlgebraElement::k_sl(n, static_cast<int>(idx));
            return AlgebraElement::kbar(n, static_cast<int>(idx));
        }
        fail("unknown letter: " + name);
    }
};

}  // namespace

AlgebraElement parse_element(const std::string& text, int n) {
    ElementParser p(text, n);
    AlgebraElement out = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    return out;
}

}  // namespace qua
