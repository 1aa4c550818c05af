#include "qua/classify.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "qua/weylq.hpp"

namespace qua {

namespace {

// Linear extension of the window action to formal combinations.  Returns
// nullopt when any constituent action leaves the window.
std::optional<WindowVector> apply_window(const WeightModuleWindow& w,
                                         const AlgebraElement& a,
                                         const WindowVector& v) {
    WindowVector out;
    for (const auto& [g, c] : v) {
        ActResult r = w.act(a, g);
        if (!r.ok()) return std::nullopt;
        for (const auto& [h, d] : r.image) {
            auto it = out.find(h);
            Scalar acc = c * d;
            if (it != out.end()) acc = it->second + acc;
            if (acc.is_zero()) {
                if (it != out.end()) out.erase(it);
            } else if (it != out.end()) {
                it->second = acc;
            } else {
                out.emplace(h, acc);
            }
        }
    }
    return out;
}

// Sum of two roots when it is again a root.
std::optional<Root> root_sum(const Root& a, const Root& b) {
    if (a.j == b.i && a.i != b.j) return Root{a.i, b.j};
    if (b.j == a.i && b.i != a.j) return Root{b.i, a.j};
    return std::nullopt;
}

bool param_free(const ToralScalar& t) {
    return std::all_of(t.de.begin(), t.de.end(),
                       [](int32_t d) { return d == 0; });
}

// The lattice position g with a broken bond (g, g+1) for this slot weight,
// when one exists: the bond below the vertex whose weight is ±q^{-1}.
std::optional<int> break_position(const ToralScalar& mu) {
    if (!param_free(mu)) return std::nullopt;
    if (((-2 - mu.ue) & 1) != 0) return std::nullopt;
    return (-2 - static_cast<int>(mu.ue)) / 2;
}

enum class Behavior { Nilpotent, TorsionFree, Undecided };

struct ChainOutcome {
    bool died = false;
    bool exited = false;
};

// Walk v, E v, E^2 v, ... from every start until each chain dies in-window or
// leaves it.  Each application shifts one lattice slot monotonically, so
// 2R+1 applications always settle the matter.
ChainOutcome walk_chains(const WeightModuleWindow& w, const AlgebraElement& e,
                         const std::vector<LatticePoint>& starts) {
    ChainOutcome oc;
    const int cap = 2 * w.radius() + 1;
    for (const auto& g : starts) {
        WindowVector v{{g, Scalar::one()}};
        bool settled = false;
        for (int step = 0; step < cap && !settled; ++step) {
            auto next = apply_window(w, e, v);
            if (!next) {
                oc.exited = true;
                settled = true;
            } else if (next->empty()) {
                oc.died = true;
                settled = true;
            } else {
                v = std::move(*next);
            }
        }
        if (!settled) throw std::logic_error("root chain outlived the window bound");
        if (oc.died) return oc;  // decisive: no need to walk further starts
    }
    return oc;
}

// Whether "every chain exited" is trustworthy evidence of torsion-freeness:
// it is unless some slot the root moves through has a kill surface lying
// outside the window box, which a larger radius could still reveal.
bool exits_decisive(const WeightModuleWindow& w, const Root& beta) {
    if (w.table_backed())
        return false;  // table-backed truncations carry no seed to reason with
    const auto& seed = w.seed();
    const int R = w.radius();
    GwaElement image = pi(root_vector(w.rank(), beta));
    for (const auto& [m, c] : image.terms()) {
        for (std::size_t t = 0; t < seed.size(); ++t) {
            auto bp = break_position(seed[t]);
            if (!bp) continue;
            if (m.x[t] > 0 && *bp > R) return false;
            if (m.y[t] > 0 && *bp < -R - 1) return false;
        }
    }
    return true;
}

// Measurement of eigen-type coefficients at a one-point vector.
struct PointMeasure {
    const WeightModuleWindow& w;
    LatticePoint g0;
    Scalar vc;

    // Coefficient of the base vector in a(v); requires a weight-preserving a.
    Scalar eigen(const AlgebraElement& a, const char* exhausted_msg) const {
        WindowVector v{{g0, vc}};
        auto img = apply_window(w, a, v);
        if (!img) throw math_error(exhausted_msg);
        if (img->empty()) return Scalar();
        if (img->size() != 1 || img->begin()->first != g0)
            throw std::logic_error("weight-zero operator left the weight space");
        return img->begin()->second / vc;
    }
};

}  // namespace

bool ClassifyReport::all_pass() const {
    return std::all_of(records.begin(), records.end(),
                       [](const CheckRecord& r) { return r.pass; });
}

std::string report_to_json(const ClassifyReport& r) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const CheckRecord& rec : r.records) {
        nlohmann::ordered_json o;
        o["check"] = rec.check;
        o["indices"] = rec.indices;
        o["status"] = rec.pass ? "pass" : "fail";
        o["residual"] = rec.residual.str();
        arr.push_back(std::move(o));
    }
    return arr.dump(2);
}

std::set<Root> RootPartition::nilpotent() const {
    std::set<Root> s = N_s;
    s.insert(N_a.begin(), N_a.end());
    return s;
}

std::set<Root> RootPartition::torsion_free() const {
    std::set<Root> s = T_s;
    s.insert(T_a.begin(), T_a.end());
    return s;
}

RootPartition partition_roots(const WeightModuleWindow& w) {
    const int n = w.rank();
    const std::vector<LatticePoint> starts = w.interior_points();
    const std::vector<Root> roots = all_roots(n);

    std::map<Root, Behavior> verdict;
    for (const Root& beta : roots) {
        if (starts.empty()) {
            verdict[beta] = Behavior::Undecided;
            continue;
        }
        ChainOutcome oc = walk_chains(w, root_vector(n, beta), starts);
        if (oc.died) {
            verdict[beta] = Behavior::Nilpotent;
        } else {
            verdict[beta] = exits_decisive(w, beta) ? Behavior::TorsionFree
                                                    : Behavior::Undecided;
        }
    }

    RootPartition p;
    for (const Root& beta : roots) {
        Behavior vb = verdict.at(beta);
        Behavior vn = verdict.at(beta.negated());
        if (vb == Behavior::Undecided || vn == Behavior::Undecided) {
            p.inconclusive.insert(beta);
        } else if (vb == Behavior::Nilpotent) {
            (vn == Behavior::Nilpotent ? p.N_s : p.N_a).insert(beta);
        } else {
            (vn == Behavior::TorsionFree ? p.T_s : p.T_a).insert(beta);
        }
    }

    // Sums of two decided nilpotent roots must not land in the torsion-free
    // block, and vice versa.
    auto check_closed = [](const std::set<Root>& block,
                           const std::set<Root>& other, const char* what) {
        for (const Root& a : block)
            for (const Root& b : block) {
                auto s = root_sum(a, b);
                if (s && other.count(*s))
                    throw std::logic_error(
                        std::string("root partition closure violated in the ") +
                        what + " block");
            }
    };
    check_closed(p.nilpotent(), p.torsion_free(), "nilpotent");
    check_closed(p.torsion_free(), p.nilpotent(), "torsion-free");
    return p;
}

WindowVector find_invariant_vector(const WeightModuleWindow& w,
                                   const RootPartition& p) {
    const int n = w.rank();
    const std::set<Root> N = p.nilpotent();
    if (N.empty())
        throw std::invalid_argument(
            "window has no nilpotent roots; every weight vector is already invariant");
    const std::vector<LatticePoint> interior = w.interior_points();
    if (interior.empty())
        throw std::invalid_argument("window has no interior points");

    const Base base = find_adapted_base(n, p.N_a, p.N_s, p.T_s);
    std::vector<Root> ladder;
    for (const Root& b : base)
        if (N.count(b)) ladder.push_back(b);

    // The vector must be killed by every anti-symmetric nilpotent root and by
    // the symmetric ones positive for the adapted base.
    std::set<Root> must_kill = p.N_a;
    for (const Root& b : positive_roots_of_base(n, base))
        if (p.N_s.count(b)) must_kill.insert(b);

    // Climb the nilpotent ladder from each interior start until every ladder
    // root kills the vector simultaneously (climbing one direction can revive
    // another, so passes repeat until stable), then cross-check the full set.
    // A start whose climb leaves the window, stalls, or fails the cross-check
    // is abandoned in favour of the next one.
    for (const LatticePoint& start : interior) {
        WindowVector v{{start, Scalar::one()}};
        const long budget = 4L * static_cast<long>(w.points().size()) + 16;
        long steps = 0;
        bool failed = false;
        bool stable = false;
        while (!stable && !failed) {
            stable = true;
            for (auto it = ladder.rbegin(); it != ladder.rend() && !failed; ++it) {
                const AlgebraElement e = root_vector(n, *it);
                while (true) {
                    auto next = apply_window(w, e, v);
                    if (!next || ++steps > budget) {
                        failed = true;
                        break;
                    }
                    if (next->empty()) break;
                    v = std::move(*next);
                    stable = false;
                }
            }
        }
        if (failed) continue;
        for (const Root& b : must_kill) {
            auto img = apply_window(w, root_vector(n, b), v);
            if (!img || !img->empty()) {
                failed = true;
                break;
            }
        }
        if (failed) continue;
        const Scalar lead = v.begin()->second;
        WindowVector out;
        for (const auto& [g, c] : v) out.emplace(g, c / lead);
        return out;
    }
    throw math_error("window exhausted");
}

std::vector<MuSolution> solve_mu(const WeightModuleWindow& w,
                                 const WindowVector& vplus) {
    if (vplus.size() != 1)
        throw std::invalid_argument(
            "invariant vector must be supported on a single point");
    const int n = w.rank();
    const PointMeasure M{w, vplus.begin()->first, vplus.begin()->second};

    std::vector<Scalar> lam;  // lam[i-1]: eigenvalue of the i-th Cartan ratio
    for (int i = 1; i <= n; ++i)
        lam.push_back(M.eigen(AlgebraElement::k_sl(n, i), "window exhausted"));
    auto lam_range = [&](int i, int j) {  // product over slots i..j-1
        Scalar out = Scalar::one();
        for (int t = i; t < j; ++t) out = out * lam[t - 1];
        return out;
    };

    std::map<std::pair<int, int>, Scalar> z;
    for (int i = 1; i <= n + 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            z[{i, j}] = M.eigen(
                root_vector(n, Root{j, i}) * root_vector(n, Root{i, j}),
                "window exhausted");

    // Quadratic eliminant at the pair (1,2) for s = mu_1^2.  The leading and
    // trailing coefficients multiply to 1, so the discriminant is b^2 - 4.
    const Scalar q = Scalar::q();
    const Scalar qi = q.inv();
    const Scalar dq = q_minus_qinv();
    const Scalar L = lam_range(1, 2);
    const Scalar b = q * L + qi * L.inv() + z.at({1, 2}) * dq * dq;
    Scalar sq;
    try {
        sq = scalar_sqrt_perfect(b * b - Scalar::from_int(4));
    } catch (const math_error&) {
        throw math_error("inconsistent module data");
    }
    const Scalar two_a = Scalar::from_int(2) * q * L.inv();

    std::vector<std::pair<Scalar, std::string>> branches;
    branches.emplace_back((b + sq) / two_a, "direct");
    const Scalar s2 = (b - sq) / two_a;
    if (s2 != branches.front().first) branches.emplace_back(s2, "inverted");

    std::vector<MuSolution> out;
    auto push_candidate = [&](std::vector<ToralScalar> mu, std::string tag) {
        for (int i = 1; i <= n + 1; ++i)
            for (int j = i + 1; j <= n + 1; ++j) {
                const Scalar expect = qbracket(mu[i - 1].to_scalar(), 1) *
                                      qbracket(mu[j - 1].to_scalar(), 0);
                if (z.at({i, j}) != expect) return;
            }
        for (const MuSolution& s : out)
            if (s.mu == mu) return;
        out.push_back(MuSolution{std::move(mu), std::move(tag)});
    };

    for (const auto& [s, tag] : branches) {
        const auto st = as_toral(s);
        if (!st) continue;
        const ToralScalar root = toral_sqrt(*st);  // may need a quadratic extension
        for (int sign = 0; sign < 2; ++sign) {
            const ToralScalar m1 = sign ? root.negated() : root;
            std::vector<ToralScalar> mu{m1};
            bool expressible = true;
            for (int j = 2; j <= n + 1; ++j) {
                const auto lj = as_toral(lam_range(1, j));
                if (!lj) {
                    expressible = false;
                    break;
                }
                mu.push_back(m1.mul(lj->inv()));
            }
            if (expressible)
                push_candidate(std::move(mu), sign ? tag + "-negated" : tag);
        }
    }
    if (out.empty()) throw math_error("inconsistent module data");
    return out;
}

ClassifyReport verify_phi_relations(const WeightModuleWindow& w,
                                    const WindowVector& v) {
    if (v.size() != 1)
        throw std::invalid_argument(
            "test vector must be supported on a single point");
    const int n = w.rank();
    if (n < 2)
        throw std::invalid_argument("structure relations need rank at least 2");
    const PointMeasure M{w, v.begin()->first, v.begin()->second};

    const Scalar q = Scalar::q();
    const Scalar qi = q.inv();
    const Scalar dq = q_minus_qinv();
    const Scalar one = Scalar::one();

    ClassifyReport rep;
    auto rec = [&](const char* check, std::vector<int> idx, Scalar residual) {
        rep.records.push_back(
            CheckRecord{check, std::move(idx), residual.is_zero(), std::move(residual)});
    };

    std::vector<Scalar> lam;
    for (int i = 1; i <= n; ++i)
        lam.push_back(M.eigen(AlgebraElement::k_sl(n, i), "window too small"));
    auto lam_range = [&](int i, int j) {
        Scalar out = Scalar::one();
        for (int t = i; t < j; ++t) out = out * lam[t - 1];
        return out;
    };

    // kappa_{abc}: E_{ab} E_{bc} v = kappa E_{ac} v for distinct a, b, c.
    std::map<std::array<int, 3>, Scalar> kappa_cache;
    std::function<const Scalar&(int, int, int)> kappa =
        [&](int a, int b, int c) -> const Scalar& {
        const std::array<int, 3> key{a, b, c};
        auto it = kappa_cache.find(key);
        if (it != kappa_cache.end()) return it->second;
        WindowVector base{{M.g0, M.vc}};
        auto rhs = apply_window(w, root_vector(n, Root{a, c}), base);
        if (!rhs) throw math_error("window too small");
        if (rhs->empty())
            throw math_error("root action vanished; the window is not torsion-free");
        auto lhs = apply_window(
            w, root_vector(n, Root{a, b}) * root_vector(n, Root{b, c}), base);
        if (!lhs) throw math_error("window too small");
        Scalar value;
        if (!lhs->empty()) {
            if (lhs->size() != 1 || rhs->size() != 1 ||
                lhs->begin()->first != rhs->begin()->first)
                throw std::logic_error(
                    "composite root action left the expected weight space");
            value = lhs->begin()->second / rhs->begin()->second;
        }
        return kappa_cache.emplace(key, std::move(value)).first->second;
    };
    std::map<std::array<int, 3>, Scalar> phi_cache;
    std::function<const Scalar&(int, int, int)> phi =
        [&](int a, int b, int c) -> const Scalar& {
        const std::array<int, 3> key{a, b, c};
        auto it = phi_cache.find(key);
        if (it != phi_cache.end()) return it->second;
        Scalar value = q + dq * kappa(a, b, c);
        rep.records.push_back(
            CheckRecord{"phi-nonzero", {a, b, c}, !value.is_zero(), value});
        return phi_cache.emplace(key, std::move(value)).first->second;
    };

    auto zpair = [&](int i, int j) {
        return M.eigen(root_vector(n, Root{j, i}) * root_vector(n, Root{i, j}),
                       "window too small");
    };

    for (int i = 1; i <= n + 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            for (int k = j + 1; k <= n + 1; ++k) {
                const Scalar& ph = phi(i, j, k);
                const Scalar Lij = lam_range(i, j);
                const Scalar Ljk = lam_range(j, k);
                const Scalar upper = (Lij.inv() * ph - q * Lij) / dq;
                const Scalar lower = (qi * Ljk.inv() - ph * Ljk) / dq;
                rec("z1", {i, j, k},
                    zpair(i, j) - ph.inv() * ((ph - qi) / dq) * upper);
                rec("z2", {i, j, k},
                    zpair(j, k) + ph.inv() * ((ph - q) / dq) * lower);
                rec("z3", {i, j, k}, zpair(i, k) + ph.inv() * upper * lower);
            }

    for (int i = 1; i <= n + 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            for (int k = j + 1; k <= n + 1; ++k)
                for (int l = k + 1; l <= n + 1; ++l) {
                    const Scalar p_ijk = phi(i, j, k);
                    const Scalar p_ijl = phi(i, j, l);
                    const Scalar p_ikl = phi(i, k, l);
                    const Scalar p_jkl = phi(j, k, l);
                    const Scalar Lij = lam_range(i, j);
                    const Scalar Ljk = lam_range(j, k);
                    const Scalar Lkl = lam_range(k, l);
                    rec("phi1", {i, j, k, l},
                        (p_jkl * p_ijl - (Lkl * Lkl).inv()) *
                            (Ljk * Ljk * p_ijl - p_jkl));
                    rec("phi2", {i, j, k, l},
                        (p_ikl * p_ijk - Lij * Lij) *
                            (Ljk * Ljk * p_ijk - p_ikl));
                    rec("kappa1", {i, j, k, l},
                        kappa(i, j, l) * (kappa(j, k, l) + one) -
                            kappa(i, j, k) * (kappa(i, k, l) + one));
                    rec("kappa3", {i, j, k, l},
                        qi * p_jkl * (p_ijk - p_ijl) + p_jkl - p_ikl);
                    rec("kappa4", {i, j, k, l},
                        kappa(j, k, l) * (kappa(j, i, k) + Lij.inv()) -
                            kappa(i, k, l) * (kappa(j, i, l) + Lij.inv()));
                    rec("kappa6", {i, j, k, l},
                        Lij.inv() * p_ijk * p_ijl * (p_jkl - p_ikl) -
                            Lij * (p_ijk - p_ijl));
                    rec("main1", {i, j, k, l}, p_ijl - p_ijk);
                    rec("main2", {i, j, k, l}, p_ikl - Ljk * Ljk * p_ijk);
                    rec("main3", {i, j, k, l}, p_jkl - Ljk * Ljk * p_ijk);
                }
    return rep;
}

Scalar gamma_det(const WeightModuleWindow& w, const AlgebraElement& x1,
                 const AlgebraElement& x2, const AlgebraElement& y1,
                 const AlgebraElement& y2, const WindowVector& v) {
    if (v.size() != 1)
        throw std::invalid_argument(
            "test vector must be supported on a single point");
    const PointMeasure M{w, v.begin()->first, v.begin()->second};
    auto entry = [&](const AlgebraElement& ya, const AlgebraElement& xb) {
        try {
            return M.eigen(ya * xb, "window exhausted");
        } catch (const std::logic_error&) {
            throw math_error("product is not proportional to the test vector");
        }
    };
    const Scalar g11 = entry(y1, x1);
    const Scalar g12 = entry(y1, x2);
    const Scalar g21 = entry(y2, x1);
    const Scalar g22 = entry(y2, x2);
    return g11 * g22 - g12 * g21;
}

FormalGammaDet::FormalGammaDet(int n, const AlgebraElement& x1,
                               const AlgebraElement& x2,
                               const AlgebraElement& y1,
                               const AlgebraElement& y2)
    : n_(n) {
    const AlgebraElement* xs[2] = {&x1, &x2};
    const AlgebraElement* ys[2] = {&y1, &y2};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const AlgebraElement prod = (*ys[a]) * (*xs[b]);
            auto& slot = torus_[a * 2 + b];
            for (const auto& [m, c] : prod.terms()) {
                const bool pure =
                    std::all_of(m.f.begin(), m.f.end(),
                                [](int32_t t) { return t == 0; }) &&
                    std::all_of(m.e.begin(), m.e.end(),
                                [](int32_t t) { return t == 0; });
                if (!pure) continue;
                if (std::accumulate(m.k.begin(), m.k.end(), 0L) != 0)
                    throw std::logic_error(
                        "torus part of a weight-zero product must be balanced");
                slot.emplace(m.k, c);
            }
        }
}

Scalar FormalGammaDet::gamma(int a, int b,
                             const std::vector<ToralScalar>& lambda) const {
    if (a < 1 || a > 2 || b < 1 || b > 2)
        throw std::invalid_argument("gamma indices must be 1 or 2");
    if (static_cast<int>(lambda.size()) != n_)
        throw std::invalid_argument("highest weight needs one entry per node");
    // Weight lift with last entry 1; balanced exponents make the choice moot.
    std::vector<ToralScalar> lift(n_ + 1, ToralScalar::one());
    for (int i = n_ - 1; i >= 0; --i) lift[i] = lambda[i].mul(lift[i + 1]);
    Scalar out;
    for (const auto& [k, c] : torus_[(a - 1) * 2 + (b - 1)]) {
        ToralScalar val = ToralScalar::one();
        for (int t = 0; t <= n_; ++t) val = val.mul(lift[t].pow(k[t]));
        out = out + c * val.to_scalar();
    }
    return out;
}

Scalar FormalGammaDet::det(const std::vector<ToralScalar>& lambda) const {
    return gamma(1, 1, lambda) * gamma(2, 2, lambda) -
           gamma(1, 2, lambda) * gamma(2, 1, lambda);
}

FormalGammaDet chain_quadruple(int n, int i) {
    if (n < 2 || i < 1 || i > n - 1)
        throw std::invalid_argument("chain quadruple needs 1 <= i <= n-1");
    const AlgebraElement x1 = root_vector(n, Root{i + 2, i});
    const AlgebraElement x2 =
        root_vector(n, Root{i + 1, i}) * root_vector(n, Root{i + 2, i + 1});
    const AlgebraElement y1 = root_vector(n, Root{i, i + 2});
    const AlgebraElement y2 =
        root_vector(n, Root{i, i + 1}) * root_vector(n, Root{i + 1, i + 2});
    return FormalGammaDet(n, x1, x2, y1, y2);
}

FormalGammaDet disjoint_quadruple(int n, int i, int j, int k, int l) {
    if (!(1 <= i && i < j && j < k && k < l && l <= n + 1))
        throw std::invalid_argument(
            "disjoint quadruple needs 1 <= i < j < k < l <= n+1");
    const AlgebraElement x1 = root_vector(n, Root{l, i});
    const AlgebraElement x2 =
        root_vector(n, Root{k, i}) * root_vector(n, Root{l, k});
    const AlgebraElement y1 = root_vector(n, Root{i, l});
    const AlgebraElement y2 =
        root_vector(n, Root{i, j}) * root_vector(n, Root{j, l});
    return FormalGammaDet(n, x1, x2, y1, y2);
}

FormalGammaDet interior_quadruple(int n, int i) {
    if (n < 3 || i < 2 || i > n - 1)
        throw std::invalid_argument("interior quadruple needs 2 <= i <= n-1");
    const AlgebraElement x1 =
        root_vector(n, Root{i + 1, i - 1}) * root_vector(n, Root{i + 2, i});
    const AlgebraElement x2 =
        root_vector(n, Root{i + 1, i}) * root_vector(n, Root{i + 2, i - 1});
    const AlgebraElement y1 =
        root_vector(n, Root{i - 1, i + 1}) * root_vector(n, Root{i, i + 2});
    const AlgebraElement y2 =
        root_vector(n, Root{i, i + 1}) * root_vector(n, Root{i - 1, i + 2});
    return FormalGammaDet(n, x1, x2, y1, y2);
}

namespace {

const std::vector<FormalGammaDet>& det_families(int n) {
    static std::mutex guard;
    static std::map<int, std::vector<FormalGammaDet>> cache;
    const std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<FormalGammaDet> fam;
    for (int i = 1; i <= n - 1; ++i) fam.push_back(chain_quadruple(n, i));
    for (int i = 1; i <= n + 1; ++i)
        for (int j = i + 1; j <= n + 1; ++j)
            for (int k = j + 1; k <= n + 1; ++k)
                for (int l = k + 1; l <= n + 1; ++l)
                    fam.push_back(disjoint_quadruple(n, i, j, k, l));
    for (int i = 2; i <= n - 1; ++i) fam.push_back(interior_quadruple(n, i));
    return cache.emplace(n, std::move(fam)).first->second;
}

}  // namespace

bool is_cp_by_dets(const std::vector<ToralScalar>& lambda) {
    const int n = static_cast<int>(lambda.size());
    if (n == 0) throw std::invalid_argument("highest weight must be nonempty");
    if (n == 1) return true;
    const auto& fam = det_families(n);
    const std::vector<ToralScalar> rev(lambda.rbegin(), lambda.rend());
    for (const FormalGammaDet& d : fam) {
        if (!d.det(lambda).is_zero()) return false;
        if (!d.det(rev).is_zero()) return false;
    }
    return true;
}

namespace {

bool is_pm_one(const ToralScalar& t) { return param_free(t) && t.ue == 0; }
bool is_pm_q(const ToralScalar& t) { return param_free(t) && t.ue == 2; }
bool is_pm_qinv(const ToralScalar& t) { return param_free(t) && t.ue == -2; }

}  // namespace

FamilyVerdict is_cp_highest_weight(const std::vector<ToralScalar>& lambda) {
    const int n = static_cast<int>(lambda.size());
    if (n == 0) throw std::invalid_argument("highest weight must be nonempty");
    FamilyVerdict out;
    auto others_pm_one = [&](std::initializer_list<int> skip) {
        for (int t = 1; t <= n; ++t) {
            if (std::find(skip.begin(), skip.end(), t) != skip.end()) continue;
            if (!is_pm_one(lambda[t - 1])) return false;
        }
        return true;
    };
    if (others_pm_one({})) out.tags.push_back("all-pm-one");
    for (int i = 1; i <= n; ++i)
        if (is_pm_q(lambda[i - 1]) && others_pm_one({i}))
            out.tags.push_back("q-slot-" + std::to_string(i));
    if (others_pm_one({1})) out.tags.push_back("c-first");
    if (others_pm_one({n})) out.tags.push_back("c-last");
    for (int i = 1; i <= n - 1; ++i)
        if (is_pm_qinv(lambda[i - 1].mul(lambda[i])) && others_pm_one({i, i + 1}))
            out.tags.push_back("adjacent-pair-" + std::to_string(i));
    out.completely_pointed = !out.tags.empty();
    return out;
}

ClassifyReport kernel_annihilates(
    const AlgebraElement& x,
    const std::vector<const WeightModuleWindow*>& windows) {
    if (!pi(x).is_zero())
        throw math_error("element is not in the kernel of the homomorphism");
    ClassifyReport rep;
    for (std::size_t widx = 0; widx < windows.size(); ++widx) {
        const WeightModuleWindow& w = *windows[widx];
        int tested = 0;
        bool all_ok = true;
        Scalar first_bad;
        for (const LatticePoint& g : w.interior_points()) {
            const ActResult r = w.act(x, g);
            if (!r.ok()) continue;  // unevaluable in-window: skip the point
            ++tested;
            if (!r.image.empty()) {
                if (all_ok) first_bad = r.image.begin()->second;
                all_ok = false;
                std::vector<int> idx{static_cast<int>(widx)};
                for (int32_t c : g) idx.push_back(c);
                rep.records.push_back(CheckRecord{"kernel-annihilation-point",
                                                  std::move(idx), false,
                                                  r.image.begin()->second});
            }
        }
        rep.records.push_back(
            CheckRecord{"kernel-annihilation",
                        {static_cast<int>(widx), tested},
                        all_ok && tested > 0,
                        first_bad});
    }
    return rep;
}

}  // namespace qua
