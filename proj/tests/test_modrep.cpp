#include "doctest.h"
#include "qua/modrep.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace qua;

namespace {

Scalar S(const std::string& text) { return parse_scalar(text); }
ToralScalar T(const std::string& text) { return *as_toral(parse_scalar(text)); }

using Vec = std::map<LatticePoint, Scalar>;

// Applies a single element to a linear combination; nullopt when any
// component's action exits the window.
std::optional<Vec> apply(const WeightModuleWindow& w, const AlgebraElement& a, const Vec& v) {
    Vec out;
    for (const auto& [g, c] : v) {
        ActResult r = w.act(a, g);
        if (!r.ok()) return std::nullopt;
        for (const auto& [h, s] : r.image) {
            Scalar acc = (out.count(h) ? out[h] : Scalar()) + c * s;
            if (acc.is_zero())
                out.erase(h);
            else
                out[h] = acc;
        }
    }
    return out;
}

std::optional<Vec> apply_word(const WeightModuleWindow& w,
                              const std::vector<AlgebraElement>& word, const Vec& v) {
    Vec cur = v;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        auto next = apply(w, *it, cur);
        if (!next) return std::nullopt;
        cur = *next;
    }
    return cur;
}

Vec scale(const Vec& v, const Scalar& c) {
    Vec out;
    for (const auto& [g, s] : v)
        if (!(s * c).is_zero()) out[g] = s * c;
    return out;
}

Vec add(const Vec& a, const Vec& b) {
    Vec out = a;
    for (const auto& [g, s] : b) {
        Scalar acc = (out.count(g) ? out[g] : Scalar()) + s;
        if (acc.is_zero())
            out.erase(g);
        else
            out[g] = acc;
    }
    return out;
}

long long binomial(int a, int b) {
    if (b < 0 || b > a) return 0;
    long long r = 1;
    for (int t = 1; t <= b; ++t) r = r * (a - b + t) / t;
    return r;
}

// Checks every defining relation by composing single-generator actions in
// both evaluation orders; points whose compositions exit the window are
// skipped, and at least one point must be fully checked.
void check_relations(const WeightModuleWindow& w) {
    int n = w.rank();
    Scalar qm = q_minus_qinv();
    int checked = 0;
    for (const auto& g : w.interior_points()) {
        Vec v{{g, Scalar::one()}};
        bool complete_here = true;
        auto E = [&](int i) { return AlgebraElement::gen_e(n, i); };
        auto F = [&](int i) { return AlgebraElement::gen_f(n, i); };
        for (int i = 1; i <= n && complete_here; ++i)
            for (int j = 1; j <= n && complete_here; ++j) {
                auto ef = apply_word(w, {E(i), F(j)}, v);
                auto fe = apply_word(w, {F(j), E(i)}, v);
                if (!ef || !fe) {
                    complete_here = false;
                    break;
                }
                Vec rhs;
                if (i == j) {
                    const auto& wt = w.weight(g);
                    Scalar k = wt[static_cast<size_t>(i - 1)] / wt[static_cast<size_t>(i)];
                    rhs = scale(v, (k - k.inv()) / qm);
                }
                CHECK(add(*ef, scale(*fe, S("-1"))) == rhs);
            }
        // Serre relations need two extra steps of room in each direction.
        for (int i = 1; i <= n && complete_here; ++i)
            for (int j = 1; j <= n && complete_here; ++j) {
                if (i == j) continue;
                bool adjacent = (i - j == 1) || (j - i == 1);
                for (bool raising : {true, false}) {
                    auto G = [&](int t) { return raising ? E(t) : F(t); };
                    std::optional<Vec> lhs;
                    if (adjacent) {
                        auto a = apply_word(w, {G(i), G(i), G(j)}, v);
                        auto b = apply_word(w, {G(i), G(j), G(i)}, v);
                        auto c = apply_word(w, {G(j), G(i), G(i)}, v);
                        if (!a || !b || !c) {
                            complete_here = false;
                            break;
                        }
                        lhs = add(add(*a, scale(*b, S("-q-q^-1"))), *c);
                    } else {
                        auto a = apply_word(w, {G(i), G(j)}, v);
                        auto b = apply_word(w, {G(j), G(i)}, v);
                        if (!a || !b) {
                            complete_here = false;
                            break;
                        }
                        lhs = add(*a, scale(*b, S("-1")));
                    }
                    CHECK(lhs->empty());
                }
            }
        if (complete_here) ++checked;
    }
    CHECK(checked > 0);
}

}  // namespace

TEST_CASE("module specs parse and serialize") {
    std::string text = R"({"kind": "gwa-weight", "n": 2,
                           "omega": ["c1", "1", "1"],
                           "params": ["c1"], "radius": 3})";
    ModuleSpec spec = parse_module_spec(text);
    CHECK(spec.kind == "gwa-weight");
    CHECK(spec.n == 2);
    CHECK(spec.radius == 3);
    CHECK(spec.omega.size() == 3);
    CHECK(spec.omega[0] == T("c1"));
    CHECK(spec.params == std::vector<std::string>{"c1"});

    ModuleSpec back = parse_module_spec(module_spec_to_json(spec));
    CHECK(back.kind == spec.kind);
    CHECK(back.omega == spec.omega);
    CHECK(back.radius == spec.radius);

    CHECK_THROWS_AS(parse_module_spec("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_module_spec(R"({"kind": "mystery", "n": 1})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_module_spec(R"({"kind": "gwa-weight"})"), std::invalid_argument);
    CHECK_THROWS_AS(
        parse_module_spec(
            R"({"kind": "gwa-weight", "n": 1, "omega": ["q+1", "1"], "radius": 2})"),
        std::invalid_argument);  // non-toral seed
    CHECK_THROWS_AS(
        parse_module_spec(
            R"({"kind": "gwa-weight", "n": 1, "omega": ["c2", "1"], "params": ["c1"], "radius": 2})"),
        std::invalid_argument);  // undeclared parameter
    CHECK_THROWS_AS(
        parse_module_spec(R"({"kind": "gwa-weight", "n": 1, "omega": ["1", "1"], "radius": 0})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_module_spec(R"({"kind": "gwa-weight", "n": 9, "omega": [], "radius": 1})"),
        std::invalid_argument);
}

TEST_CASE("gwa windows carry seeded weights and break structure") {
    // all-ones seed: every lowering bond below zero is broken
    auto w = WeightModuleWindow::gwa(2, {T("1"), T("1"), T("1")}, 3);
    CHECK(w.kind() == WindowKind::GwaWeight);
    CHECK(w.points().size() == 64);  // the nonnegative octant of the box
    CHECK(w.contains({0, 0, 0}));
    CHECK(w.contains({3, 2, 1}));
    CHECK(!w.contains({-1, 0, 0}));

    CHECK(w.weight({1, 0, 0})[0] == S("q"));
    CHECK(w.weight({1, 0, 0})[1] == S("1"));
    CHECK(w.toral_weight({0, 2, 1}).value()[1] == T("q^2"));

    // torus action is diagonal with the stored weights
    ActResult k = w.act(AlgebraElement::kbar(2, 1), {1, 0, 0});
    REQUIRE(k.ok());
    REQUIRE(k.image.size() == 1);
    CHECK(k.image.at({1, 0, 0}) == S("q"));

    // raising from the origin dies on the broken bond below
    ActResult e = w.act(AlgebraElement::gen_e(2, 1), {0, 0, 0});
    REQUIRE(e.ok());
    CHECK(e.image.empty());

    // x moves with unit coefficient, y picks up the bond value
    ActResult x = w.act_gwa(GwaElement::gen_x(2, 1), {0, 0, 0});
    REQUIRE(x.ok());
    CHECK(x.image.at({1, 0, 0}) == S("1"));
    ActResult y = w.act_gwa(GwaElement::gen_y(2, 1), {1, 0, 0});
    REQUIRE(y.ok());
    CHECK(y.image.at({0, 0, 0}) == S("1"));  // t at weight 1 is [1;1] = 1
    ActResult y2 = w.act_gwa(GwaElement::gen_y(2, 2), {1, 2, 0});
    REQUIRE(y2.ok());
    CHECK(y2.image.at({1, 1, 0}) == S("q+q^-1"));  // t at weight q is [q;1]

    // exits are typed, not silent zeros
    ActResult leave = w.act_gwa(GwaElement::gen_x(2, 1), {3, 0, 0});
    CHECK(leave.status == ActResult::Status::LeavesWindow);
    CHECK(w.is_boundary({3, 0, 0}));
    CHECK(w.is_interior({0, 0, 0}));
    CHECK(w.is_interior({2, 2, 2}));
    CHECK(w.is_boundary({2, 2, 3}));

    CHECK_THROWS_AS(w.act(AlgebraElement::gen_e(2, 1), {-1, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(w.act(AlgebraElement::gen_e(1, 1), {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("fock piece dimensions follow the binomial oracle") {
    for (int n = 1; n <= 3; ++n) {
        int radius = n == 3 ? 4 : 5;
        std::vector<ToralScalar> seed(static_cast<size_t>(n + 1), ToralScalar::one());
        auto w = WeightModuleWindow::gwa(n, seed, radius);
        auto pieces = decompose_pullback(w);
        std::map<int, const GradedPiece*> by_degree;
        for (const auto& p : pieces) by_degree[p.degree] = &p;
        for (int m = 0; m <= std::min(radius, 5); ++m) {
            REQUIRE(by_degree.count(m));
            const GradedPiece& p = *by_degree[m];
            CHECK(p.points.size() == static_cast<size_t>(binomial(m + n, n)));
            CHECK(p.complete);
            REQUIRE(p.highest_point.has_value());
            LatticePoint top(static_cast<size_t>(n + 1), 0);
            top[0] = m;
            CHECK(*p.highest_point == top);
            REQUIRE(p.highest_weight.has_value());
            CHECK((*p.highest_weight)[0] == ToralScalar::q_half_pow(2 * m));
            for (int i = 2; i <= n; ++i) CHECK((*p.highest_weight)[i - 1].is_one());
        }
    }
}

TEST_CASE("fock pieces are completely pointed and irreducible on the window") {
    auto w = WeightModuleWindow::gwa(2, {T("1"), T("1"), T("1")}, 5);
    for (const auto& p : decompose_pullback(w)) {
        if (!p.complete) continue;
        auto piece = piece_window(w, p);
        CHECK(is_completely_pointed(piece));
        auto verdict = is_irreducible_on_window(w, p);
        CHECK(verdict.status == IrreducibilityVerdict::Status::IrreducibleOnWindow);
    }
    CHECK(is_completely_pointed(w));
}

TEST_CASE("interior relation consistency across window kinds") {
    check_relations(WeightModuleWindow::gwa(2, {T("1"), T("1"), T("1")}, 3));
    check_relations(WeightModuleWindow::gwa(2, {T("c1"), T("1"), T("1")}, 2));
    check_relations(WeightModuleWindow::gwa(2, {T("c1"), T("c2"), T("1")}, 2));
    check_relations(WeightModuleWindow::gwa(1, {T("c1"), T("-q")}, 3));
    check_relations(lq1_example_module(6));
    check_relations(highest_weight_module({T("1"), T("q"), T("1")}, 1));   // wedge table
    check_relations(highest_weight_module({T("1"), T("-q"), T("1")}, 1));  // sign twist
}

TEST_CASE("highest weight windows realize the classified families") {
    // one-dimensional modules at ±1 weights
    auto triv = highest_weight_module({T("1"), T("-1")}, 2);
    CHECK(triv.points().size() == 1);
    const LatticePoint& v0 = triv.points().front();
    auto wt = triv.weight(v0);
    CHECK(wt[0] / wt[1] == S("1"));
    CHECK(wt[1] / wt[2] == S("-1"));

    // generic first slot: infinite cone, truncated by the window
    auto cf = highest_weight_module({T("c1"), T("1")}, 3);
    CHECK(cf.kind() == WindowKind::HighestWeight);
    CHECK(cf.restricted());
    LatticePoint origin{0, 0, 0};
    REQUIRE(cf.contains(origin));
    for (int i = 1; i <= 2; ++i) {
        ActResult r = cf.act(AlgebraElement::gen_e(2, i), origin);
        REQUIRE(r.ok());
        CHECK(r.image.empty());
    }
    ActResult f1 = cf.act(AlgebraElement::gen_f(2, 1), origin);
    REQUIRE(f1.ok());
    CHECK(f1.image.size() == 1);
    auto cw = cf.weight(origin);
    CHECK(cw[0] / cw[1] == S("c1"));
    CHECK(cw[1] / cw[2] == S("1"));
    CHECK(cf.points().size() > 3);

    // generic last slot
    auto cl = highest_weight_module({T("1"), T("c1")}, 3);
    REQUIRE(cl.contains(origin));
    for (int i = 1; i <= 2; ++i) {
        ActResult r = cl.act(AlgebraElement::gen_e(2, i), origin);
        REQUIRE(r.ok());
        CHECK(r.image.empty());
    }
    auto lw = cl.weight(origin);
    CHECK(lw[0] / lw[1] == S("1"));
    CHECK(lw[1] / lw[2] == S("c1"));

    // adjacent pair with product q^{-1}
    auto ap = highest_weight_module({T("c1"), T("q^-1*c1^-1")}, 3);
    REQUIRE(ap.contains(origin));
    auto aw = ap.weight(origin);
    CHECK(aw[0] / aw[1] == S("c1"));
    CHECK(aw[1] / aw[2] == S("q^-1*c1^-1"));
    for (int i = 1; i <= 2; ++i) {
        ActResult r = ap.act(AlgebraElement::gen_e(2, i), origin);
        REQUIRE(r.ok());
        CHECK(r.image.empty());
    }

    // ± q at the first and last slots: the two vector-like modules
    auto nat = highest_weight_module({T("q"), T("1")}, 3);
    CHECK(nat.points().size() == 3);
    auto top = highest_weight_module({T("1"), T("q")}, 3);
    CHECK(top.points().size() == 3);
    auto natm = highest_weight_module({T("-q"), T("1")}, 3);
    CHECK(natm.points().size() == 3);

    // interior ± q slot: the wedge table of dimension C(4,2)
    auto wedge = highest_weight_module({T("1"), T("q"), T("1")}, 1);
    CHECK(wedge.points().size() == 6);
    CHECK(is_completely_pointed(wedge));
    LatticePoint hw{1, 1, 0, 0};
    REQUIRE(wedge.contains(hw));
    for (int i = 1; i <= 3; ++i) {
        ActResult r = wedge.act(AlgebraElement::gen_e(3, i), hw);
        REQUIRE(r.ok());
        CHECK(r.image.empty());
    }
    auto ww = wedge.weight(hw);
    CHECK(ww[0] / ww[1] == S("1"));
    CHECK(ww[1] / ww[2] == S("q"));
    CHECK(ww[2] / ww[3] == S("1"));
    auto twisted = highest_weight_module({T("1"), T("-q"), T("1")}, 1);
    auto tw = twisted.weight(hw);
    CHECK(tw[1] / tw[2] == S("-q"));

    // outside the families
    CHECK_THROWS_AS(highest_weight_module({T("c1"), T("c1")}, 2), math_error);
    CHECK_THROWS_AS(highest_weight_module({T("q"), T("q")}, 2), math_error);
    CHECK_THROWS_AS(highest_weight_module({T("c1"), T("q*c1^-1")}, 2), math_error);
}

TEST_CASE("theorem-one products are diagonal at interior points") {
    std::vector<WeightModuleWindow> corpus;
    corpus.push_back(WeightModuleWindow::gwa(2, {T("c1"), T("1"), T("1")}, 2));
    corpus.push_back(WeightModuleWindow::gwa(2, {T("c1"), T("c2"), T("1")}, 2));
    corpus.push_back(WeightModuleWindow::gwa(2, {T("c1"), T("c2"), T("c3")}, 2));
    corpus.push_back(highest_weight_module({T("c1"), T("1")}, 2));
    corpus.push_back(highest_weight_module({T("q"), T("1")}, 2));
    auto fock = WeightModuleWindow::gwa(2, {T("1"), T("1"), T("1")}, 4);
    for (const auto& p : decompose_pullback(fock))
        if (p.complete) corpus.push_back(piece_window(fock, p));

    for (const auto& w : corpus) {
        int n = w.rank();
        int checked = 0;
        for (const auto& g : w.interior_points()) {
            auto twt = w.toral_weight(g);
            REQUIRE(twt.has_value());
            Vec v{{g, Scalar::one()}};
            for (int i = 1; i <= n; ++i) {
                auto fe = apply_word(
                    w, {AlgebraElement::gen_f(n, i), AlgebraElement::gen_e(n, i)}, v);
                if (!fe) continue;
                Scalar expect = qbracket((*twt)[static_cast<size_t>(i - 1)].to_scalar(), 1) *
                                qbracket((*twt)[static_cast<size_t>(i)].to_scalar(), 0);
                CHECK(*fe == scale(v, expect));
                ++checked;
            }
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("pullback pieces grade the window and report truncation") {
    auto w = WeightModuleWindow::gwa(2, {T("c1"), T("1"), T("1")}, 3);
    auto pieces = decompose_pullback(w);
    size_t total = 0;
    for (const auto& p : pieces) {
        total += p.points.size();
        for (const auto& g : p.points) {
            int s = 0;
            for (int32_t c : g) s += c;
            CHECK(s == p.degree);
        }
    }
    CHECK(total == w.points().size());

    // degree-zero actions stay inside their piece
    const GradedPiece* zero = nullptr;
    for (const auto& p : pieces)
        if (p.degree == 0) zero = &p;
    REQUIRE(zero != nullptr);
    for (const auto& g : zero->points) {
        ActResult r = w.act(AlgebraElement::gen_e(2, 1), g);
        if (!r.ok()) continue;
        for (const auto& [h, c] : r.image) {
            int s = 0;
            for (int32_t cc : h) s += cc;
            CHECK(s == 0);
        }
    }

    // the generic slot makes every piece touch the window edge
    CHECK(!zero->complete);
    CHECK(is_irreducible_on_window(w, *zero).status ==
          IrreducibilityVerdict::Status::InconclusiveTruncated);
}

TEST_CASE("divided power example matches its goldens") {
    auto w = lq1_example_module(10);
    CHECK(w.kind() == WindowKind::Lq1Example);
    CHECK(w.points().size() == 11);
    CHECK(!w.toral_weight({0, 0}).has_value());
    Scalar base = S("1+q");
    for (int k = 0; k <= 10; ++k) {
        LatticePoint vk{k, 0};
        ActResult kk = w.act(AlgebraElement::k_sl(1, 1), vk);
        REQUIRE(kk.ok());
        REQUIRE(kk.image.size() == 1);
        CHECK(kk.image.at(vk) == Scalar::q_pow(-2 * k) * base);

        ActResult e = w.act(AlgebraElement::gen_e(1, 1), vk);
        REQUIRE(e.ok());
        if (k == 0) {
            CHECK(e.image.empty());
        } else {
            Scalar golden = (Scalar::q_pow(-k + 1) * base - Scalar::q_pow(k - 1) * base.inv()) /
                            q_minus_qinv();
            CHECK(e.image.at({k - 1, 0}) == golden);
        }

        ActResult f = w.act(AlgebraElement::gen_f(1, 1), vk);
        if (k == 10) {
            CHECK(f.status == ActResult::Status::LeavesWindow);
        } else {
            REQUIRE(f.ok());
            CHECK(f.image.at({k + 1, 0}) ==
                  (Scalar::q_pow(k + 1) - Scalar::q_pow(-k - 1)) / q_minus_qinv());
        }
    }
    CHECK(is_completely_pointed(w));
    CHECK(w.is_boundary({10, 0}));
    CHECK(w.is_interior({4, 0}));
}

TEST_CASE("windows serialize and round trip") {
    auto fock = WeightModuleWindow::gwa(2, {T("1"), T("1"), T("1")}, 2);
    std::string js = window_to_json(fock);
    auto back = window_from_json(js);
    CHECK(back.points() == fock.points());
    CHECK(window_to_json(back) == js);

    auto wedge = highest_weight_module({T("1"), T("q"), T("1")}, 1);
    CHECK(window_from_json(window_to_json(wedge)).points() == wedge.points());

    auto piece = highest_weight_module({T("c1"), T("1")}, 2);
    std::string pjs = window_to_json(piece);
    auto pback = window_from_json(pjs);
    CHECK(pback.points() == piece.points());
    CHECK(window_to_json(pback) == pjs);

    auto lq1 = lq1_example_module(4);
    CHECK(window_from_json(window_to_json(lq1)).points() == lq1.points());

    // tampered weights are rejected on ingest
    std::string bad = js;
    auto pos = bad.find("\"q\"");
    REQUIRE(pos != std::string::npos);
    bad.replace(pos, 3, "\"q^2\"");
    CHECK_THROWS_AS(window_from_json(bad), std::invalid_argument);

    std::string dot = window_to_dot(fock);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("x1: 1") != std::string::npos);
    CHECK(dot.find("(0,0,0)") != std::string::npos);
}

TEST_CASE("constructed tables expose pointedness and reducibility failures") {
    // two points with the same weight vector: not completely pointed
    std::vector<LatticePoint> pts{{0, 0}, {1, 0}};
    std::vector<std::vector<Scalar>> wts{{S("1"), S("1")}, {S("1"), S("1")}};
    auto doubled = WeightModuleWindow::from_tables(
        1, 1, WindowKind::Custom, pts, wts, {},
        std::vector<std::map<LatticePoint, WeightModuleWindow::Move>>(1),
        std::vector<std::map<LatticePoint, WeightModuleWindow::Move>>(1), {});
    CHECK(!is_completely_pointed(doubled));

    // two orbits with no moves between them: a separating subset
    GradedPiece all;
    all.degree = 0;
    all.points = doubled.points();
    all.complete = true;
    auto verdict = is_irreducible_on_window(doubled, all);
    CHECK(verdict.status == IrreducibilityVerdict::Status::Separating);
    CHECK(verdict.separating_subset.size() == 1);

    // custom windows round trip through JSON
    auto back = window_from_json(window_to_json(doubled));
    CHECK(back.points() == doubled.points());
    CHECK(!is_completely_pointed(back));
}

TEST_CASE("module builder dispatches on spec kind") {
    ModuleSpec spec;
    spec.kind = "gwa-weight";
    spec.n = 2;
    spec.omega = {T("1"), T("1"), T("1")};
    spec.radius = 2;
    CHECK(build_module(spec).points().size() == 27);

    ModuleSpec hw;
    hw.kind = "highest-weight";
    hw.n = 2;
    hw.lambda = {T("q"), T("1")};
    hw.radius = 2;
    CHECK(build_module(hw).points().size() == 3);

    ModuleSpec lq;
    lq.kind = "sl2-lq1-example";
    lq.n = 1;
    lq.radius = 5;
    CHECK(build_module(lq).points().size() == 6);
}
