#include "qua/modrep.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qua {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string kind_name(WindowKind k) {
    switch (k) {
        case WindowKind::GwaWeight: return "gwa-weight";
        case WindowKind::HighestWeight: return "highest-weight";
        case WindowKind::Lq1Example: return "sl2-lq1-example";
        case WindowKind::Custom: return "custom";
    }
    throw std::logic_error("unknown window kind");
}

WindowKind kind_from_name(const std::string& s) {
    if (s == "gwa-weight") return WindowKind::GwaWeight;
    if (s == "highest-weight") return WindowKind::HighestWeight;
    if (s == "sl2-lq1-example") return WindowKind::Lq1Example;
    if (s == "custom") return WindowKind::Custom;
    throw std::invalid_argument("unknown module kind: " + s);
}

bool param_free(const ToralScalar& t) {
    return std::all_of(t.de.begin(), t.de.end(), [](int32_t e) { return e == 0; });
}

bool is_pm_one(const ToralScalar& t) { return param_free(t) && t.ue == 0; }
bool is_pm_qinv(const ToralScalar& t) { return param_free(t) && t.ue == -2; }

// The bond (g, g + e_slot) carries the one-variable value t = y·x evaluated
// at the lower vertex; it vanishes exactly when that weight is ±q^{-1}.
bool bond_broken(const ToralScalar& mu, int32_t g_slot) {
    return param_free(mu) && mu.ue + 2 * g_slot == -2;
}

ToralScalar slot_weight(const ToralScalar& mu, int32_t g_slot) {
    return mu.mul(ToralScalar::q_half_pow(2 * g_slot));
}

ToralScalar parse_toral_literal(const std::string& s) {
    Scalar v = parse_scalar(s);
    auto t = as_toral(v);
    if (!t)
        throw std::invalid_argument("module weight seeds must be toral scalars: " + s);
    return *t;
}

std::string point_str(const LatticePoint& g) {
    std::string out = "(";
    for (size_t i = 0; i < g.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(g[i]);
    }
    return out + ")";
}

void accumulate_image(std::map<LatticePoint, Scalar>& image, const LatticePoint& g,
                      const Scalar& c) {
    auto it = image.find(g);
    if (it == image.end()) {
        if (!c.is_zero()) image.emplace(g, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) image.erase(it);
}

}  // namespace

ModuleSpec parse_module_spec(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("module spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("module spec must be a JSON object");
    ModuleSpec spec;
    if (!j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument("module spec requires a string field \"kind\"");
    spec.kind = j["kind"].get<std::string>();
    kind_from_name(spec.kind == "custom" ? "gwa-weight" : spec.kind);  // validate name
    if (spec.kind == "custom")
        throw std::invalid_argument("custom windows are built from tables, not specs");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::invalid_argument("module spec requires an integer field \"n\"");
    spec.n = j["n"].get<int>();
    if (spec.n < 1 || spec.n > 6) throw std::invalid_argument("rank must be between 1 and 6");
    if (j.contains("radius")) {
        if (!j["radius"].is_number_integer())
            throw std::invalid_argument("radius must be an integer");
        spec.radius = j["radius"].get<int>();
    }
    if (spec.radius < 1) throw std::invalid_argument("radius must be at least 1");
    auto read_seed = [&](const char* field, size_t want) {
        std::vector<ToralScalar> out;
        if (!j.contains(field) || !j[field].is_array())
            throw std::invalid_argument(std::string("module spec requires an array field \"") +
                                        field + "\"");
        for (const auto& entry : j[field]) {
            if (!entry.is_string())
                throw std::invalid_argument(std::string(field) + " entries must be scalar literals");
            out.push_back(parse_toral_literal(entry.get<std::string>()));
        }
        if (out.size() != want)
            throw std::invalid_argument(std::string(field) + " must have " +
                                        std::to_string(want) + " entries");
        return out;
    };
    if (spec.kind == "gwa-weight") {
        spec.omega = read_seed("omega", static_cast<size_t>(spec.n + 1));
    } else if (spec.kind == "highest-weight") {
        spec.lambda = read_seed("lambda", static_cast<size_t>(spec.n));
    } else if (spec.kind == "sl2-lq1-example") {
        if (spec.n != 1) throw std::invalid_argument("the divided-power example has rank 1");
    }
    if (j.contains("params")) {
        if (!j["params"].is_array()) throw std::invalid_argument("params must be an array");
        for (const auto& p : j["params"]) {
            if (!p.is_string()) throw std::invalid_argument("params entries must be strings");
            std::string name = p.get<std::string>();
            if (name.size() < 2 || name[0] != 'c')
                throw std::invalid_argument("unknown parameter symbol: " + name);
            int idx = 0;
            try {
                idx = std::stoi(name.substr(1));
            } catch (const std::exception&) {
                throw std::invalid_argument("unknown parameter symbol: " + name);
            }
            if (idx < 1 || idx > param_count())
                throw std::invalid_argument("parameter index out of range: " + name);
            spec.params.push_back(name);
        }
        // every parameter used by the seeds must be declared
        auto check_declared = [&](const std::vector<ToralScalar>& seed) {
            for (const auto& t : seed)
                for (size_t jj = 0; jj < t.de.size(); ++jj)
                    if (t.de[jj] != 0) {
                        std::string name = "c" + std::to_string(jj + 1);
                        if (std::find(spec.params.begin(), spec.params.end(), name) ==
                            spec.params.end())
                            throw std::invalid_argument("seed uses undeclared parameter " + name);
                    }
        };
        check_declared(spec.omega);
        check_declared(spec.lambda);
    }
    return spec;
}

std::string module_spec_to_json(const ModuleSpec& spec) {
    ordered_json j;
    j["kind"] = spec.kind;
    j["n"] = spec.n;
    if (!spec.omega.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& t : spec.omega) arr.push_back(t.to_scalar().str());
        j["omega"] = arr;
    }
    if (!spec.lambda.empty()) {
        ordered_json arr = ordered_json::array();
        for (const auto& t : spec.lambda) arr.push_back(t.to_scalar().str());
        j["lambda"] = arr;
    }
    if (!spec.params.empty()) j["params"] = spec.params;
    j["radius"] = spec.radius;
    return j.dump(2);
}

WeightModuleWindow WeightModuleWindow::gwa(int n, std::vector<ToralScalar> seed, int radius) {
    if (n < 1 || n > 6) throw std::invalid_argument("rank must be between 1 and 6");
    if (radius < 1) throw std::invalid_argument("radius must be at least 1");
    if (seed.size() != static_cast<size_t>(n + 1))
        throw std::invalid_argument("seed must have n+1 entries");
    WeightModuleWindow w;
    w.kind_ = WindowKind::GwaWeight;
    w.n_ = n;
    w.radius_ = radius;
    w.seed_ = std::move(seed);

    std::set<LatticePoint> seen;
    std::deque<LatticePoint> queue;
    LatticePoint origin(static_cast<size_t>(n + 1), 0);
    seen.insert(origin);
    queue.push_back(origin);
    while (!queue.empty()) {
        LatticePoint g = queue.front();
        queue.pop_front();
        for (int i = 0; i <= n; ++i) {
            if (g[i] + 1 <= radius && !bond_broken(w.seed_[i], g[i])) {
                LatticePoint h = g;
                ++h[i];
                if (seen.insert(h).second) queue.push_back(h);
            }
            if (g[i] - 1 >= -radius && !bond_broken(w.seed_[i], g[i] - 1)) {
                LatticePoint h = g;
                --h[i];
                if (seen.insert(h).second) queue.push_back(h);
            }
        }
    }
    w.points_.assign(seen.begin(), seen.end());
    for (size_t idx = 0; idx < w.points_.size(); ++idx) {
        w.index_.emplace(w.points_[idx], static_cast<int>(idx));
        std::vector<ToralScalar> tw;
        std::vector<Scalar> sw;
        for (int i = 0; i <= n; ++i) {
            tw.push_back(slot_weight(w.seed_[i], w.points_[idx][i]));
            sw.push_back(tw.back().to_scalar());
        }
        w.toral_weights_.push_back(std::move(tw));
        w.weights_.push_back(std::move(sw));
    }
    w.compute_boundary();
    return w;
}

WeightModuleWindow WeightModuleWindow::from_tables(
    int n, int radius, WindowKind kind, std::vector<LatticePoint> points,
    std::vector<std::vector<Scalar>> weights, std::vector<std::vector<ToralScalar>> toral_weights,
    std::vector<std::map<LatticePoint, Move>> e_moves,
    std::vector<std::map<LatticePoint, Move>> f_moves,
    std::set<std::pair<LatticePoint, std::pair<int, int>>> exits) {
    if (n < 1 || n > 6) throw std::invalid_argument("rank must be between 1 and 6");
    if (radius < 1) throw std::invalid_argument("radius must be at least 1");
    if (points.empty()) throw std::invalid_argument("a window needs at least one support point");
    if (weights.size() != points.size())
        throw std::invalid_argument("one weight vector per support point required");
    if (!toral_weights.empty() && toral_weights.size() != points.size())
        throw std::invalid_argument("toral weights must cover every point or be absent");
    if (e_moves.size() != static_cast<size_t>(n) || f_moves.size() != static_cast<size_t>(n))
        throw std::invalid_argument("move tables must cover the n simple indices");

    WeightModuleWindow w;
    w.kind_ = kind;
    w.n_ = n;
    w.radius_ = radius;
    w.table_backed_ = true;
    std::vector<size_t> order(points.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return points[a] < points[b]; });
    for (size_t i : order) {
        if (points[i].size() != static_cast<size_t>(n + 1))
            throw std::invalid_argument("lattice points must have n+1 coordinates");
        if (weights[i].size() != static_cast<size_t>(n + 1))
            throw std::invalid_argument("weight vectors must have n+1 entries");
        if (!w.index_.emplace(points[i], static_cast<int>(w.points_.size())).second)
            throw std::invalid_argument("duplicate support point " + point_str(points[i]));
        w.points_.push_back(points[i]);
        w.weights_.push_back(weights[i]);
        if (!toral_weights.empty()) w.toral_weights_.push_back(toral_weights[i]);
    }
    for (const auto& table : {std::cref(e_moves), std::cref(f_moves)})
        for (const auto& moves : table.get())
            for (const auto& [from, mv] : moves) {
                if (!w.index_.count(from) || !w.index_.count(mv.to))
                    throw std::invalid_argument("move table references a point outside the support");
                if (mv.coeff.is_zero())
                    throw std::invalid_argument("move tables store nonzero coefficients only");
            }
    w.e_moves_ = std::move(e_moves);
    w.f_moves_ = std::move(f_moves);
    for (const auto& [pt, mv] : exits)
        if (!w.index_.count(pt))
            throw std::invalid_argument("exit marker references a point outside the support");
    w.exits_ = std::move(exits);
    w.compute_boundary();
    return w;
}

WeightModuleWindow WeightModuleWindow::restrict(const std::vector<LatticePoint>& pts) const {
    if (table_backed_)
        throw std::invalid_argument("restriction is defined for weight-lattice windows only");
    WeightModuleWindow w;
    w.kind_ = kind_;
    w.n_ = n_;
    w.radius_ = radius_;
    w.seed_ = seed_;
    w.lambda_ = lambda_;
    w.restricted_ = true;
    std::vector<LatticePoint> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& g : sorted) {
        auto it = index_.find(g);
        if (it == index_.end())
            throw std::invalid_argument("restriction point " + point_str(g) +
                                        " is not in the support");
        w.index_.emplace(g, static_cast<int>(w.points_.size()));
        w.points_.push_back(g);
        w.weights_.push_back(weights_[static_cast<size_t>(it->second)]);
        w.toral_weights_.push_back(toral_weights_[static_cast<size_t>(it->second)]);
    }
    w.compute_boundary();
    return w;
}

const std::vector<ToralScalar>& WeightModuleWindow::seed() const {
    if (table_backed_)
        throw std::invalid_argument("table-backed windows carry no lattice seed");
    return seed_;
}

const std::vector<Scalar>& WeightModuleWindow::weight(const LatticePoint& g) const {
    auto it = index_.find(g);
    if (it == index_.end())
        throw std::invalid_argument("point " + point_str(g) + " is not in the window support");
    return weights_[static_cast<size_t>(it->second)];
}

std::optional<std::vector<ToralScalar>> WeightModuleWindow::toral_weight(
    const LatticePoint& g) const {
    auto it = index_.find(g);
    if (it == index_.end())
        throw std::invalid_argument("point " + point_str(g) + " is not in the window support");
    if (toral_weights_.empty()) return std::nullopt;
    return toral_weights_[static_cast<size_t>(it->second)];
}

bool WeightModuleWindow::is_boundary(const LatticePoint& g) const {
    auto it = index_.find(g);
    if (it == index_.end())
        throw std::invalid_argument("point " + point_str(g) + " is not in the window support");
    return boundary_[static_cast<size_t>(it->second)];
}

std::vector<LatticePoint> WeightModuleWindow::interior_points() const {
    std::vector<LatticePoint> out;
    for (size_t i = 0; i < points_.size(); ++i)
        if (!boundary_[i]) out.push_back(points_[i]);
    return out;
}

void WeightModuleWindow::compute_boundary() {
    boundary_.assign(points_.size(), false);
    if (!table_backed_) {
        for (size_t idx = 0; idx < points_.size(); ++idx) {
            const LatticePoint& g = points_[idx];
            for (int i = 0; i <= n_ && !boundary_[idx]; ++i) {
                if (!bond_broken(seed_[i], g[i]) && g[i] + 1 > radius_) boundary_[idx] = true;
                if (!bond_broken(seed_[i], g[i] - 1) && g[i] - 1 < -radius_) boundary_[idx] = true;
            }
        }
        return;
    }
    for (const auto& [pt, mv] : exits_) {
        (void)mv;
        boundary_[static_cast<size_t>(index_.at(pt))] = true;
    }
}

ActResult WeightModuleWindow::act_gwa(const GwaElement& a, const LatticePoint& g) const {
    if (table_backed_)
        throw std::invalid_argument("table-backed windows act through the quantum group only");
    if (a.rank() != n_) throw std::invalid_argument("rank mismatch between element and window");
    if (!contains(g))
        throw std::invalid_argument("point " + point_str(g) + " is not in the window support");
    if (restricted_) {
        auto deg = euler_degree(a);
        if (!deg || *deg != 0)
            throw std::invalid_argument(
                "restricted windows admit Euler-degree-zero actions only");
    }
    ActResult res;
    for (const auto& [m, c] : a.terms()) {
        Scalar coeff = c;
        LatticePoint cur = g;
        bool dead = false;
        for (int i = 0; i <= n_ && !dead; ++i) {
            for (int r = 0; r < m.y[static_cast<size_t>(i)]; ++r) {
                if (bond_broken(seed_[i], cur[i] - 1)) {  // exact zero, not truncation
                    dead = true;
                    break;
                }
                if (cur[i] - 1 < -radius_) {
                    res.status = ActResult::Status::LeavesWindow;
                    res.detail = "y" + std::to_string(i + 1) + " step from " + point_str(cur) +
                                 " exits the window";
                    res.image.clear();
                    return res;
                }
                coeff = coeff * qbracket(slot_weight(seed_[i], cur[i] - 1).to_scalar(), 1);
                --cur[i];
            }
        }
        for (int i = 0; i <= n_ && !dead; ++i) {
            for (int r = 0; r < m.x[static_cast<size_t>(i)]; ++r) {
                if (bond_broken(seed_[i], cur[i])) {
                    dead = true;
                    break;
                }
                if (cur[i] + 1 > radius_) {
                    res.status = ActResult::Status::LeavesWindow;
                    res.detail = "x" + std::to_string(i + 1) + " step from " + point_str(cur) +
                                 " exits the window";
                    res.image.clear();
                    return res;
                }
                ++cur[i];
            }
        }
        if (dead) continue;
        for (int i = 0; i <= n_; ++i)
            if (m.w[static_cast<size_t>(i)] != 0)
                coeff = coeff *
                        slot_weight(seed_[i], cur[i]).pow(m.w[static_cast<size_t>(i)]).to_scalar();
        if (!contains(cur))
            throw std::logic_error("action left the window support at " + point_str(cur));
        accumulate_image(res.image, cur, coeff);
    }
    return res;
}

ActResult WeightModuleWindow::act_tables(const AlgebraElement& a, const LatticePoint& g) const {
    ActResult res;
    for (const auto& [c, word] : expand_to_generators(a)) {
        Scalar coeff = c;
        LatticePoint cur = g;
        bool dead = false;
        for (auto it = word.rbegin(); it != word.rend() && !dead; ++it) {
            const GenLetter& letter = *it;
            switch (letter.type) {
                case GenLetter::Type::Kb: {
                    const Scalar& w = weights_[static_cast<size_t>(index_.at(cur))]
                                              [static_cast<size_t>(letter.idx - 1)];
                    coeff = coeff * w.pow(letter.exp);
                    break;
                }
                case GenLetter::Type::E:
                case GenLetter::Type::F: {
                    bool is_e = letter.type == GenLetter::Type::E;
                    const auto& table = is_e ? e_moves_[static_cast<size_t>(letter.idx - 1)]
                                             : f_moves_[static_cast<size_t>(letter.idx - 1)];
                    auto mv = table.find(cur);
                    if (mv != table.end()) {
                        coeff = coeff * mv->second.coeff;
                        cur = mv->second.to;
                        break;
                    }
                    if (exits_.count({cur, {is_e ? 1 : 0, letter.idx}})) {
                        res.status = ActResult::Status::LeavesWindow;
                        res.detail = std::string(is_e ? "E" : "F") + std::to_string(letter.idx) +
                                     " step from " + point_str(cur) + " exits the window";
                        res.image.clear();
                        return res;
                    }
                    dead = true;
                    break;
                }
            }
        }
        if (dead) continue;
        accumulate_image(res.image, cur, coeff);
    }
    return res;
}

ActResult WeightModuleWindow::act(const AlgebraElement& a, const LatticePoint& g) const {
    if (a.rank() != n_) throw std::invalid_argument("rank mismatch between element and window");
    if (!contains(g))
        throw std::invalid_argument("point " + point_str(g) + " is not in the window support");
    if (table_backed_) return act_tables(a, g);
    return act_gwa(pi(a), g);
}

std::vector<WeightModuleWindow::Edge> WeightModuleWindow::edges() const {
    std::vector<Edge> out;
    if (!table_backed_ && !restricted_) {
        for (const auto& g : points_)
            for (int i = 1; i <= n_ + 1; ++i)
                for (bool up : {true, false}) {
                    GwaElement mv = up ? GwaElement::gen_x(n_, i) : GwaElement::gen_y(n_, i);
                    ActResult r = act_gwa(mv, g);
                    if (!r.ok() || r.image.empty()) continue;
                    out.push_back(Edge{(up ? "x" : "y") + std::to_string(i), g,
                                       r.image.begin()->first, r.image.begin()->second});
                }
        return out;
    }
    if (!table_backed_) {
        // degree-preserving moves on a restricted window
        for (const auto& g : points_)
            for (int i = 1; i <= n_; ++i)
                for (bool raise : {true, false}) {
                    AlgebraElement gen = raise ? AlgebraElement::gen_e(n_, i)
                                               : AlgebraElement::gen_f(n_, i);
                    ActResult r = act(gen, g);
                    if (!r.ok() || r.image.empty()) continue;
                    out.push_back(Edge{(raise ? "E" : "F") + std::to_string(i), g,
                                       r.image.begin()->first, r.image.begin()->second});
                }
        return out;
    }
    for (const auto& g : points_) {
        for (int i = 1; i <= n_; ++i) {
            auto e = e_moves_[static_cast<size_t>(i - 1)].find(g);
            if (e != e_moves_[static_cast<size_t>(i - 1)].end())
                out.push_back(Edge{"E" + std::to_string(i), g, e->second.to, e->second.coeff});
            auto f = f_moves_[static_cast<size_t>(i - 1)].find(g);
            if (f != f_moves_[static_cast<size_t>(i - 1)].end())
                out.push_back(Edge{"F" + std::to_string(i), g, f->second.to, f->second.coeff});
        }
    }
    return out;
}

std::vector<std::pair<LatticePoint, std::string>> WeightModuleWindow::exit_markers() const {
    std::vector<std::pair<LatticePoint, std::string>> out;
    for (const auto& [pt, mv] : exits_)
        out.emplace_back(pt, (mv.first == 1 ? "E" : "F") + std::to_string(mv.second));
    return out;
}

WeightModuleWindow build_gwa_module(const ModuleSpec& spec) {
    if (spec.kind != "gwa-weight")
        throw std::invalid_argument("spec kind is not gwa-weight: " + spec.kind);
    return WeightModuleWindow::gwa(spec.n, spec.omega, spec.radius);
}

WeightModuleWindow build_module(const ModuleSpec& spec) {
    if (spec.kind == "gwa-weight") return build_gwa_module(spec);
    if (spec.kind == "highest-weight") return highest_weight_module(spec.lambda, spec.radius);
    if (spec.kind == "sl2-lq1-example") return lq1_example_module(spec.radius);
    throw std::invalid_argument("unknown module kind: " + spec.kind);
}

namespace {

// The unique-up-to-sign twisted wedge window for an isolated interior ±q
// slot: basis indexed by i-element subsets of {1..n+1} as indicator points.
WeightModuleWindow wedge_module(const std::vector<ToralScalar>& lambda, int slot, int radius) {
    int n = static_cast<int>(lambda.size());
    std::vector<int> eps(static_cast<size_t>(n + 1), 1);  // K̄_j sign twist
    for (int j = n; j >= 1; --j)
        eps[static_cast<size_t>(j - 1)] = lambda[static_cast<size_t>(j - 1)].sign *
                                          eps[static_cast<size_t>(j)];
    std::vector<LatticePoint> points;
    std::vector<std::vector<Scalar>> weights;
    std::vector<std::vector<ToralScalar>> toral;
    std::vector<std::map<LatticePoint, WeightModuleWindow::Move>> e_moves(
        static_cast<size_t>(n)),
        f_moves(static_cast<size_t>(n));
    // enumerate subsets of size `slot`
    std::vector<int> mask(static_cast<size_t>(n + 1), 0);
    std::fill(mask.begin(), mask.begin() + slot, 1);
    std::sort(mask.begin(), mask.end());
    do {
        LatticePoint g(mask.begin(), mask.end());
        points.push_back(g);
        std::vector<ToralScalar> tw;
        std::vector<Scalar> sw;
        for (int j = 1; j <= n + 1; ++j) {
            ToralScalar v = ToralScalar::q_half_pow(2 * g[static_cast<size_t>(j - 1)]);
            if (eps[static_cast<size_t>(j - 1)] < 0) v = v.negated();
            tw.push_back(v);
            sw.push_back(v.to_scalar());
        }
        toral.push_back(std::move(tw));
        weights.push_back(std::move(sw));
    } while (std::next_permutation(mask.begin(), mask.end()));
    for (const auto& g : points) {
        for (int i = 1; i <= n; ++i) {
            int sign_i = lambda[static_cast<size_t>(i - 1)].sign;
            if (g[static_cast<size_t>(i)] == 1 && g[static_cast<size_t>(i - 1)] == 0) {
                LatticePoint tgt = g;
                tgt[static_cast<size_t>(i - 1)] = 1;
                tgt[static_cast<size_t>(i)] = 0;
                e_moves[static_cast<size_t>(i - 1)].emplace(
                    g, WeightModuleWindow::Move{tgt, Scalar::from_int(sign_i)});
            }
            if (g[static_cast<size_t>(i - 1)] == 1 && g[static_cast<size_t>(i)] == 0) {
                LatticePoint tgt = g;
                tgt[static_cast<size_t>(i - 1)] = 0;
                tgt[static_cast<size_t>(i)] = 1;
                f_moves[static_cast<size_t>(i - 1)].emplace(
                    g, WeightModuleWindow::Move{tgt, Scalar::one()});
            }
        }
    }
    return WeightModuleWindow::from_tables(n, radius, WindowKind::HighestWeight,
                                           std::move(points), std::move(weights),
                                           std::move(toral), std::move(e_moves),
                                           std::move(f_moves), {});
}

}  // namespace

WeightModuleWindow highest_weight_module(const std::vector<ToralScalar>& lambda, int radius) {
    int n = static_cast<int>(lambda.size());
    if (n < 1 || n > 6) throw std::invalid_argument("rank must be between 1 and 6");
    if (radius < 1) throw std::invalid_argument("radius must be at least 1");

    // suffix products λ_i λ_{i+1} ⋯ λ_n
    std::vector<ToralScalar> suf(static_cast<size_t>(n + 2), ToralScalar::one());
    for (int i = n; i >= 1; --i)
        suf[static_cast<size_t>(i)] =
            lambda[static_cast<size_t>(i - 1)].mul(suf[static_cast<size_t>(i + 1)]);

    // Candidate values for the last seed entry: the highest-weight vector at
    // the lattice origin needs, for every i, either a broken raising bond in
    // slot i or a vanishing lowering value in slot i+1.
    std::set<ToralScalar> candidates;
    auto add = [&](const ToralScalar& t) {
        candidates.insert(t);
        candidates.insert(t.negated());
    };
    add(ToralScalar::one());
    add(ToralScalar::q_half_pow(-2));
    for (int i = 1; i <= n; ++i) {
        add(suf[static_cast<size_t>(i)].inv());
        add(ToralScalar::q_half_pow(-2).mul(suf[static_cast<size_t>(i)].inv()));
    }
    for (const auto& t : candidates) {
        std::vector<ToralScalar> mu(static_cast<size_t>(n + 1));
        for (int i = 1; i <= n + 1; ++i) mu[static_cast<size_t>(i - 1)] =
            suf[static_cast<size_t>(i)].mul(t);
        bool ok = true;
        for (int i = 1; i <= n && ok; ++i)
            ok = is_pm_qinv(mu[static_cast<size_t>(i - 1)]) ||
                 is_pm_one(mu[static_cast<size_t>(i)]);
        if (!ok) continue;
        WeightModuleWindow full = WeightModuleWindow::gwa(n, mu, radius);
        for (const auto& piece : decompose_pullback(full)) {
            if (piece.degree != 0) continue;
            WeightModuleWindow w = full.restrict(piece.points);
            w.kind_ = WindowKind::HighestWeight;
            w.lambda_ = lambda;
            return w;
        }
        throw std::logic_error("graded piece through the origin is missing");
    }

    // isolated interior ±q slot: the wedge table
    int slot = 0;
    bool wedge_ok = true;
    for (int i = 1; i <= n && wedge_ok; ++i) {
        const ToralScalar& li = lambda[static_cast<size_t>(i - 1)];
        if (is_pm_one(li)) continue;
        if (param_free(li) && li.ue == 2 && slot == 0)
            slot = i;
        else
            wedge_ok = false;
    }
    if (wedge_ok && slot >= 2 && slot <= n - 1) {
        WeightModuleWindow w = wedge_module(lambda, slot, radius);
        w.lambda_ = lambda;
        return w;
    }
    throw math_error("highest weight is not in the completely pointed families");
}

WeightModuleWindow lq1_example_module(int radius) {
    if (radius < 1) throw std::invalid_argument("radius must be at least 1");
    Scalar base = Scalar::one() + Scalar::q();  // K-eigenvalue at the top is 1+q
    std::vector<LatticePoint> points;
    std::vector<std::vector<Scalar>> weights;
    std::vector<std::map<LatticePoint, WeightModuleWindow::Move>> e_moves(1), f_moves(1);
    for (int k = 0; k <= radius; ++k) {
        points.push_back(LatticePoint{k, 0});
        weights.push_back({Scalar::q_pow(-k) * base, Scalar::q_pow(k)});
        if (k >= 1)
            e_moves[0].emplace(LatticePoint{k, 0},
                               WeightModuleWindow::Move{LatticePoint{k - 1, 0},
                                                        qbracket(base, -k + 1)});
        if (k < radius)
            f_moves[0].emplace(LatticePoint{k, 0},
                               WeightModuleWindow::Move{LatticePoint{k + 1, 0}, qint(k + 1)});
    }
    std::set<std::pair<LatticePoint, std::pair<int, int>>> exits;
    exits.insert({LatticePoint{radius, 0}, {0, 1}});  // F at the truncation edge
    return WeightModuleWindow::from_tables(1, radius, WindowKind::Lq1Example, std::move(points),
                                           std::move(weights), {}, std::move(e_moves),
                                           std::move(f_moves), std::move(exits));
}

std::vector<GradedPiece> decompose_pullback(const WeightModuleWindow& w) {
    if (w.kind() != WindowKind::GwaWeight || w.restricted())
        throw std::invalid_argument("pullback decomposition applies to full lattice windows");
    int n = w.rank();
    std::map<int, std::vector<LatticePoint>> by_degree;
    for (const auto& g : w.points()) {
        int s = 0;
        for (int32_t c : g) s += c;
        by_degree[s].push_back(g);
    }
    // degree-zero single moves x_i y_j
    std::vector<GwaElement> moves;
    for (int i = 1; i <= n + 1; ++i)
        for (int j = 1; j <= n + 1; ++j)
            if (i != j) moves.push_back(GwaElement::gen_x(n, i) * GwaElement::gen_y(n, j));
    std::vector<AlgebraElement> raise;
    for (int i = 1; i <= n; ++i) raise.push_back(AlgebraElement::gen_e(n, i));

    std::vector<GradedPiece> out;
    for (auto& [deg, pts] : by_degree) {
        GradedPiece piece;
        piece.degree = deg;
        piece.points = pts;
        piece.complete = true;
        for (const auto& g : pts) {
            for (const auto& mv : moves)
                if (!w.act_gwa(mv, g).ok()) {
                    piece.complete = false;
                    break;
                }
            if (!piece.complete) break;
        }
        if (piece.complete) {
            std::vector<LatticePoint> tops;
            for (const auto& g : pts) {
                bool top = true;
                for (const auto& e : raise) {
                    ActResult r = w.act(e, g);
                    if (!r.ok() || !r.image.empty()) {
                        top = false;
                        break;
                    }
                }
                if (top) tops.push_back(g);
            }
            if (tops.size() == 1) {
                piece.highest_point = tops.front();
                auto tw = w.toral_weight(tops.front());
                if (tw) {
                    std::vector<ToralScalar> lam;
                    for (int i = 1; i <= n; ++i)
                        lam.push_back((*tw)[static_cast<size_t>(i - 1)].mul(
                            (*tw)[static_cast<size_t>(i)].inv()));
                    piece.highest_weight = std::move(lam);
                }
            }
        }
        out.push_back(std::move(piece));
    }
    return out;
}

WeightModuleWindow piece_window(const WeightModuleWindow& w, const GradedPiece& p) {
    return w.restrict(p.points);
}

bool is_completely_pointed(const WeightModuleWindow& w) {
    std::map<std::string, int> seen;
    for (const auto& g : w.points()) {
        std::string key;
        for (const auto& s : w.weight(g)) key += s.str() + "|";
        if (++seen[key] > 1) return false;
    }
    return true;
}

IrreducibilityVerdict is_irreducible_on_window(const WeightModuleWindow& w,
                                               const GradedPiece& piece) {
    IrreducibilityVerdict verdict;
    if (!piece.complete) {
        verdict.status = IrreducibilityVerdict::Status::InconclusiveTruncated;
        return verdict;
    }
    int n = w.rank();
    std::map<LatticePoint, size_t> idx;
    for (size_t i = 0; i < piece.points.size(); ++i) idx.emplace(piece.points[i], i);
    std::vector<std::vector<size_t>> adj(piece.points.size());
    auto add_edge = [&](const LatticePoint& from, const LatticePoint& to) {
        auto a = idx.find(from), b = idx.find(to);
        if (a == idx.end() || b == idx.end())
            throw std::logic_error("degree-zero move left its graded piece");
        adj[a->second].push_back(b->second);
    };
    for (const auto& g : piece.points)
        if (!w.contains(g))
            throw std::invalid_argument("piece point outside the window support");
    bool lattice = w.kind() == WindowKind::GwaWeight && !w.restricted();
    if (lattice) {
        for (const auto& g : piece.points)
            for (int i = 1; i <= n + 1; ++i)
                for (int j = 1; j <= n + 1; ++j) {
                    if (i == j) continue;
                    GwaElement mv = GwaElement::gen_x(n, i) * GwaElement::gen_y(n, j);
                    ActResult r = w.act_gwa(mv, g);
                    if (r.ok() && !r.image.empty()) add_edge(g, r.image.begin()->first);
                }
    } else {
        // act through the quantum group generators (degree-preserving)
        std::vector<AlgebraElement> gens;
        for (int i = 1; i <= n; ++i) {
            gens.push_back(AlgebraElement::gen_e(n, i));
            gens.push_back(AlgebraElement::gen_f(n, i));
        }
        for (const auto& g : piece.points)
            for (const auto& e : gens) {
                ActResult r = w.act(e, g);
                if (r.ok() && !r.image.empty()) {
                    if (r.image.size() != 1)
                        throw std::logic_error("generator action is not a single move");
                    add_edge(g, r.image.begin()->first);
                }
            }
    }
    // reachability closures
    size_t m = piece.points.size();
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    for (size_t s = 0; s < m; ++s) {
        std::deque<size_t> queue{s};
        reach[s][s] = true;
        while (!queue.empty()) {
            size_t cur = queue.front();
            queue.pop_front();
            for (size_t nb : adj[cur])
                if (!reach[s][nb]) {
                    reach[s][nb] = true;
                    queue.push_back(nb);
                }
        }
    }
    bool strongly = true;
    for (size_t a = 0; a < m && strongly; ++a)
        for (size_t b = 0; b < m && strongly; ++b)
            if (!reach[a][b]) strongly = false;
    if (strongly) {
        verdict.status = IrreducibilityVerdict::Status::IrreducibleOnWindow;
        return verdict;
    }
    size_t best = 0;
    size_t best_size = m + 1;
    for (size_t s = 0; s < m; ++s) {
        size_t size = static_cast<size_t>(std::count(reach[s].begin(), reach[s].end(), true));
        if (size < best_size) {
            best_size = size;
            best = s;
        }
    }
    verdict.status = IrreducibilityVerdict::Status::Separating;
    for (size_t b = 0; b < m; ++b)
        if (reach[best][b]) verdict.separating_subset.push_back(piece.points[b]);
    return verdict;
}

std::string window_to_json(const WeightModuleWindow& w) {
    ordered_json j;
    j["kind"] = kind_name(w.kind());
    j["n"] = w.rank();
    j["radius"] = w.radius();
    j["restricted"] = w.restricted();
    if (w.kind() == WindowKind::GwaWeight) {
        ordered_json arr = ordered_json::array();
        for (const auto& t : w.seed()) arr.push_back(t.to_scalar().str());
        j["omega"] = arr;
    }
    if (w.kind() == WindowKind::HighestWeight) {
        ordered_json arr = ordered_json::array();
        for (const auto& t : w.highest_lambda()) arr.push_back(t.to_scalar().str());
        j["lambda"] = arr;
    }
    ordered_json pts = ordered_json::array();
    ordered_json wts = ordered_json::array();
    ordered_json bnd = ordered_json::array();
    for (const auto& g : w.points()) {
        pts.push_back(g);
        ordered_json row = ordered_json::array();
        for (const auto& s : w.weight(g)) row.push_back(s.str());
        wts.push_back(row);
        bnd.push_back(w.is_boundary(g));
    }
    j["points"] = pts;
    j["weights"] = wts;
    j["boundary"] = bnd;
    ordered_json exits = ordered_json::array();
    for (const auto& [pt, mv] : w.exit_markers()) {
        ordered_json row;
        row["point"] = pt;
        row["move"] = mv;
        exits.push_back(row);
    }
    j["exits"] = exits;
    ordered_json edges = ordered_json::array();
    for (const auto& e : w.edges()) {
        ordered_json row;
        row["from"] = e.from;
        row["label"] = e.label;
        row["to"] = e.to;
        row["coeff"] = e.coeff.str();
        edges.push_back(row);
    }
    j["edges"] = edges;
    return j.dump(2);
}

WeightModuleWindow window_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("window data is not valid JSON: ") + e.what());
    }
    WindowKind kind = kind_from_name(j.at("kind").get<std::string>());
    int n = j.at("n").get<int>();
    int radius = j.at("radius").get<int>();
    bool restricted = j.value("restricted", false);
    std::vector<LatticePoint> points;
    for (const auto& p : j.at("points")) points.push_back(p.get<LatticePoint>());

    WeightModuleWindow w = [&]() {
        switch (kind) {
            case WindowKind::GwaWeight: {
                std::vector<ToralScalar> seed;
                for (const auto& s : j.at("omega"))
                    seed.push_back(parse_toral_literal(s.get<std::string>()));
                WeightModuleWindow full = WeightModuleWindow::gwa(n, seed, radius);
                return restricted ? full.restrict(points) : full;
            }
            case WindowKind::HighestWeight: {
                std::vector<ToralScalar> lambda;
                for (const auto& s : j.at("lambda"))
                    lambda.push_back(parse_toral_literal(s.get<std::string>()));
                return highest_weight_module(lambda, radius);
            }
            case WindowKind::Lq1Example:
                return lq1_example_module(radius);
            case WindowKind::Custom: {
                std::vector<std::vector<Scalar>> weights;
                for (const auto& row : j.at("weights")) {
                    std::vector<Scalar> ws;
                    for (const auto& s : row) ws.push_back(parse_scalar(s.get<std::string>()));
                    weights.push_back(std::move(ws));
                }
                std::vector<std::vector<ToralScalar>> toral;
                bool all_toral = true;
                for (const auto& row : weights) {
                    std::vector<ToralScalar> tr;
                    for (const auto& s : row) {
                        auto t = as_toral(s);
                        if (!t) {
                            all_toral = false;
                            break;
                        }
                        tr.push_back(*t);
                    }
                    if (!all_toral) break;
                    toral.push_back(std::move(tr));
                }
                if (!all_toral) toral.clear();
                std::vector<std::map<LatticePoint, WeightModuleWindow::Move>> e_moves(
                    static_cast<size_t>(n)),
                    f_moves(static_cast<size_t>(n));
                for (const auto& e : j.at("edges")) {
                    std::string label = e.at("label").get<std::string>();
                    LatticePoint from = e.at("from").get<LatticePoint>();
                    LatticePoint to = e.at("to").get<LatticePoint>();
                    Scalar coeff = parse_scalar(e.at("coeff").get<std::string>());
                    int idx = std::stoi(label.substr(1));
                    if (label[0] == 'E')
                        e_moves[static_cast<size_t>(idx - 1)].emplace(
                            from, WeightModuleWindow::Move{to, coeff});
                    else if (label[0] == 'F')
                        f_moves[static_cast<size_t>(idx - 1)].emplace(
                            from, WeightModuleWindow::Move{to, coeff});
                    else
                        throw std::invalid_argument("custom windows carry E/F edges only");
                }
                std::set<std::pair<LatticePoint, std::pair<int, int>>> exits;
                if (j.contains("exits"))
                    for (const auto& e : j.at("exits")) {
                        LatticePoint pt = e.at("point").get<LatticePoint>();
                        std::string mv = e.at("move").get<std::string>();
                        exits.insert({pt, {mv[0] == 'E' ? 1 : 0, std::stoi(mv.substr(1))}});
                    }
                return WeightModuleWindow::from_tables(n, radius, WindowKind::Custom, points,
                                                       weights, toral, e_moves, f_moves, exits);
            }
        }
        throw std::logic_error("unknown window kind");
    }();

    // integrity: stored support and weights must match the rebuilt window
    if (w.points() != points)
        throw std::invalid_argument("window data does not match its defining seed");
    size_t row = 0;
    for (const auto& p : j.at("points")) {
        const auto& stored = j.at("weights")[row++];
        const auto& actual = w.weight(p.get<LatticePoint>());
        for (size_t c = 0; c < actual.size(); ++c)
            if (parse_scalar(stored[c].get<std::string>()) != actual[c])
                throw std::invalid_argument("window weights do not match their defining seed");
    }
    return w;
}

std::string window_to_dot(const WeightModuleWindow& w) {
    std::ostringstream out;
    out << "digraph module_window {\n  rankdir=BT;\n";
    for (const auto& g : w.points()) {
        out << "  \"" << point_str(g) << "\" [label=\"" << point_str(g) << "\\n";
        const auto& ws = w.weight(g);
        for (size_t i = 0; i < ws.size(); ++i) out << (i ? ", " : "") << ws[i].str();
        out << "\"";
        if (w.is_boundary(g)) out << ", style=dashed";
        out << "];\n";
    }
    for (const auto& e : w.edges())
        out << "  \"" << point_str(e.from) << "\" -> \"" << point_str(e.to) << "\" [label=\""
            << e.label << ": " << e.coeff.str() << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace qua
