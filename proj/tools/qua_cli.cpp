// qua: batch workbench for the exact U_q / quantized Weyl algebra engine.
//
// Commands:
//   identities                relation suite sweep over all identity tags
//   pi-check                  homomorphism + generator-degree checks
//   module build|decompose|classify|mu-solve   window construction/analysis
//   export                    DOT / JSON serialization of a window
//
// Exit codes: 0 all checks pass; 1 mathematical check failed; 2 usage or
// configuration error; 3 inconclusive (window too small to decide).

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qua/classify.hpp"
#include "qua/modrep.hpp"
#include "qua/sweep.hpp"
#include "qua/uq.hpp"
#include "qua/weylq.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kPass = 0;
constexpr int kMathFail = 1;
constexpr int kUsage = 2;
constexpr int kInconclusive = 3;

struct CommonOpts {
    std::string spec_path;
    int radius = 0;  // 0 = keep the spec file's radius
    std::string params_csv;
    std::string format = "text";
    std::string out_path;
    int jobs = 1;
};

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string point_str(const qua::LatticePoint& g) {
    std::string s = "(";
    for (size_t i = 0; i < g.size(); ++i) s += (i ? "," : "") + std::to_string(g[i]);
    return s + ")";
}

// ---------------------------------------------------------------------------
// Optional content-addressed memo cache (QUA_CACHE_DIR).

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::optional<std::filesystem::path> cache_root() {
    const char* dir = std::getenv("QUA_CACHE_DIR");
    if (!dir || !*dir) return std::nullopt;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) return std::nullopt;  // caching is best-effort
    return std::filesystem::path(dir);
}

std::filesystem::path cache_path(const std::filesystem::path& root, const std::string& key) {
    std::ostringstream name;
    name << "qua-" << std::hex << fnv1a(key) << ".json";
    return root / name.str();
}

std::optional<std::string> cache_load(const std::string& key) {
    auto root = cache_root();
    if (!root) return std::nullopt;
    std::ifstream f(cache_path(*root, key), std::ios::binary);
    if (!f) return std::nullopt;
    std::stringstream buf;
    buf << f.rdbuf();
    std::string text = buf.str();
    if (!ordered_json::accept(text)) return std::nullopt;  // reject corrupt entries
    return text;
}

void cache_store(const std::string& key, const std::string& value) {
    auto root = cache_root();
    if (!root) return;
    std::ofstream f(cache_path(*root, key), std::ios::binary);
    if (f) f << value;  // best-effort
}

// ---------------------------------------------------------------------------
// Report rendering.

ordered_json report_json(const qua::IdentityReport& r) {
    ordered_json o;
    o["tag"] = r.tag;
    o["rank"] = r.rank;
    o["instances"] = r.instances.size();
    o["pass"] = r.all_pass();
    ordered_json fails = ordered_json::array();
    for (const auto& inst : r.instances)
        if (!inst.pass) {
            ordered_json f;
            f["description"] = inst.description;
            f["residual"] = inst.residual;
            fails.push_back(f);
        }
    if (!fails.empty()) o["failures"] = fails;
    return o;
}

int run_identities(int n, const std::string& only_csv, const CommonOpts& opt) {
    std::vector<std::string> tags = qua::identity_tags();
    if (!only_csv.empty()) {
        std::vector<std::string> chosen = split_csv(only_csv);
        for (const auto& t : chosen)
            if (std::find(tags.begin(), tags.end(), t) == tags.end())
                throw std::invalid_argument("unknown identity tag: " + t);
        tags = chosen;
    }
    auto rows = qua::parallel_sweep<std::string>(
        static_cast<int>(tags.size()), opt.jobs, [&](int i) -> std::string {
            const std::string key =
                "identities|v1|" + tags[static_cast<size_t>(i)] + "|" + std::to_string(n);
            if (auto hit = cache_load(key)) return *hit;
            qua::IdentityReport r = qua::verify_identity(tags[static_cast<size_t>(i)], n);
            std::string dumped = report_json(r).dump();
            cache_store(key, dumped);
            return dumped;
        });

    ordered_json all = ordered_json::array();
    bool pass = true;
    std::string first_residual, first_where;
    for (const auto& row : rows) {
        ordered_json o = ordered_json::parse(row);
        if (!o["pass"].get<bool>()) {
            pass = false;
            if (first_residual.empty() && o.contains("failures") && !o["failures"].empty()) {
                first_residual = o["failures"][0]["residual"].get<std::string>();
                first_where = o["tag"].get<std::string>() + ": " +
                              o["failures"][0]["description"].get<std::string>();
            }
        }
        all.push_back(std::move(o));
    }

    if (opt.format == "json") {
        ordered_json doc;
        doc["command"] = "identities";
        doc["n"] = n;
        doc["pass"] = pass;
        doc["tags"] = all;
        emit(doc.dump(2), opt.out_path);
    } else {
        std::ostringstream out;
        for (const auto& o : all) {
            out << o["tag"].get<std::string>() << ": "
                << (o["pass"].get<bool>() ? "pass" : "FAIL") << " ("
                << o["instances"].get<size_t>() << " instances)\n";
        }
        out << "overall: " << (pass ? "pass" : "FAIL") << "\n";
        if (!pass)
            out << "first failing residual: " << first_residual << "  [" << first_where
                << "]\n";
        emit(out.str(), opt.out_path);
    }
    return pass ? kPass : kMathFail;
}

int run_pi_check(int n, const CommonOpts& opt) {
    qua::IdentityReport rep = qua::check_pi_homomorphism(n);

    struct GenDegree {
        std::string name;
        std::optional<int> degree;
        bool pass;
    };
    std::vector<std::pair<std::string, qua::AlgebraElement>> gens;
    for (int i = 1; i <= n; ++i) {
        gens.emplace_back("E" + std::to_string(i), qua::AlgebraElement::gen_e(n, i));
        gens.emplace_back("F" + std::to_string(i), qua::AlgebraElement::gen_f(n, i));
    }
    for (int j = 1; j <= n + 1; ++j)
        gens.emplace_back("Kbar" + std::to_string(j), qua::AlgebraElement::kbar(n, j, 1));
    auto degrees = qua::parallel_sweep<GenDegree>(
        static_cast<int>(gens.size()), opt.jobs, [&](int i) {
            const auto& [name, g] = gens[static_cast<size_t>(i)];
            std::optional<int> d = qua::euler_degree(qua::pi(g));
            return GenDegree{name, d, d.has_value() && *d == 0};
        });

    bool deg_pass = true;
    for (const auto& d : degrees) deg_pass = deg_pass && d.pass;
    const bool pass = rep.all_pass() && deg_pass;

    if (opt.format == "json") {
        ordered_json doc;
        doc["command"] = "pi-check";
        doc["n"] = n;
        doc["pass"] = pass;
        doc["homomorphism"] = report_json(rep);
        ordered_json degs = ordered_json::array();
        for (const auto& d : degrees) {
            ordered_json o;
            o["generator"] = d.name;
            if (d.degree) o["degree"] = *d.degree;
            o["pass"] = d.pass;
            degs.push_back(o);
        }
        doc["generator_degrees"] = degs;
        emit(doc.dump(2), opt.out_path);
    } else {
        std::ostringstream out;
        out << "pi-check n=" << n << "\n";
        out << "homomorphism: " << (rep.all_pass() ? "pass" : "FAIL") << " ("
            << rep.instances.size() << " instances)\n";
        out << "generator degrees: " << (deg_pass ? "pass" : "FAIL") << " ("
            << degrees.size() << " generators)\n";
        out << "overall: " << (pass ? "pass" : "FAIL") << "\n";
        emit(out.str(), opt.out_path);
    }
    return pass ? kPass : kMathFail;
}

// ---------------------------------------------------------------------------
// Module commands.

qua::ModuleSpec load_spec(const CommonOpts& opt) {
    std::ifstream f(opt.spec_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot read spec file: " + opt.spec_path);
    std::stringstream buf;
    buf << f.rdbuf();
    ordered_json doc;
    try {
        doc = ordered_json::parse(buf.str());
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("module spec is not valid JSON: ") + e.what());
    }
    if (doc.is_object()) {
        if (opt.radius > 0) doc["radius"] = opt.radius;
        if (!opt.params_csv.empty()) doc["params"] = split_csv(opt.params_csv);
    }
    return qua::parse_module_spec(doc.dump());
}

std::string spec_header(const qua::ModuleSpec& spec) {
    std::ostringstream out;
    out << "kind=" << spec.kind << " n=" << spec.n << " radius=" << spec.radius;
    return out.str();
}

int run_module_build(const CommonOpts& opt) {
    qua::ModuleSpec spec = load_spec(opt);
    qua::WeightModuleWindow w = qua::build_module(spec);
    if (opt.format == "json") {
        emit(qua::window_to_json(w), opt.out_path);
        return kPass;
    }
    // Per-point interior sweep; merged in support order, so counts are
    // independent of the worker count.
    auto interior_flags = qua::parallel_sweep<char>(
        static_cast<int>(w.points().size()), opt.jobs,
        [&](int i) -> char { return w.is_interior(w.points()[static_cast<size_t>(i)]); });
    size_t interior = 0;
    for (char b : interior_flags) interior += static_cast<size_t>(b);
    std::ostringstream out;
    out << spec_header(spec) << "\n";
    out << "support: " << w.points().size() << " points (" << interior << " interior)\n";
    out << "edges: " << w.edges().size() << "\n";
    out << "exits: " << w.exit_markers().size() << "\n";
    emit(out.str(), opt.out_path);
    return kPass;
}

int run_module_decompose(const CommonOpts& opt) {
    qua::ModuleSpec spec = load_spec(opt);
    qua::WeightModuleWindow w = qua::build_module(spec);
    std::vector<qua::GradedPiece> pieces = qua::decompose_pullback(w);
    if (opt.format == "json") {
        ordered_json doc;
        doc["command"] = "decompose";
        doc["kind"] = spec.kind;
        doc["n"] = spec.n;
        doc["radius"] = spec.radius;
        ordered_json arr = ordered_json::array();
        for (const auto& p : pieces) {
            ordered_json o;
            o["degree"] = p.degree;
            o["dimension"] = p.points.size();
            o["complete"] = p.complete;
            if (p.highest_point) o["highest_point"] = *p.highest_point;
            if (p.highest_weight) {
                ordered_json hw = ordered_json::array();
                for (const auto& t : *p.highest_weight) hw.push_back(t.to_scalar().str());
                o["highest_weight"] = hw;
            }
            arr.push_back(o);
        }
        doc["pieces"] = arr;
        emit(doc.dump(2), opt.out_path);
        return kPass;
    }
    std::ostringstream out;
    out << spec_header(spec) << "\n";
    for (const auto& p : pieces) {
        out << "piece degree=" << p.degree << " dim=" << p.points.size()
            << (p.complete ? " complete" : " truncated");
        if (p.highest_point) out << " highest=" << point_str(*p.highest_point);
        if (p.highest_weight) {
            out << " weight=(";
            for (size_t i = 0; i < p.highest_weight->size(); ++i)
                out << (i ? "," : "") << (*p.highest_weight)[i].to_scalar().str();
            out << ")";
        }
        out << "\n";
    }
    emit(out.str(), opt.out_path);
    return kPass;
}

ordered_json partition_json(const qua::RootPartition& p) {
    auto block = [](const std::set<qua::Root>& s) {
        ordered_json arr = ordered_json::array();
        for (const auto& r : s) arr.push_back(root_str(r));
        return arr;
    };
    ordered_json o;
    o["nilpotent_symmetric"] = block(p.N_s);
    o["nilpotent_asymmetric"] = block(p.N_a);
    o["torsion_free_symmetric"] = block(p.T_s);
    o["torsion_free_asymmetric"] = block(p.T_a);
    o["inconclusive"] = block(p.inconclusive);
    return o;
}

std::string module_type(const qua::RootPartition& p) {
    if (!p.decided()) return "undecided";
    if (p.nilpotent().empty()) return "torsion-free";
    if (p.torsion_free().empty()) return "nilpotent";
    return "mixed";
}

std::string partition_dot(const qua::RootPartition& p) {
    std::ostringstream out;
    out << "digraph root_partition {\n  node [shape=box];\n";
    auto block = [&](const std::set<qua::Root>& s, const char* name, const char* color) {
        for (const auto& r : s)
            out << "  \"" << root_str(r) << "\" [label=\"" << root_str(r) << " " << name
                << "\", fillcolor=\"" << color << "\", style=filled];\n";
    };
    block(p.N_s, "N_s", "palegreen");
    block(p.N_a, "N_a", "darkseagreen");
    block(p.T_s, "T_s", "lightskyblue");
    block(p.T_a, "T_a", "steelblue");
    block(p.inconclusive, "?", "lightgray");
    out << "}\n";
    return out.str();
}

int run_module_classify(const CommonOpts& opt) {
    qua::ModuleSpec spec = load_spec(opt);
    qua::WeightModuleWindow w = qua::build_module(spec);
    qua::RootPartition part = qua::partition_roots(w);

    bool inconclusive = !part.decided();
    std::optional<qua::LatticePoint> vplus_point;
    std::string note;
    if (!inconclusive && !part.nilpotent().empty()) {
        if (w.interior_points().empty()) {
            inconclusive = true;
            note = "window has no interior points";
        } else {
            try {
                qua::WindowVector v = qua::find_invariant_vector(w, part);
                vplus_point = v.begin()->first;
            } catch (const qua::math_error& e) {
                inconclusive = true;
                note = e.what();
            }
        }
    }

    if (opt.format == "dot") {
        emit(partition_dot(part), opt.out_path);
    } else if (opt.format == "json") {
        ordered_json doc;
        doc["command"] = "classify";
        doc["kind"] = spec.kind;
        doc["n"] = spec.n;
        doc["radius"] = spec.radius;
        doc["partition"] = partition_json(part);
        doc["decided"] = part.decided();
        doc["module_type"] = module_type(part);
        if (vplus_point) doc["invariant_vector"] = *vplus_point;
        if (!note.empty()) doc["note"] = note;
        emit(doc.dump(2), opt.out_path);
    } else {
        auto line = [](const std::set<qua::Root>& s) {
            if (s.empty()) return std::string("-");
            std::string out;
            for (const auto& r : s) out += (out.empty() ? "" : " ") + root_str(r);
            return out;
        };
        std::ostringstream out;
        out << spec_header(spec) << "\n";
        out << "nilpotent symmetric: " << line(part.N_s) << "\n";
        out << "nilpotent asymmetric: " << line(part.N_a) << "\n";
        out << "torsion-free symmetric: " << line(part.T_s) << "\n";
        out << "torsion-free asymmetric: " << line(part.T_a) << "\n";
        out << "inconclusive: " << line(part.inconclusive) << "\n";
        out << "module type: " << module_type(part) << "\n";
        if (vplus_point) out << "invariant vector: " << point_str(*vplus_point) << "\n";
        if (!note.empty()) out << "note: " << note << "\n";
        emit(out.str(), opt.out_path);
    }
    if (inconclusive && !note.empty()) std::cerr << "inconclusive: " << note << "\n";
    else if (inconclusive) std::cerr << "inconclusive: enlarge the radius to decide all root pairs\n";
    return inconclusive ? kInconclusive : kPass;
}

int run_module_mu_solve(const CommonOpts& opt) {
    qua::ModuleSpec spec = load_spec(opt);
    qua::WeightModuleWindow w = qua::build_module(spec);
    qua::RootPartition part = qua::partition_roots(w);
    if (!part.decided()) {
        std::cerr << "inconclusive: enlarge the radius to decide all root pairs\n";
        return kInconclusive;
    }
    if (w.interior_points().empty()) {
        std::cerr << "inconclusive: window has no interior points\n";
        return kInconclusive;
    }
    qua::WindowVector v;
    if (part.nilpotent().empty()) {
        // Probe the anchor point when possible so the reported tuples line up
        // with the spec file's eigenvalue seed.
        qua::LatticePoint origin(w.points().front().size(), 0);
        const bool anchored = w.contains(origin) && w.is_interior(origin);
        v = {{anchored ? origin : w.interior_points().front(), qua::Scalar::one()}};
    } else {
        try {
            v = qua::find_invariant_vector(w, part);
        } catch (const qua::math_error& e) {
            std::cerr << "inconclusive: " << e.what() << "\n";
            return kInconclusive;
        }
    }
    std::vector<qua::MuSolution> sols = qua::solve_mu(w, v);

    if (opt.format == "json") {
        ordered_json doc;
        doc["command"] = "mu-solve";
        doc["kind"] = spec.kind;
        doc["n"] = spec.n;
        doc["radius"] = spec.radius;
        doc["invariant_point"] = v.begin()->first;
        ordered_json arr = ordered_json::array();
        for (const auto& s : sols) {
            ordered_json o;
            ordered_json mu = ordered_json::array();
            for (const auto& t : s.mu) mu.push_back(t.to_scalar().str());
            o["mu"] = mu;
            o["tag"] = s.tag;
            arr.push_back(o);
        }
        doc["solutions"] = arr;
        emit(doc.dump(2), opt.out_path);
    } else {
        std::ostringstream out;
        out << spec_header(spec) << "\n";
        out << "invariant point: " << point_str(v.begin()->first) << "\n";
        for (const auto& s : sols) {
            out << "mu = (";
            for (size_t i = 0; i < s.mu.size(); ++i)
                out << (i ? "," : "") << s.mu[i].to_scalar().str();
            out << ")  [" << s.tag << "]\n";
        }
        emit(out.str(), opt.out_path);
    }
    return kPass;
}

int run_export(const CommonOpts& opt) {
    qua::ModuleSpec spec = load_spec(opt);
    qua::WeightModuleWindow w = qua::build_module(spec);
    if (opt.format == "dot")
        emit(qua::window_to_dot(w), opt.out_path);
    else
        emit(qua::window_to_json(w), opt.out_path);
    return kPass;
}

bool window_too_small(const std::exception& e) {
    const std::string what = e.what();
    return what.find("window exhausted") != std::string::npos ||
           what.find("window too small") != std::string::npos ||
           what.find("outlived the window bound") != std::string::npos;
}

int guarded(const std::function<int()>& run) {
    try {
        return run();
    } catch (const qua::math_error& e) {
        if (window_too_small(e)) {
            std::cerr << "inconclusive: " << e.what() << "\n";
            return kInconclusive;
        }
        std::cerr << "math failure: " << e.what() << "\n";
        return kMathFail;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::logic_error& e) {
        std::cerr << "internal invariant violation: " << e.what() << "\n";
        return kMathFail;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact symbolic workbench: quantum-group identities, Weyl-algebra "
                 "windows, weight-module classification"};
    app.require_subcommand(1);

    int id_n = 1;
    std::string id_only;
    CommonOpts id_opt;
    CLI::App* cmd_id = app.add_subcommand("identities", "verify the relation suite");
    cmd_id->add_option("--n", id_n, "rank")->required()->check(CLI::Range(1, 4));
    cmd_id->add_option("--only", id_only, "comma-separated subset of identity tags");
    cmd_id->add_option("--jobs", id_opt.jobs, "worker threads")->check(CLI::Range(1, 256));
    cmd_id->add_option("--format", id_opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd_id->add_option("--out", id_opt.out_path, "write the report to this file");

    int pi_n = 1;
    CommonOpts pi_opt;
    CLI::App* cmd_pi = app.add_subcommand("pi-check", "verify the algebra homomorphism");
    cmd_pi->add_option("--n", pi_n, "rank")->required()->check(CLI::Range(1, 4));
    cmd_pi->add_option("--jobs", pi_opt.jobs, "worker threads")->check(CLI::Range(1, 256));
    cmd_pi->add_option("--format", pi_opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd_pi->add_option("--out", pi_opt.out_path, "write the report to this file");

    CLI::App* cmd_mod = app.add_subcommand("module", "build and analyze module windows");
    cmd_mod->require_subcommand(1);
    CommonOpts mod_opt;
    auto add_module_opts = [&](CLI::App* sub, bool with_dot) {
        sub->add_option("--spec", mod_opt.spec_path, "module spec JSON file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--radius", mod_opt.radius, "override the spec radius")
            ->check(CLI::Range(1, 64));
        sub->add_option("--params", mod_opt.params_csv,
                        "comma-separated parameter symbols to declare");
        sub->add_option("--jobs", mod_opt.jobs, "worker threads")->check(CLI::Range(1, 256));
        std::vector<std::string> formats{"text", "json"};
        if (with_dot) formats.push_back("dot");
        sub->add_option("--format", mod_opt.format, "output format")
            ->check(CLI::IsMember(formats));
        sub->add_option("--out", mod_opt.out_path, "write the report to this file");
    };
    CLI::App* cmd_build = cmd_mod->add_subcommand("build", "construct the window");
    CLI::App* cmd_dec = cmd_mod->add_subcommand("decompose", "graded pieces of a pullback");
    CLI::App* cmd_cls = cmd_mod->add_subcommand("classify", "root partition and verdicts");
    CLI::App* cmd_mu = cmd_mod->add_subcommand("mu-solve", "weight tuples from the window");
    add_module_opts(cmd_build, false);
    add_module_opts(cmd_dec, false);
    add_module_opts(cmd_cls, true);
    add_module_opts(cmd_mu, false);

    CommonOpts exp_opt;
    exp_opt.format = "json";
    CLI::App* cmd_exp = app.add_subcommand("export", "serialize a window (DOT or JSON)");
    cmd_exp->add_option("--spec", exp_opt.spec_path, "module spec JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_exp->add_option("--radius", exp_opt.radius, "override the spec radius")
        ->check(CLI::Range(1, 64));
    cmd_exp->add_option("--params", exp_opt.params_csv,
                        "comma-separated parameter symbols to declare");
    cmd_exp->add_option("--jobs", exp_opt.jobs, "worker threads")->check(CLI::Range(1, 256));
    cmd_exp->add_option("--format", exp_opt.format, "output format")
        ->check(CLI::IsMember({"json", "dot"}));
    cmd_exp->add_option("--out", exp_opt.out_path, "write the output to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    if (*cmd_id) return guarded([&] { return run_identities(id_n, id_only, id_opt); });
    if (*cmd_pi) return guarded([&] { return run_pi_check(pi_n, pi_opt); });
    if (*cmd_build) return guarded([&] { return run_module_build(mod_opt); });
    if (*cmd_dec) return guarded([&] { return run_module_decompose(mod_opt); });
    if (*cmd_cls) return guarded([&] { return run_module_classify(mod_opt); });
    if (*cmd_mu) return guarded([&] { return run_module_mu_solve(mod_opt); });
    if (*cmd_exp) return guarded([&] { return run_export(exp_opt); });
    return kUsage;
}
