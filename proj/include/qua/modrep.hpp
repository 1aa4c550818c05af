#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qua/weylq.hpp"

namespace qua {

using LatticePoint = std::vector<int32_t>;

// Declarative description of a module window, loadable from JSON:
// {"kind": "...", "n": 2, "omega": ["c1","1","1"], "params": ["c1"],
//  "radius": 3} — "lambda" replaces "omega" for highest-weight kind.
struct ModuleSpec {
    std::string kind;  // gwa-weight | highest-weight | sl2-lq1-example
    int n = 1;
    std::vector<ToralScalar> omega;   // gwa-weight: ω-eigenvalue seed at lattice 0
    std::vector<ToralScalar> lambda;  // highest-weight: K_i-eigenvalues
    std::vector<std::string> params;  // declared parameter symbols
    int radius = 3;
};

ModuleSpec parse_module_spec(const std::string& text);
std::string module_spec_to_json(const ModuleSpec& spec);

enum class WindowKind { GwaWeight, HighestWeight, Lq1Example, Custom };

struct ActResult {
    enum class Status { Ok, LeavesWindow };
    Status status = Status::Ok;
    std::map<LatticePoint, Scalar> image;  // meaningful when Ok
    std::string detail;                    // which move exited, on LeavesWindow

    bool ok() const { return status == Status::Ok; }
    bool is_zero() const { return ok() && image.empty(); }
};

// A finite window onto a weight module: support points carry one basis
// vector each; the action of any algebra element is evaluated exactly,
// with moves that exit the window reported as typed outcomes, never as
// silent zeros.
class WeightModuleWindow {
public:
    // The A^q-module with ω-eigenvalues seed·q^g, support flood-filled
    // from 0 across unbroken bonds within |g|_∞ ≤ radius.
    static WeightModuleWindow gwa(int n, std::vector<ToralScalar> seed, int radius);

    // Explicit-table window: per simple index, E/F moves with coefficients;
    // exits mark moves that leave the window. Used for finite families and
    // for constructed test modules.
    struct Move {
        LatticePoint to;
        Scalar coeff;
    };
    static WeightModuleWindow from_tables(
        int n, int radius, WindowKind kind, std::vector<LatticePoint> points,
        std::vector<std::vector<Scalar>> weights,
        std::vector<std::vector<ToralScalar>> toral_weights,
        std::vector<std::map<LatticePoint, Move>> e_moves,
        std::vector<std::map<LatticePoint, Move>> f_moves,
        std::set<std::pair<LatticePoint, std::pair<int, int>>> exits);

    // Sub-window on a subset of the support (same mechanics); only
    // Euler-degree-zero actions are meaningful on a restriction.
    WeightModuleWindow restrict(const std::vector<LatticePoint>& pts) const;

    WindowKind kind() const { return kind_; }
    int rank() const { return n_; }
    int radius() const { return radius_; }
    bool restricted() const { return restricted_; }
    bool table_backed() const { return table_backed_; }
    const std::vector<ToralScalar>& seed() const;  // lattice-backed kinds only
    // K_i-eigenvalues at the defining highest-weight vector (HighestWeight kind).
    const std::vector<ToralScalar>& highest_lambda() const { return lambda_; }

    const std::vector<LatticePoint>& points() const { return points_; }
    bool contains(const LatticePoint& g) const { return index_.count(g) != 0; }
    const std::vector<Scalar>& weight(const LatticePoint& g) const;
    std::optional<std::vector<ToralScalar>> toral_weight(const LatticePoint& g) const;
    bool is_boundary(const LatticePoint& g) const;
    bool is_interior(const LatticePoint& g) const { return !is_boundary(g); }
    std::vector<LatticePoint> interior_points() const;

    // Exact action of an element on the basis vector at g.
    ActResult act(const AlgebraElement& a, const LatticePoint& g) const;
    ActResult act_gwa(const GwaElement& a, const LatticePoint& g) const;

    // All nonzero in-window single-letter moves, for export and reporting.
    struct Edge {
        std::string label;
        LatticePoint from, to;
        Scalar coeff;
    };
    std::vector<Edge> edges() const;
    // Moves that exit the window, as (point, move-label) pairs.
    std::vector<std::pair<LatticePoint, std::string>> exit_markers() const;

private:
    WeightModuleWindow() = default;

    WindowKind kind_ = WindowKind::Custom;
    int n_ = 1;
    int radius_ = 1;
    bool restricted_ = false;
    bool table_backed_ = false;
    std::vector<ToralScalar> seed_;
    std::vector<ToralScalar> lambda_;

    std::vector<LatticePoint> points_;
    std::map<LatticePoint, int> index_;
    std::vector<std::vector<Scalar>> weights_;
    std::vector<std::vector<ToralScalar>> toral_weights_;  // empty when weights not toral
    std::vector<bool> boundary_;

    // table kinds only
    std::vector<std::map<LatticePoint, Move>> e_moves_, f_moves_;
    std::set<std::pair<LatticePoint, std::pair<int, int>>> exits_;

    ActResult act_tables(const AlgebraElement& a, const LatticePoint& g) const;
    void compute_boundary();

    friend WeightModuleWindow highest_weight_module(const std::vector<ToralScalar>& lambda,
                                                    int radius);
};

// Dispatch on spec.kind.
WeightModuleWindow build_module(const ModuleSpec& spec);
WeightModuleWindow build_gwa_module(const ModuleSpec& spec);

// The window for L(λ) when λ lies in the completely pointed families:
// realized as the Σg = 0 graded piece of a GWA module for a seed found by
// the invariant-vector conditions, or as the twisted wedge table for an
// interior ±q slot. λ outside the families is rejected.
WeightModuleWindow highest_weight_module(const std::vector<ToralScalar>& lambda, int radius);

// The rank-1 module with basis v_0..v_radius, K·v_k = q^{-2k}(1+q)·v_k,
// E·v_k = [1+q;-k+1]·v_{k-1}, F·v_k = [k+1]_q·v_{k+1}.
WeightModuleWindow lq1_example_module(int radius = 10);

struct GradedPiece {
    int degree;  // relative to the eigenvalue anchor at lattice 0
    std::vector<LatticePoint> points;
    bool complete;  // no degree-zero move exits the window box
    std::optional<LatticePoint> highest_point;
    std::optional<std::vector<ToralScalar>> highest_weight;  // K_i eigenvalues there
};

// Partition of a GWA window's support by 𝔼_q-eigenvalue ξ·q^m; each piece
// is closed under all degree-zero actions inside the window.
std::vector<GradedPiece> decompose_pullback(const WeightModuleWindow& w);

// Materialize one graded piece as a restricted window.
WeightModuleWindow piece_window(const WeightModuleWindow& w, const GradedPiece& p);

bool is_completely_pointed(const WeightModuleWindow& w);

struct IrreducibilityVerdict {
    enum class Status { IrreducibleOnWindow, Separating, InconclusiveTruncated };
    Status status;
    std::vector<LatticePoint> separating_subset;  // closed proper subset, Separating only
};

IrreducibilityVerdict is_irreducible_on_window(const WeightModuleWindow& w,
                                               const GradedPiece& piece);

// Deterministic serialization: support, weights, boundary flags, and all
// single-generator edges with coefficients. from-JSON rebuilds the window
// and cross-checks the stored data.
std::string window_to_json(const WeightModuleWindow& w);
WeightModuleWindow window_from_json(const std::string& text);
std::string window_to_dot(const WeightModuleWindow& w);

}  // namespace qua
