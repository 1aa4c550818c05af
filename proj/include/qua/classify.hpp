#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qua/modrep.hpp"
#include "qua/rootsys.hpp"
#include "qua/scalar.hpp"
#include "qua/uq.hpp"

namespace qua {

// A formal linear combination of window basis vectors.
using WindowVector = std::map<LatticePoint, Scalar>;

// One verification record: which check ran, at which index tuple, whether it
// passed, and the residual scalar (zero on pass for equation checks; the
// measured value itself for nonvanishing checks).
struct CheckRecord {
    std::string check;
    std::vector<int> indices;
    bool pass = false;
    Scalar residual;
};

struct ClassifyReport {
    std::vector<CheckRecord> records;
    bool all_pass() const;
};

// Serialize a report as a JSON array of {check, indices, status, residual}.
std::string report_to_json(const ClassifyReport& r);

// ---------------------------------------------------------------------------
// Root partition: sort every root of gl_{n+1} into nilpotent / torsion-free
// behavior as observed on a window.
//
// For each root beta, the chain v, E_beta v, E_beta^2 v, ... is walked from
// every interior start point.  A chain that becomes exactly zero in-window is
// decisive evidence that beta acts non-injectively (nilpotent side); if no
// chain dies and every chain leaves the window through a face where the seed
// admits no invisible kill surface, beta is torsion-free.  Exits that a
// larger radius could still overturn leave beta undecided.
// ---------------------------------------------------------------------------
struct RootPartition {
    std::set<Root> N_s;  // beta and -beta both nilpotent
    std::set<Root> N_a;  // beta nilpotent, -beta torsion-free
    std::set<Root> T_s;  // beta and -beta both torsion-free
    std::set<Root> T_a;  // beta torsion-free, -beta nilpotent
    std::set<Root> inconclusive;

    bool decided() const { return inconclusive.empty(); }
    std::set<Root> nilpotent() const;     // N_s ∪ N_a
    std::set<Root> torsion_free() const;  // T_s ∪ T_a
};

RootPartition partition_roots(const WeightModuleWindow& w);

// Walk the nilpotent directions of an adapted base to a common highest
// vector: v+ = E_{beta_1}^{r_1-1} ... E_{beta_l}^{r_l-1} v* where
// {beta_1..beta_l} = N ∩ (adapted base) and r_k is minimal with
// E_{beta_k}^{r_k} annihilating the current vector.  Throws
// std::invalid_argument when the partition has no nilpotent roots,
// math_error("window exhausted") when a power walk leaves the window, and
// std::logic_error when the result fails the invariance cross-check.
WindowVector find_invariant_vector(const WeightModuleWindow& w,
                                   const RootPartition& p);

// Candidate seed tuples mu (length n+1) consistent with the measured action
// on a one-point invariant vector, labelled by branch.
struct MuSolution {
    std::vector<ToralScalar> mu;
    std::string tag;
};

std::vector<MuSolution> solve_mu(const WeightModuleWindow& w,
                                 const WindowVector& vplus);

// Verify the consistency relations tying the kappa/phi structure constants
// and the pair products z_{ij} together on a window where every root acts
// torsion-freely.  v must be supported on a single interior point.
ClassifyReport verify_phi_relations(const WeightModuleWindow& w,
                                    const WindowVector& v);

// ---------------------------------------------------------------------------
// Gamma determinants.
// ---------------------------------------------------------------------------

// det of the 2x2 matrix gamma_{ab} defined by y_a x_b v = gamma_{ab} v, for a
// one-point v on a completely pointed window.  Throws math_error when some
// product is not proportional to v in-window.
Scalar gamma_det(const WeightModuleWindow& w, const AlgebraElement& x1,
                 const AlgebraElement& x2, const AlgebraElement& y1,
                 const AlgebraElement& y2, const WindowVector& v);

// The same determinant computed formally on an abstract highest-weight
// vector: only the pure-torus part of each product y_a x_b survives, and it
// is evaluated at the weight lift of lambda.  Prepared once, evaluated at
// many lambda.
class FormalGammaDet {
public:
    FormalGammaDet(int n, const AlgebraElement& x1, const AlgebraElement& x2,
                   const AlgebraElement& y1, const AlgebraElement& y2);

    int rank() const { return n_; }
    // a, b in {1, 2}.
    Scalar gamma(int a, int b, const std::vector<ToralScalar>& lambda) const;
    Scalar det(const std::vector<ToralScalar>& lambda) const;

private:
    int n_;
    // K̄-exponent vector -> coefficient, for each of y1x1, y1x2, y2x1, y2x2.
    std::array<std::map<std::vector<int32_t>, Scalar>, 4> torus_;
};

// The three quadruple families probing complete pointedness of a
// highest-weight module.
FormalGammaDet chain_quadruple(int n, int i);                       // 1 <= i <= n-1
FormalGammaDet disjoint_quadruple(int n, int i, int j, int k, int l);  // i<j<k<l
FormalGammaDet interior_quadruple(int n, int i);                    // 2 <= i <= n-1

// True when every family determinant vanishes at lambda and at its Dynkin
// reverse.
bool is_cp_by_dets(const std::vector<ToralScalar>& lambda);

// Closed-form classification of the completely pointed highest-weight
// families, with the matching family tags ("all-pm-one", "q-slot-i",
// "c-first", "c-last", "adjacent-pair-i").  Several tags may apply at once.
struct FamilyVerdict {
    bool completely_pointed = false;
    std::vector<std::string> tags;
};

FamilyVerdict is_cp_highest_weight(const std::vector<ToralScalar>& lambda);

// Check that an element of the kernel of the Weyl-algebra homomorphism
// annihilates every interior basis vector of each window (skipping points
// whose image cannot be evaluated in-window).  Throws math_error when x is
// not in the kernel.
ClassifyReport kernel_annihilates(
    const AlgebraElement& x,
    const std::vector<const WeightModuleWindow*>& windows);

}  // namespace qua
