#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

namespace qua {

// A root ε_i − ε_j of type A_n, with 1-based indices i ≠ j in {1,…,n+1}.
// Positive exactly when i < j.
struct Root {
    int i = 1;
    int j = 2;

    bool positive() const { return i < j; }
    Root negated() const { return Root{j, i}; }

    auto operator<=>(const Root&) const = default;
};

std::string root_str(const Root& r);

// Throws std::invalid_argument unless 1 <= i,j <= n+1 and i != j.
void check_root(const Root& r, int n);

// Positive roots in the convex order induced by the fixed reduced word for
// w0: (1,2), (1,3), …, (1,n+1), (2,3), …, (n,n+1).
std::vector<Root> convex_order(int n);

// All n(n+1) roots: convex_order(n) followed by the negatives in the same order.
std::vector<Root> all_roots(int n);

// Position of a positive root within convex_order(n).
int convex_index(const Root& beta, int n);

// The fixed reduced word for the longest element:
// s_1…s_n s_1…s_{n-1} … s_1 s_2 s_1.
std::vector<int> w0_word(int n);

// β_k = s_{i_1}…s_{i_{k-1}}(α_{i_k}) for a reduced word (i_1,…,i_r).
// Brute-force companion used to cross-check convex_order.
std::vector<Root> roots_from_word(const std::vector<int>& word, int n);

// Weyl group of type A_n as permutations of {1,…,n+1}.
class WeylPerm {
public:
    explicit WeylPerm(int n);

    static WeylPerm identity(int n);
    static WeylPerm simple(int n, int i);  // s_i, 1 <= i <= n
    static WeylPerm from_images(std::vector<int> img);  // one-line notation, 1-based

    int rank() const { return static_cast<int>(img_.size()) - 1; }
    int operator()(int i) const;  // image of a 1-based index

    WeylPerm compose(const WeylPerm& other) const;  // this ∘ other
    WeylPerm inverse() const;
    Root act(const Root& r) const;

    bool operator==(const WeylPerm&) const = default;

private:
    std::vector<int> img_;
};

// An ordered candidate base: n roots.
using Base = std::vector<Root>;

// True when every root of Φ is an integer combination of the entries with
// all coefficients of one sign, checked by expanding the full root system.
bool is_base(int n, const Base& b);

// Φ_B^+: the roots whose expansion in b has nonnegative coefficients.
// Requires is_base(n, b).
std::vector<Root> positive_roots_of_base(int n, const Base& b);

// Searches all (n+1)! Weyl images of the standard base for one with
// Na ⊆ Φ_B^+ whose remaining entries are positive for the standard base.
// Ties resolve to the lexicographically least image. Throws math_error
// ("no adapted base") when the partition admits none; n is capped at 6.
Base find_adapted_base(int n, const std::set<Root>& Na, const std::set<Root>& Ns,
                       const std::set<Root>& Ts);

}  // namespace qua
