#include "qua/rootsys.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "qua/scalar.hpp"

namespace qua {

namespace {

void check_rank(int n) {
    if (n < 1) throw std::invalid_argument("rank must be at least 1");
}

}  // namespace

std::string root_str(const Root& r) {
    return "e" + std::to_string(r.i) + "-e" + std::to_string(r.j);
}

void check_root(const Root& r, int n) {
    check_rank(n);
    if (r.i < 1 || r.i > n + 1 || r.j < 1 || r.j > n + 1)
        throw std::invalid_argument("root index out of range: " + root_str(r));
    if (r.i == r.j) throw std::invalid_argument("root indices must differ");
}

std::vector<Root> convex_order(int n) {
    check_rank(n);
    std::vector<Root> out;
    out.reserve(n * (n + 1) / 2);
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n + 1; ++j) out.push_back(Root{i, j});
    return out;
}

std::vector<Root> all_roots(int n) {
    std::vector<Root> out = convex_order(n);
    const int r = static_cast<int>(out.size());
    for (int k = 0; k < r; ++k) out.push_back(out[k].negated());
    return out;
}

int convex_index(const Root& beta, int n) {
    check_root(beta, n);
    if (!beta.positive()) throw std::invalid_argument("convex_index expects a positive root");
    // Row i holds the n+1-i roots (i, i+1), …, (i, n+1).
    const int before = (beta.i - 1) * (2 * n + 2 - beta.i) / 2;
    return before + (beta.j - beta.i - 1);
}

std::vector<int> w0_word(int n) {
    check_rank(n);
    std::vector<int> word;
    word.reserve(n * (n + 1) / 2);
    for (int len = n; len >= 1; --len)
        for (int i = 1; i <= len; ++i) word.push_back(i);
    return word;
}

std::vector<Root> roots_from_word(const std::vector<int>& word, int n) {
    check_rank(n);
    std::vector<Root> out;
    out.reserve(word.size());
    WeylPerm prefix = WeylPerm::identity(n);
    for (std::size_t k = 0; k < word.size(); ++k) {
        const int ik = word[k];
        if (ik < 1 || ik > n) throw std::invalid_argument("word letter out of range");
        out.push_back(prefix.act(Root{ik, ik + 1}));
        prefix = prefix.compose(WeylPerm::simple(n, ik));
    }
    return out;
}

WeylPerm::WeylPerm(int n) {
    check_rank(n);
    img_.resize(n + 1);
    std::iota(img_.begin(), img_.end(), 1);
}

WeylPerm WeylPerm::identity(int n) { return WeylPerm(n); }

WeylPerm WeylPerm::simple(int n, int i) {
    if (i < 1 || i > n) throw std::invalid_argument("simple reflection index out of range");
    WeylPerm w(n);
    std::swap(w.img_[i - 1], w.img_[i]);
    return w;
}

WeylPerm WeylPerm::from_images(std::vector<int> img) {
    if (img.size() < 2) throw std::invalid_argument("permutation needs at least two points");
    std::vector<int> seen(img.size(), 0);
    for (int v : img) {
        if (v < 1 || v > static_cast<int>(img.size()) || seen[v - 1]++)
            throw std::invalid_argument("not a permutation of 1..n+1");
    }
    WeylPerm w(static_cast<int>(img.size()) - 1);
    w.img_ = std::move(img);
    return w;
}

int WeylPerm::operator()(int i) const {
    if (i < 1 || i > static_cast<int>(img_.size()))
        throw std::invalid_argument("permutation point out of range");
    return img_[i - 1];
}

WeylPerm WeylPerm::compose(const WeylPerm& other) const {
    if (img_.size() != other.img_.size()) throw std::invalid_argument("rank mismatch");
    WeylPerm w(rank());
    for (std::size_t k = 0; k < img_.size(); ++k) w.img_[k] = img_[other.img_[k] - 1];
    return w;
}

WeylPerm WeylPerm::inverse() const {
    WeylPerm w(rank());
    for (std::size_t k = 0; k < img_.size(); ++k) w.img_[img_[k] - 1] = static_cast<int>(k) + 1;
    return w;
}

Root WeylPerm::act(const Root& r) const {
    check_root(r, rank());
    return Root{(*this)(r.i), (*this)(r.j)};
}

namespace {

// Expansion of ε_i − ε_j in a spanning-tree base: coefficient per entry is the
// signed multiplicity of that edge on the tree path from i to j. Returns false
// when the entries do not span (no path / cycle among edges).
bool expand_in_base(int n, const Base& b, const Root& gamma, std::vector<int>& coeff) {
    const int verts = n + 2;  // 1-based
    // adjacency: vertex -> list of (neighbor, entry index, direction)
    std::vector<std::vector<std::array<int, 3>>> adj(verts);
    for (int k = 0; k < static_cast<int>(b.size()); ++k) {
        adj[b[k].i].push_back({b[k].j, k, +1});
        adj[b[k].j].push_back({b[k].i, k, -1});
    }
    std::vector<int> prev_vert(verts, 0), prev_entry(verts, -1), prev_dir(verts, 0);
    std::vector<char> visited(verts, 0);
    std::vector<int> stack{gamma.i};
    visited[gamma.i] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (const auto& [w, k, d] : adj[v]) {
            if (visited[w]) continue;
            visited[w] = 1;
            prev_vert[w] = v;
            prev_entry[w] = k;
            prev_dir[w] = d;
            stack.push_back(w);
        }
    }
    if (!visited[gamma.j]) return false;
    coeff.assign(b.size(), 0);
    for (int v = gamma.j; v != gamma.i; v = prev_vert[v]) coeff[prev_entry[v]] += prev_dir[v];
    return true;
}

bool has_multi_edge(const Base& b) {
    for (std::size_t a = 0; a < b.size(); ++a)
        for (std::size_t c = a + 1; c < b.size(); ++c)
            if (b[a] == b[c] || b[a] == b[c].negated()) return true;
    return false;
}

}  // namespace

bool is_base(int n, const Base& b) {
    check_rank(n);
    if (static_cast<int>(b.size()) != n) return false;
    for (const Root& r : b) check_root(r, n);
    if (has_multi_edge(b)) return false;
    // n distinct edges on n+1 vertices span iff they form a tree; then every
    // root expands uniquely and only the sign pattern remains to check.
    std::vector<int> coeff;
    for (const Root& gamma : all_roots(n)) {
        if (!expand_in_base(n, b, gamma, coeff)) return false;
        bool has_pos = false, has_neg = false;
        for (int c : coeff) {
            if (c > 0) has_pos = true;
            if (c < 0) has_neg = true;
        }
        if (has_pos && has_neg) return false;
    }
    return true;
}

std::vector<Root> positive_roots_of_base(int n, const Base& b) {
    if (!is_base(n, b)) throw std::invalid_argument("entries do not form a base");
    std::vector<Root> out;
    std::vector<int> coeff;
    for (const Root& gamma : all_roots(n)) {
        if (!expand_in_base(n, b, gamma, coeff)) continue;
        bool has_neg = false;
        for (int c : coeff)
            if (c < 0) has_neg = true;
        if (!has_neg) out.push_back(gamma);
    }
    return out;
}

Base find_adapted_base(int n, const std::set<Root>& Na, const std::set<Root>& Ns,
                       const std::set<Root>& Ts) {
    check_rank(n);
    if (n > 6) throw std::invalid_argument("adapted-base search is capped at rank 6");
    for (const auto& s : {Na, Ns, Ts})
        for (const Root& r : s) check_root(r, n);

    const std::vector<Root> phi_plus = convex_order(n);
    std::vector<int> img(n + 1);
    std::iota(img.begin(), img.end(), 1);

    bool found = false;
    Base best;
    do {
        const WeylPerm w = WeylPerm::from_images(img);
        Base cand;
        cand.reserve(n);
        for (int i = 1; i <= n; ++i) cand.push_back(Root{w(i), w(i + 1)});

        // Φ_B^+ for a Weyl image of the standard base is w(Φ^+).
        bool ok = true;
        for (const Root& r : Na) {
            const Root pre = w.inverse().act(r);
            if (!pre.positive()) {
                ok = false;
                break;
            }
        }
        if (ok) {
            for (const Root& r : cand) {
                if (!Na.count(r) && !r.positive()) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok && (!found || std::lexicographical_compare(cand.begin(), cand.end(), best.begin(),
                                                          best.end()))) {
            found = true;
            best = cand;
        }
    } while (std::next_permutation(img.begin(), img.end()));

    if (!found) throw math_error("no adapted base");
    if (!is_base(n, best)) throw std::logic_error("adapted base failed expansion check");
    return best;
}

}  // namespace qua
