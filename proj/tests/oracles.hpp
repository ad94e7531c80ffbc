#pragma once

// Slow reference computations used only by the tests. They share no code with the kernels
// beyond the Hypergraph container and ranking.

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "hamlaw/combinadic.hpp"
#include "hamlaw/hypergraph.hpp"

namespace oracle_ref {

using hamlaw::Rank;
using hamlaw::Vertex;

inline std::vector<Rank> window_ranks(const std::vector<Vertex>& seq, unsigned r, unsigned s, bool cyclic) {
    std::vector<Rank> out;
    const std::size_t n = seq.size();
    for (std::size_t start = 0; cyclic ? start < n : start + r <= n; start += s) {
        std::vector<Vertex> w;
        for (unsigned j = 0; j < r; ++j) w.push_back(seq[(start + j) % n]);
        std::sort(w.begin(), w.end());
        if (std::adjacent_find(w.begin(), w.end()) != w.end()) return {};
        out.push_back(hamlaw::rank_subset(w, static_cast<unsigned>(std::max<std::size_t>(n, w.back() + 1)), r));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Number of permutations of [0, v) preserving the edge set, by trying all v! permutations.
inline unsigned long long aut_all_permutations(unsigned v, unsigned r, const std::vector<std::vector<Vertex>>& edges) {
    std::set<std::vector<Vertex>> e;
    for (auto x : edges) {
        std::sort(x.begin(), x.end());
        e.insert(x);
    }
    std::vector<Vertex> perm(v);
    std::iota(perm.begin(), perm.end(), 0);
    unsigned long long count = 0;
    do {
        bool ok = true;
        for (const auto& x : e) {
            std::vector<Vertex> y;
            for (Vertex a : x) y.push_back(perm[a]);
            std::sort(y.begin(), y.end());
            if (!e.count(y)) {
                ok = false;
                break;
            }
        }
        count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    (void)r;
    return count;
}

// Distinct Hamilton ell-cycle edge sets of `g`, by running over all n! vertex orders.
inline std::set<std::vector<Rank>> cycles_all_orders(const hamlaw::Hypergraph& g, unsigned ell) {
    const unsigned n = g.n();
    const unsigned r = g.r();
    std::vector<Vertex> seq(n);
    std::iota(seq.begin(), seq.end(), 0);
    std::set<std::vector<Rank>> out;
    do {
        const auto ranks = window_ranks(seq, r, r - ell, true);
        if (ranks.empty()) continue;
        if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end()) continue;
        bool ok = true;
        for (Rank k : ranks) ok = ok && g.contains(k);
        if (ok) out.insert(ranks);
    } while (std::next_permutation(seq.begin(), seq.end()));
    return out;
}

// Distinct P_k edge sets of `g`, by running over all injective vertex sequences of length v.
inline std::set<std::vector<Rank>> paths_all_sequences(const hamlaw::Hypergraph& g, unsigned k, unsigned ell) {
    const unsigned n = g.n();
    const unsigned r = g.r();
    const unsigned s = r - ell;
    const unsigned v = ell + k * s;
    std::set<std::vector<Rank>> out;
    if (v > n) return out;
    std::vector<Vertex> seq(v);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, unsigned pos) -> void {
        if (pos == v) {
            std::vector<Rank> ranks;
            for (unsigned i = 0; i < k; ++i) {
                std::vector<Vertex> w(seq.begin() + i * s, seq.begin() + i * s + r);
                std::sort(w.begin(), w.end());
                const Rank x = hamlaw::rank_subset(w, n, r);
                if (!g.contains(x)) return;
                ranks.push_back(x);
            }
            std::sort(ranks.begin(), ranks.end());
            out.insert(ranks);
            return;
        }
        for (Vertex x = 0; x < n; ++x) {
            if (used[x]) continue;
            used[x] = 1;
            seq[pos] = x;
            self(self, pos + 1);
            used[x] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace oracle_ref
