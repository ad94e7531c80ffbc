#pragma once

// Sequence-search kernel shared by the counting operations.
//
// A SearchPlan fixes a number of positions and a set of r-position windows. The kernel
// enumerates injective assignments position -> vertex such that every window lands on an
// edge of the host graph. Positions are filled in increasing order; a window is checked at
// its largest position by intersecting the candidate set with a precomputed completion mask.

#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hamlaw/combinadic.hpp"
#include "hamlaw/hypergraph.hpp"

namespace hamlaw {

/// For every (r-1)-subset S of [0, n): the bitmask of vertices v with S + {v} an edge.
class CompletionIndex {
public:
    explicit CompletionIndex(const Hypergraph& graph);

    unsigned n() const { return n_; }
    unsigned r() const { return r_; }
    std::uint64_t all() const { return all_; }

    // `others` holds r-1 distinct vertices in any order.
    std::uint64_t completions(const Vertex* others) const {
        Vertex buf[kMaxArity];
        for (unsigned i = 0; i < r_ - 1; ++i) {
            Vertex x = others[i];
            unsigned j = i;
            while (j > 0 && buf[j - 1] > x) {
                buf[j] = buf[j - 1];
                --j;
            }
            buf[j] = x;
        }
        const Rank key = rank_sorted_unchecked(buf, r_ - 1);
        if (dense_) return table_[key];
        auto it = sparse_.find(key);
        return it == sparse_.end() ? 0 : it->second;
    }

    static constexpr unsigned kMaxArity = 16;

private:
    unsigned n_ = 0;
    unsigned r_ = 0;
    std::uint64_t all_ = 0;
    bool dense_ = true;
    std::vector<std::uint64_t> table_;
    std::unordered_map<Rank, std::uint64_t> sparse_;
};

/// Positions, windows and symmetry-breaking constraints of one search.
struct SearchPlan {
    struct Step {
        // For each window completing at this position, the other r-1 positions (all earlier).
        std::vector<std::vector<unsigned>> windows;
        int twin_prev = -1;       // candidate must exceed the vertex at this position
        bool force_anchor = false;  // if vertex 0 is still unused here, it must be placed here
        bool exclude_anchor = false;
    };
    unsigned r = 0;
    std::vector<Step> steps;

    unsigned length() const { return static_cast<unsigned>(steps.size()); }
};

/// Plan for an arbitrary set of windows over `length` positions.
SearchPlan make_plan(unsigned length, unsigned r, const std::vector<std::vector<unsigned>>& windows);

/// Hamilton ell-cycle plan on n positions. With symmetry breaking, vertex 0 is pinned to the
/// first block of s positions and twin positions (same covering windows, same block) are
/// ordered increasingly; `twin_factor` reports the product of twin-group factorials.
struct CyclePlan {
    SearchPlan plan;
    std::uint64_t twin_factor = 1;
    bool symmetry_broken = false;
};
CyclePlan make_cycle_plan(unsigned n, unsigned r, unsigned ell, bool break_symmetry);

/// Plan for the ell-path with k windows.
SearchPlan make_path_plan(unsigned k, unsigned r, unsigned ell);

struct SearchStats {
    std::uint64_t count = 0;   // number of complete assignments
    std::uint64_t nodes = 0;   // interior nodes visited
};

/// Counts complete assignments. Throws ResourceLimit once `node_cap` interior nodes are exceeded.
SearchStats count_assignments_serial(const SearchPlan& plan, const CompletionIndex& index,
                                     std::uint64_t node_cap = ~std::uint64_t{0});

/// Same result as the serial version; OpenMP over a frontier of partial assignments,
/// reduced in frontier order.
SearchStats count_assignments_parallel(const SearchPlan& plan, const CompletionIndex& index,
                                       std::uint64_t node_cap = ~std::uint64_t{0});

/// Visits every complete assignment (serial). Visitor returns false to stop early.
void for_each_assignment(const SearchPlan& plan, const CompletionIndex& index,
                         const std::function<bool(std::span<const Vertex>)>& visit);

}  // namespace hamlaw
