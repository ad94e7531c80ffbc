#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "hamlaw/combinadic.hpp"

namespace hamlaw {

/// An r-uniform hypergraph on vertices [0, n). Immutable after construction.
///
/// Edges are stored by colex rank, sorted ascending. Membership is O(1): a dense
/// bitset when C(n, r) is small enough, otherwise a hash set.
class Hypergraph {
public:
    static constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 28;

    Hypergraph() = default;
    Hypergraph(unsigned n, unsigned r, std::vector<Rank> ranks);

    static Hypergraph from_edges(unsigned n, unsigned r, const std::vector<std::vector<Vertex>>& edges);
    static Hypergraph complete(unsigned n, unsigned r);
    static Hypergraph empty(unsigned n, unsigned r) { return Hypergraph(n, r, {}); }

    unsigned n() const { return n_; }
    unsigned r() const { return r_; }
    std::size_t edge_count() const { return ranks_.size(); }
    std::uint64_t universe_size() const { return choose(n_, r_); }
    std::span<const Rank> ranks() const { return ranks_; }

    bool contains(Rank rank) const {
        if (dense_) return rank < universe_size() && ((bits_[rank >> 6] >> (rank & 63)) & 1U);
        return sparse_.count(rank) != 0;
    }
    // `sorted` must be strictly increasing with r entries.
    bool contains_sorted(const Vertex* sorted) const { return contains(rank_sorted_unchecked(sorted, r_)); }

    std::vector<Vertex> edge_vertices(std::size_t i) const { return unrank_subset(ranks_[i], n_, r_); }

    /// Union with extra edges given by rank (duplicates ignored).
    Hypergraph with_edges(std::span<const Rank> extra) const;

    friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
        return a.n_ == b.n_ && a.r_ == b.r_ && a.ranks_ == b.ranks_;
    }

private:
    unsigned n_ = 0;
    unsigned r_ = 0;
    std::vector<Rank> ranks_;
    bool dense_ = true;
    std::vector<std::uint64_t> bits_;
    std::unordered_set<Rank> sparse_;
};

/// Maps vertex v to perm[v]. perm must be a bijection on [0, n).
Hypergraph relabel(const Hypergraph& graph, std::span<const Vertex> perm);

// --- serialization ---------------------------------------------------------
// Text form (version 1):
//   # hamlaw-hypergraph 1
//   n r edge_count
//   v0 v1 ... v_{r-1}        (one edge per line, sorted, ascending rank order)
// Binary form (version 1), all integers little-endian:
//   "HLHG" | u32 version | u32 n | u32 r | u64 edge_count | u64 rank * edge_count
void write_text(std::ostream& os, const Hypergraph& graph);
Hypergraph read_text(std::istream& is);
std::string to_text(const Hypergraph& graph);

void write_binary(std::ostream& os, const Hypergraph& graph);
Hypergraph read_binary(std::istream& is);

Hypergraph load_hypergraph(const std::string& path);  // detects the form by magic bytes
void save_hypergraph(const std::string& path, const Hypergraph& graph, bool binary = false);

}  // namespace hamlaw
