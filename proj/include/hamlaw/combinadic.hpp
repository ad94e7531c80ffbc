#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hamlaw {

using Vertex = std::uint32_t;
using Rank = std::uint64_t;

// Largest vertex count supported by the bitmask kernels.
inline constexpr unsigned kMaxVertices = 64;

/// Pascal triangle up to kMaxVertices, as 64-bit integers.
///
/// All rank arithmetic for subsets of [0, 64) fits: C(64, 32) < 2^63.
class BinomialTable {
public:
    static const BinomialTable& instance();
    std::uint64_t operator()(unsigned n, unsigned k) const {
        return k > n ? 0 : table_[n][k];
    }

private:
    BinomialTable();
    std::uint64_t table_[kMaxVertices + 1][kMaxVertices + 1] = {};
};

inline std::uint64_t choose(unsigned n, unsigned k) { return BinomialTable::instance()(n, k); }

/// Colexicographic combinadic rank: sum_i C(v_i, i+1) for v_0 < v_1 < ... < v_{r-1}.
/// Validates ordering, range and arity.
Rank rank_subset(std::span<const Vertex> subset, unsigned n, unsigned r);

/// Inverse of rank_subset.
std::vector<Vertex> unrank_subset(Rank rank, unsigned n, unsigned r);

// Unchecked variant for hot loops: `sorted` must be strictly increasing.
inline Rank rank_sorted_unchecked(const Vertex* sorted, unsigned r) {
    const auto& c = BinomialTable::instance();
    Rank out = 0;
    for (unsigned i = 0; i < r; ++i) out += c(sorted[i], i + 1);
    return out;
}

}  // namespace hamlaw
