#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "hamlaw/bigint.hpp"
#include "hamlaw/hypergraph.hpp"
#include "hamlaw/structures.hpp"

namespace hamlaw {

enum class CountMethod { Auto, Backtracking, SubsetDp };

std::string to_string(CountMethod m);

struct CountOptions {
    CountMethod method = CountMethod::Auto;
    bool parallel = true;
    std::uint64_t max_nodes = 20'000'000'000ULL;   // backtracking interior nodes
    std::uint64_t max_dp_states = 30'000'000ULL;  // live subset-DP states per layer
    unsigned aut_cap = kDefaultAutCap;
};

struct CountResult {
    BigInt count;                          // Z: distinct copies (edge sets)
    BigInt ordered_count;                  // symmetry-broken sequences found
    BigInt divisor;                        // ordered_count = count * divisor
    std::chrono::duration<double> elapsed{};
    CountMethod method = CountMethod::Backtracking;
    std::uint64_t nodes_explored = 0;
};

/// Exact number of Hamilton ell-cycle copies in `graph`.
CountResult count_hamilton(const Hypergraph& graph, unsigned ell, const CountOptions& options = {});

/// All distinct Hamilton ell-cycle copies, sorted by edge-rank signature. Its size always equals
/// count_hamilton; throws ResourceLimit above `max_copies`.
std::vector<CycleCopy> enumerate_hamilton(const Hypergraph& graph, unsigned ell, std::size_t max_copies = 1'000'000,
                                          unsigned aut_cap = kDefaultAutCap);

/// Number of distinct P_k copies (edge sets) in `graph`.
BigInt count_paths(const Hypergraph& graph, unsigned k, unsigned ell, bool parallel = true,
                   unsigned aut_cap = kDefaultAutCap);

/// Ordered tight-cycle sequences with vertex 0 first, by layered subset DP (s = 1 only).
/// Exposed for cross-checking against the backtracking kernel.
BigInt tight_cycle_sequences_dp(const Hypergraph& graph, std::uint64_t max_states, bool parallel);

}  // namespace hamlaw
