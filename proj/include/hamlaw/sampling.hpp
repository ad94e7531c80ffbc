#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hamlaw/hypergraph.hpp"
#include "hamlaw/params.hpp"
#include "hamlaw/rng.hpp"
#include "hamlaw/structures.hpp"

namespace hamlaw {

/// G_r(n,p): edge with rank k is present iff keyed_bernoulli(stream_key(seed, EdgeCoins), k, p).
/// Coins are keyed by rank, so every sampler below sees the same coin for the same edge.
Hypergraph sample_gnp(const Params& params, const Seed& seed);

struct PlantedInstance {
    Hypergraph graph;
    std::vector<CycleCopy> planted;  // one or two cycles
    int overlap_t = -1;              // shared edges; -1 with a single planted cycle
    std::string scheme;              // how the pair was drawn ("", "uniform-pairs", "segment", "identical")
};

/// Uniformly random Hamilton ell-cycle on [0, n): a uniform vertex order, read as windows.
CycleCopy random_cycle(unsigned n, unsigned r, unsigned ell, CounterRng& rng);

/// Planted model: a uniform cycle copy plus every other edge with probability p.
PlantedInstance plant_cycle(const Params& params, const Seed& seed);

struct DoublePlantOptions {
    // Pairs are drawn exactly uniformly while N_C is at most this; above it the segment scheme is used.
    std::uint64_t uniform_pair_limit = 200'000;
    std::uint64_t max_attempts = 100'000;
};

/// Double-planted model: two cycle copies sharing exactly overlap_t edges.
///
/// uniform-pairs: C1 uniform; C2 is the image under C1's labelling of a uniform member of the
/// list of cycles meeting the canonical cycle in exactly overlap_t edges. This is the law of
/// two independent uniform cycles conditioned on the overlap.
/// segment: C2 keeps the vertices of C1's first overlap_t windows in place and reshuffles all
/// other positions, rejecting until the overlap is exactly overlap_t.
PlantedInstance plant_two_cycles(const Params& params, unsigned overlap_t, const Seed& seed,
                                 const DoublePlantOptions& options = {});

/// Keeps each edge independently with probability q (coins keyed by rank under ThinCoins).
Hypergraph thin(const Hypergraph& graph, double q, const Seed& seed);

/// Number of shared edge ranks of two sorted rank lists.
unsigned shared_edges(const std::vector<Rank>& a, const std::vector<Rank>& b);

}  // namespace hamlaw
