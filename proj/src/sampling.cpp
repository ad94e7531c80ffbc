#include "hamlaw/sampling.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "hamlaw/counting.hpp"
#include "hamlaw/errors.hpp"

namespace hamlaw {

namespace {

std::vector<Rank> coin_edges(unsigned n, unsigned r, double p, const Seed& seed, const std::vector<Rank>& forced) {
    const std::uint64_t universe = choose(n, r);
    const std::uint64_t key = stream_key(seed, Domain::EdgeCoins);
    const std::uint64_t threshold = bernoulli_threshold(p);
    std::vector<Rank> ranks;
    auto f = forced.begin();
    for (Rank k = 0; k < universe; ++k) {
        while (f != forced.end() && *f < k) ++f;
        if ((f != forced.end() && *f == k) || keyed_bernoulli(key, k, threshold)) ranks.push_back(k);
    }
    return ranks;
}

std::vector<Rank> union_ranks(const std::vector<Rank>& a, const std::vector<Rank>& b) {
    std::vector<Rank> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// All cycles of the complete graph meeting the canonical cycle 0,1,...,n-1 in exactly t edges.
const std::vector<std::vector<Vertex>>& partners_of_canonical(unsigned n, unsigned r, unsigned ell, unsigned t) {
    static std::mutex mu;
    static std::map<std::tuple<unsigned, unsigned, unsigned>, std::vector<std::vector<std::vector<Vertex>>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(n, r, ell);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const CycleCopy canonical = build_cycle(n, r, ell);
        const unsigned m = n / (r - ell);
        std::vector<std::vector<std::vector<Vertex>>> by_overlap(m + 1);
        for (const CycleCopy& c : enumerate_hamilton(Hypergraph::complete(n, r), ell, 10'000'000)) {
            by_overlap[shared_edges(canonical.edge_ranks, c.edge_ranks)].push_back(c.sequence);
        }
        it = cache.emplace(key, std::move(by_overlap)).first;
    }
    return it->second.at(t);
}

}  // namespace

unsigned shared_edges(const std::vector<Rank>& a, const std::vector<Rank>& b) {
    unsigned shared = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++shared;
            ++i;
            ++j;
        }
    }
    return shared;
}

Hypergraph sample_gnp(const Params& params, const Seed& seed) {
    return Hypergraph(params.n, params.r, coin_edges(params.n, params.r, params.p, seed, {}));
}

CycleCopy random_cycle(unsigned n, unsigned r, unsigned ell, CounterRng& rng) {
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(std::span<Vertex>(order));
    return make_cycle_copy(std::move(order), r, ell);
}

PlantedInstance plant_cycle(const Params& params, const Seed& seed) {
    CounterRng rng(seed, Domain::PlantedCycle);
    PlantedInstance out;
    out.planted.push_back(random_cycle(params.n, params.r, params.ell, rng));
    out.graph = Hypergraph(params.n, params.r, coin_edges(params.n, params.r, params.p, seed, out.planted[0].edge_ranks));
    return out;
}

PlantedInstance plant_two_cycles(const Params& params, unsigned overlap_t, const Seed& seed,
                                 const DoublePlantOptions& options) {
    const unsigned n = params.n;
    const unsigned r = params.r;
    const unsigned ell = params.ell;
    const unsigned m = params.m_edges;
    const unsigned s = params.s;
    if (overlap_t > m) throw InfeasibleConfiguration("plant_two_cycles: overlap_t exceeds the number of cycle edges");
    if (s == 1 && overlap_t + 1 == m) {
        throw InfeasibleConfiguration("plant_two_cycles: two tight cycles cannot share all but one edge");
    }

    PlantedInstance out;
    out.overlap_t = static_cast<int>(overlap_t);
    CounterRng rng1(seed, Domain::PlantedCycle);
    CounterRng rng2(seed, Domain::SecondCycle);
    CycleCopy c1 = random_cycle(n, r, ell, rng1);
    CycleCopy c2;

    if (overlap_t == m) {
        out.scheme = "identical";
        c2 = c1;
    } else if (cycle_copy_count(n, r, ell) <= options.uniform_pair_limit) {
        out.scheme = "uniform-pairs";
        const auto& partners = partners_of_canonical(n, r, ell, overlap_t);
        if (partners.empty()) {
            throw InfeasibleConfiguration("plant_two_cycles: no pair of cycles shares exactly " +
                                          std::to_string(overlap_t) + " edges");
        }
        const auto& pick = partners[rng2.below(partners.size())];
        std::vector<Vertex> seq(n);
        for (unsigned i = 0; i < n; ++i) seq[i] = c1.sequence[pick[i]];
        c2 = make_cycle_copy(std::move(seq), r, ell);
    } else {
        out.scheme = "segment";
        const unsigned kept = overlap_t == 0 ? 0 : ell + overlap_t * s;
        bool found = false;
        for (std::uint64_t attempt = 0; attempt < options.max_attempts && !found; ++attempt) {
            std::vector<Vertex> seq(c1.sequence);
            rng2.shuffle(std::span<Vertex>(seq).subspan(kept));
            CycleCopy candidate = make_cycle_copy(std::move(seq), r, ell);
            if (shared_edges(c1.edge_ranks, candidate.edge_ranks) == overlap_t) {
                c2 = std::move(candidate);
                found = true;
            }
        }
        if (!found) {
            throw InfeasibleConfiguration("plant_two_cycles: no pair with overlap " + std::to_string(overlap_t) +
                                          " found within the attempt limit");
        }
    }
    if (shared_edges(c1.edge_ranks, c2.edge_ranks) != overlap_t) {
        throw InternalConsistency("plant_two_cycles: drawn pair has the wrong overlap");
    }
    const std::vector<Rank> forced = union_ranks(c1.edge_ranks, c2.edge_ranks);
    out.graph = Hypergraph(n, r, coin_edges(n, r, params.p, seed, forced));
    out.planted.push_back(std::move(c1));
    out.planted.push_back(std::move(c2));
    return out;
}

Hypergraph thin(const Hypergraph& graph, double q, const Seed& seed) {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("thin: q must lie in [0, 1]");
    const std::uint64_t key = stream_key(seed, Domain::ThinCoins);
    const std::uint64_t threshold = bernoulli_threshold(q);
    std::vector<Rank> kept;
    for (Rank k : graph.ranks()) {
        if (keyed_bernoulli(key, k, threshold)) kept.push_back(k);
    }
    return Hypergraph(graph.n(), graph.r(), std::move(kept));
}

}  // namespace hamlaw
