#include "hamlaw/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

#include "hamlaw/errors.hpp"
#include "hamlaw/search.hpp"

namespace hamlaw {

std::string to_string(CountMethod m) {
    switch (m) {
        case CountMethod::Auto: return "auto";
        case CountMethod::Backtracking: return "backtracking";
        case CountMethod::SubsetDp: return "subset-dp";
    }
    return "?";
}

namespace {

using u128 = unsigned __int128;

BigInt to_big(u128 x) {
    BigInt hi = static_cast<std::uint64_t>(x >> 64);
    return (hi << 64) + static_cast<std::uint64_t>(x);
}

// Expected interior nodes of the symmetry-broken cycle search under an edge density
// estimate; only used to pick a method.
double estimate_backtracking_nodes(unsigned n, unsigned r, unsigned s, double density) {
    double total = 0.0;
    double level = 1.0;
    for (unsigned depth = 1; depth < n; ++depth) {
        level *= static_cast<double>(n - depth);
        const unsigned pos = depth;  // position just filled
        if (pos + 1 >= r && (pos + 1 - r) % s == 0) level *= density;
        total += level;
        if (total > 1e30) break;
    }
    return total;
}

struct DpKey {
    std::uint64_t mask;
    std::uint64_t tail;
    friend bool operator<(const DpKey& a, const DpKey& b) {
        return a.mask != b.mask ? a.mask < b.mask : a.tail < b.tail;
    }
    friend bool operator==(const DpKey& a, const DpKey& b) = default;
};

constexpr unsigned kTailBits = 6;

u128 dp_from_prefix(const CompletionIndex& index, const std::vector<Vertex>& prefix, std::uint64_t max_states) {
    const unsigned n = index.n();
    const unsigned r = index.r();
    const unsigned w = r - 1;  // tail length
    const std::uint64_t tail_mask = (std::uint64_t{1} << (kTailBits * w)) - 1;
    auto unpack = [&](std::uint64_t tail, Vertex* out) {
        for (unsigned i = 0; i < w; ++i) out[i] = static_cast<Vertex>((tail >> (kTailBits * (w - 1 - i))) & 63U);
    };

    std::uint64_t mask0 = 0, tail0 = 0;
    for (Vertex v : prefix) {
        mask0 |= std::uint64_t{1} << v;
        tail0 = (tail0 << kTailBits) | v;
    }
    std::vector<std::pair<DpKey, u128>> layer{{DpKey{mask0, tail0}, 1}};
    Vertex buf[CompletionIndex::kMaxArity];
    for (unsigned filled = w; filled < n; ++filled) {
        std::vector<std::pair<DpKey, u128>> next;
        for (const auto& [key, ways] : layer) {
            unpack(key.tail, buf);
            std::uint64_t c = index.completions(buf) & ~key.mask;
            while (c) {
                const unsigned v = static_cast<unsigned>(std::countr_zero(c));
                c &= c - 1;
                next.push_back({DpKey{key.mask | (std::uint64_t{1} << v), ((key.tail << kTailBits) | v) & tail_mask}, ways});
            }
        }
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        layer.clear();
        for (auto& item : next) {
            if (!layer.empty() && layer.back().first == item.first) {
                layer.back().second += item.second;
            } else {
                layer.push_back(item);
            }
        }
        if (layer.size() > max_states) throw ResourceLimit("subset DP exceeded its state cap");
        if (layer.empty()) return 0;
    }
    // close the cycle: the windows that wrap from the tail into the prefix
    u128 total = 0;
    Vertex ring[2 * CompletionIndex::kMaxArity];
    for (const auto& [key, ways] : layer) {
        unpack(key.tail, ring);
        for (unsigned i = 0; i < w; ++i) ring[w + i] = prefix[i];
        bool ok = true;
        for (unsigned i = 0; i < w && ok; ++i) {
            ok = (index.completions(ring + i) >> ring[i + w]) & 1U;
        }
        if (ok) total += ways;
    }
    return total;
}

void collect_prefixes(unsigned n, unsigned len, std::vector<Vertex>& cur, std::uint64_t used,
                      std::vector<std::vector<Vertex>>& out) {
    if (cur.size() == len) {
        out.push_back(cur);
        return;
    }
    for (Vertex v = 0; v < n; ++v) {
        if ((used >> v) & 1U) continue;
        cur.push_back(v);
        collect_prefixes(n, len, cur, used | (std::uint64_t{1} << v), out);
        cur.pop_back();
    }
}

}  // namespace

BigInt tight_cycle_sequences_dp(const Hypergraph& graph, std::uint64_t max_states, bool parallel) {
    const unsigned n = graph.n();
    const unsigned r = graph.r();
    if (r < 3 || (r - 1) * kTailBits > 64) throw InvalidArgument("subset DP: unsupported r");
    const CompletionIndex index(graph);
    std::vector<std::vector<Vertex>> prefixes;
    std::vector<Vertex> cur{0};
    collect_prefixes(n, r - 1, cur, 1, prefixes);

    std::vector<u128> per_prefix(prefixes.size(), 0);
    std::atomic<bool> failed{false};
    const auto count = static_cast<long>(prefixes.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < count; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            per_prefix[i] = dp_from_prefix(index, prefixes[i], max_states);
        } catch (const ResourceLimit&) {
            failed = true;
        }
    }
    if (failed) throw ResourceLimit("subset DP exceeded its state cap");
    u128 total = 0;
    for (u128 x : per_prefix) total += x;
    return to_big(total);
}

CountResult count_hamilton(const Hypergraph& graph, unsigned ell, const CountOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const unsigned n = graph.n();
    const unsigned r = graph.r();
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0) throw InvalidArgument("count_hamilton: s = r - ell must divide n");
    if (n <= r) throw InvalidArgument("count_hamilton: need n > r");
    const unsigned m = n / g.s;

    CountMethod method = options.method;
    if (method == CountMethod::SubsetDp && g.s != 1) throw InvalidArgument("count_hamilton: subset DP needs s = 1");
    const double density = static_cast<double>(graph.edge_count()) / static_cast<double>(graph.universe_size());
    if (method == CountMethod::Auto) {
        const double est = estimate_backtracking_nodes(n, r, g.s, density);
        method = (g.s == 1 && est > 5e7) ? CountMethod::SubsetDp : CountMethod::Backtracking;
    }

    CountResult out;
    out.method = method;
    const BigInt aut = aut_cycle(n, r, ell, options.aut_cap);
    if (method == CountMethod::Backtracking) {
        const CyclePlan cp = make_cycle_plan(n, r, ell, true);
        out.divisor = exact_divide(aut, BigInt(m) * cp.twin_factor, "count_hamilton: symmetry factor");
        if (graph.edge_count() >= m) {
            const CompletionIndex index(graph);
            const SearchStats st = options.parallel ? count_assignments_parallel(cp.plan, index, options.max_nodes)
                                                    : count_assignments_serial(cp.plan, index, options.max_nodes);
            out.ordered_count = st.count;
            out.nodes_explored = st.nodes;
        }
    } else {
        out.divisor = exact_divide(aut, BigInt(m), "count_hamilton: symmetry factor");
        if (graph.edge_count() >= m) out.ordered_count = tight_cycle_sequences_dp(graph, options.max_dp_states, options.parallel);
    }
    out.count = exact_divide(out.ordered_count, out.divisor, "count_hamilton: ordered count");
    out.elapsed = std::chrono::steady_clock::now() - start;
    return out;
}

std::vector<CycleCopy> enumerate_hamilton(const Hypergraph& graph, unsigned ell, std::size_t max_copies,
                                          unsigned aut_cap) {
    const unsigned n = graph.n();
    const unsigned r = graph.r();
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0) throw InvalidArgument("enumerate_hamilton: s = r - ell must divide n");
    const unsigned m = n / g.s;
    const CyclePlan cp = make_cycle_plan(n, r, ell, true);
    const BigInt divisor = exact_divide(aut_cycle(n, r, ell, aut_cap), BigInt(m) * cp.twin_factor,
                                        "enumerate_hamilton: symmetry factor");
    const double max_sequences = static_cast<double>(max_copies) * to_double(divisor);

    std::map<std::vector<Rank>, CycleCopy> copies;
    std::uint64_t sequences = 0;
    bool over = false;
    const CompletionIndex index(graph);
    for_each_assignment(cp.plan, index, [&](std::span<const Vertex> seq) {
        if (static_cast<double>(++sequences) > max_sequences) {
            over = true;
            return false;
        }
        CycleCopy c = make_cycle_copy(std::vector<Vertex>(seq.begin(), seq.end()), r, ell);
        auto key = c.edge_ranks;
        copies.emplace(std::move(key), std::move(c));
        return true;
    });
    if (over) throw ResourceLimit("enumerate_hamilton: more copies than the listing cap");
    const BigInt expected = exact_divide(BigInt(sequences), divisor, "enumerate_hamilton: ordered count");
    if (expected != copies.size()) {
        throw InternalConsistency("enumerate_hamilton: deduplicated list disagrees with the ordered count");
    }
    std::vector<CycleCopy> out;
    out.reserve(copies.size());
    for (auto& [key, c] : copies) out.push_back(std::move(c));
    return out;
}

BigInt count_paths(const Hypergraph& graph, unsigned k, unsigned ell, bool parallel, unsigned aut_cap) {
    const unsigned r = graph.r();
    if (k == 0) throw InvalidArgument("count_paths: k must be at least 1");
    const unsigned v = path_vertex_count(k, r, ell);
    const BigInt aut = aut_path(k, r, ell, aut_cap);
    if (v > graph.n() || graph.edge_count() == 0) return 0;
    const SearchPlan plan = make_path_plan(k, r, ell);
    const CompletionIndex index(graph);
    const SearchStats st = parallel ? count_assignments_parallel(plan, index) : count_assignments_serial(plan, index);
    return exact_divide(BigInt(st.count), aut, "count_paths: ordered count");
}

}  // namespace hamlaw
