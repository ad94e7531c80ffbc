#include "hamlaw/ystat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "hamlaw/counting.hpp"
#include "hamlaw/errors.hpp"
#include "hamlaw/search.hpp"
#include "hamlaw/theory.hpp"

namespace hamlaw {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

BigInt to_big(u128 x) {
    BigInt hi = static_cast<std::uint64_t>(x >> 64);
    return (hi << 64) + static_cast<std::uint64_t>(x);
}

// Window offsets (in units of windows) of one overlap-connected run, first offset 0.
using ComponentShape = std::vector<unsigned>;
// Sorted list of component shapes; identifies the embedding count of a partial pattern.
using PatternShape = std::vector<ComponentShape>;

struct Geometry {
    unsigned r;
    unsigned s;
    unsigned span(const ComponentShape& c) const { return c.back() * s + r; }
};

ComponentShape canonical_component(const std::vector<unsigned>& offsets) {
    ComponentShape fwd, rev;
    for (unsigned o : offsets) fwd.push_back(o - offsets.front());
    const unsigned last = fwd.back();
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) rev.push_back(last - *it);
    return std::min(fwd, rev);
}

// Splits the chosen windows of a k-window path into overlap-connected runs.
PatternShape shape_of(std::uint32_t subset, unsigned k, const Geometry& g) {
    PatternShape out;
    std::vector<unsigned> run;
    int prev = -1;
    for (unsigned i = 0; i < k; ++i) {
        if (!((subset >> i) & 1U)) continue;
        if (prev >= 0 && (i - static_cast<unsigned>(prev)) * g.s >= g.r) {
            out.push_back(canonical_component(run));
            run.clear();
        }
        run.push_back(i);
        prev = static_cast<int>(i);
    }
    if (!run.empty()) out.push_back(canonical_component(run));
    std::sort(out.begin(), out.end());
    return out;
}

unsigned constrained_vertices(const PatternShape& shape, const Geometry& g) {
    unsigned u = 0;
    for (const auto& c : shape) u += g.span(c);
    return u;
}

SearchPlan plan_for(const PatternShape& shape, const Geometry& g) {
    std::vector<std::vector<unsigned>> windows;
    unsigned base = 0;
    for (const auto& c : shape) {
        for (unsigned o : c) {
            std::vector<unsigned> w(g.r);
            for (unsigned j = 0; j < g.r; ++j) w[j] = base + o * g.s + j;
            windows.push_back(std::move(w));
        }
        base += g.span(c);
    }
    return make_plan(base, g.r, windows);
}

u128 factorial_u128(unsigned k) {
    u128 f = 1;
    for (unsigned i = 2; i <= k; ++i) f *= i;
    return f;
}

// image mask -> number of embeddings of one component with that image
std::unordered_map<std::uint64_t, std::uint64_t> image_masks(const ComponentShape& c, const Geometry& g,
                                                             const Hypergraph& graph, const CompletionIndex& index) {
    std::unordered_map<std::uint64_t, std::uint64_t> out;
    if (c.size() == 1) {
        const auto per_edge = static_cast<std::uint64_t>(factorial_u128(g.r));
        for (std::size_t i = 0; i < graph.edge_count(); ++i) {
            std::uint64_t mask = 0;
            for (Vertex v : graph.edge_vertices(i)) mask |= std::uint64_t{1} << v;
            out[mask] += per_edge;
        }
        return out;
    }
    for_each_assignment(plan_for(PatternShape{c}, g), index, [&](std::span<const Vertex> seq) {
        std::uint64_t mask = 0;
        for (Vertex v : seq) mask |= std::uint64_t{1} << v;
        ++out[mask];
        return true;
    });
    return out;
}

// Pairs (phi1, phi2) of component embeddings with disjoint images:
// sum over images M1 of cnt1(M1) * #{phi2 : im(phi2) avoids M1}, the latter by inclusion-exclusion
// over subsets T of M1 using cover2(T) = #{phi2 : T within im(phi2)}.
u128 disjoint_pairs(const std::unordered_map<std::uint64_t, std::uint64_t>& first,
                    const std::unordered_map<std::uint64_t, std::uint64_t>& second) {
    std::unordered_map<std::uint64_t, std::uint64_t> cover;
    for (const auto& [mask, count] : second) {
        std::uint64_t t = mask;
        for (;;) {
            cover[t] += count;
            if (t == 0) break;
            t = (t - 1) & mask;
        }
    }
    i128 total = 0;
    for (const auto& [mask, count] : first) {
        i128 avoid = 0;
        std::uint64_t t = mask;
        for (;;) {
            auto it = cover.find(t);
            if (it != cover.end()) {
                const i128 term = it->second;
                avoid += (std::popcount(t) % 2 == 0) ? term : -term;
            }
            if (t == 0) break;
            t = (t - 1) & mask;
        }
        total += static_cast<i128>(count) * avoid;
    }
    if (total < 0) throw InternalConsistency("y_statistic: negative embedding count");
    return static_cast<u128>(total);
}

u128 embedding_count(const PatternShape& shape, const Geometry& g, const Hypergraph& graph,
                     const CompletionIndex& index) {
    if (shape.empty()) return 1;
    if (shape.size() == 1 && shape[0].size() == 1) return factorial_u128(g.r) * graph.edge_count();
    if (shape.size() == 2) {
        const auto a = image_masks(shape[0], g, graph, index);
        const auto b = shape[1] == shape[0] ? a : image_masks(shape[1], g, graph, index);
        // the cover table is built from the component with fewer vertices
        return g.span(shape[0]) >= g.span(shape[1]) ? disjoint_pairs(a, b) : disjoint_pairs(b, a);
    }
    return count_assignments_serial(plan_for(shape, g), index).count;
}

void check_density(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("y_statistic: p must lie strictly between 0 and 1");
}

}  // namespace

std::vector<YStatistic> y_statistics(const Hypergraph& graph, unsigned ell, double p, unsigned K,
                                     const YOptions& options) {
    check_density(p);
    const unsigned n = graph.n();
    const unsigned r = graph.r();
    const CycleGeometry cg = derive_constants(r, ell);
    if (K > options.k_max) throw ResourceLimit("y_statistic: k exceeds K_max = " + std::to_string(options.k_max));
    if (K > 0 && path_vertex_count(K, r, ell) > n) throw InvalidArgument("y_statistic: P_K has more vertices than n");
    const Geometry g{r, cg.s};

    // every pattern shape that occurs, computed once
    std::map<PatternShape, u128> counts;
    for (unsigned k = 1; k <= K; ++k) {
        for (std::uint32_t a = 0; a < (std::uint32_t{1} << k); ++a) counts.emplace(shape_of(a, k, g), 0);
    }
    std::vector<std::pair<const PatternShape*, u128*>> work;
    for (auto& [shape, value] : counts) work.push_back({&shape, &value});
    const CompletionIndex index(graph);
    const auto items = static_cast<long>(work.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (long i = 0; i < items; ++i) *work[i].second = embedding_count(*work[i].first, g, graph, index);

    const Dyadic pd = to_dyadic(p);
    const BigInt two_e = BigInt(1) << pd.exponent;
    const double pq = p * (1.0 - p);

    std::vector<YStatistic> out;
    for (unsigned k = 1; k <= K; ++k) {
        const unsigned v = path_vertex_count(k, r, ell);
        const BigInt aut = aut_path(k, r, ell, options.aut_cap);
        const BigInt n_copies = exact_divide(falling_factorial(n, v), aut, "y_statistic: N_{P_k}");
        // sum_A (-P)^{k-|A|} (2^e)^{|A|} emb(A), split by |A|
        std::vector<BigInt> by_size(k + 1);
        for (std::uint32_t a = 0; a < (std::uint32_t{1} << k); ++a) {
            const PatternShape shape = shape_of(a, k, g);
            const unsigned j = static_cast<unsigned>(std::popcount(a));
            const unsigned u = constrained_vertices(shape, g);
            BigInt emb = to_big(counts.at(shape)) * falling_factorial(n - u, v - u);
            by_size[j] += emb;
        }
        YStatistic y;
        y.k = k;
        const BigInt denom = (BigInt(1) << (pd.exponent * k)) * aut;
        const double scale = 1.0 / (std::sqrt(to_double(n_copies)) * std::pow(pq, 0.5 * k));
        BigInt total = 0;
        for (unsigned j = 0; j <= k; ++j) {
            BigInt w = pow(BigInt(pd.mantissa), k - j) * pow(two_e, j);
            if ((k - j) % 2 == 1) w = -w;
            const BigInt term = w * by_size[j];
            total += term;
            y.components.push_back(to_double(Rational(term, denom)) * scale);
        }
        y.value = to_double(Rational(total, denom)) * scale;
        out.push_back(std::move(y));
    }
    return out;
}

YStatistic y_statistic(const Hypergraph& graph, unsigned k, unsigned ell, double p, const YOptions& options) {
    if (k == 0) throw InvalidArgument("y_statistic: k must be at least 1");
    return y_statistics(graph, ell, p, k, options).back();
}

YCombined y_combined(const Hypergraph& graph, unsigned ell, double p, double c, unsigned K, const YOptions& options) {
    if (!(c > 0.0)) throw InvalidArgument("y_combined: c must be positive");
    YCombined out;
    out.K = K;
    out.c = c;
    const ATable table = compute_A_table(graph.r(), ell, std::max(K, 1U), options.aut_cap);
    out.tail_bound = series_tail(graph.r(), ell, K, c, options.aut_cap);
    if (K == 0) return out;
    out.terms = y_statistics(graph, ell, p, K, options);
    for (unsigned k = 1; k <= K; ++k) {
        const double t = std::sqrt(series_term(table, k, c));
        out.weights.push_back(t);
        out.value += t * out.terms[k - 1].value;
    }
    return out;
}

double y_direct(const Hypergraph& graph, unsigned k, unsigned ell, double p, unsigned aut_cap) {
    check_density(p);
    const unsigned n = graph.n();
    const unsigned r = graph.r();
    const PathCopy path = build_path(k, r, ell);
    const auto windows = path.edges();
    const unsigned v = path.v();
    if (v > n) throw InvalidArgument("y_direct: P_k has more vertices than n");
    const Dyadic pd = to_dyadic(p);
    const BigInt present = (BigInt(1) << pd.exponent) - pd.mantissa;  // (1 - p) 2^e
    const BigInt absent = -pd.mantissa;                               // (0 - p) 2^e

    // every injective map [0, v) -> [0, n), in lexicographic order
    BigInt total = 0;
    std::vector<Vertex> image(v);
    std::vector<char> used(n, 0);
    Vertex sorted[CompletionIndex::kMaxArity];
    auto rec = [&](auto&& self, unsigned pos) -> void {
        if (pos == v) {
            BigInt prod = 1;
            for (const auto& w : windows) {
                for (unsigned j = 0; j < r; ++j) sorted[j] = image[w[j]];
                std::sort(sorted, sorted + r);
                prod *= graph.contains_sorted(sorted) ? present : absent;
            }
            total += prod;
            return;
        }
        for (Vertex x = 0; x < n; ++x) {
            if (used[x]) continue;
            used[x] = 1;
            image[pos] = x;
            self(self, pos + 1);
            used[x] = 0;
        }
    };
    rec(rec, 0);

    const BigInt aut = aut_bruteforce(pattern_of(path), aut_cap);
    const BigInt n_copies = exact_divide(falling_factorial(n, v), aut, "y_direct: N_{P_k}");
    const Rational sum(total, (BigInt(1) << (pd.exponent * k)) * aut);
    return to_double(sum) / (std::sqrt(to_double(n_copies)) * std::pow(p * (1.0 - p), 0.5 * k));
}

double x_from_parts(const BigInt& Z, double log_expected_Z, double y_n) {
    if (Z == 0) return 0.0;
    return std::exp(log_big(Z) - log_expected_Z - y_n);
}

XStatistic x_statistic(const Hypergraph& graph, unsigned ell, double p, double c, unsigned K,
                       const YOptions& options) {
    XStatistic out;
    CountOptions co;
    co.parallel = options.parallel;
    co.aut_cap = options.aut_cap;
    out.Z = count_hamilton(graph, ell, co).count;
    const ExpectedZ ez = expected_Z(graph.n(), graph.r(), ell, p, options.aut_cap);
    out.expected_Z = ez.value;
    out.y = y_combined(graph, ell, p, c, K, options);
    out.value = x_from_parts(out.Z, ez.log_value, out.y.value);
    return out;
}

}  // namespace hamlaw
