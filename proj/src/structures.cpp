#include "hamlaw/structures.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>
#include <unordered_set>

#include "hamlaw/errors.hpp"

namespace hamlaw {

namespace {

std::vector<Vertex> sorted_window(std::span<const Vertex> seq, std::size_t start, unsigned r) {
    std::vector<Vertex> w(r);
    for (unsigned j = 0; j < r; ++j) w[j] = seq[(start + j) % seq.size()];
    std::sort(w.begin(), w.end());
    return w;
}

void check_window(const std::vector<Vertex>& w) {
    if (std::adjacent_find(w.begin(), w.end()) != w.end()) {
        throw InvalidArgument("window repeats a vertex (n too small for this r)");
    }
}

}  // namespace

std::vector<std::vector<Vertex>> cycle_windows(std::span<const Vertex> sequence, unsigned r, unsigned s) {
    if (s == 0 || sequence.size() % s != 0) throw InvalidArgument("cycle_windows: s must divide the cycle length");
    std::vector<std::vector<Vertex>> out;
    for (std::size_t start = 0; start < sequence.size(); start += s) out.push_back(sorted_window(sequence, start, r));
    return out;
}

std::vector<std::vector<Vertex>> path_windows(std::span<const Vertex> sequence, unsigned r, unsigned s) {
    std::vector<std::vector<Vertex>> out;
    for (std::size_t start = 0; start + r <= sequence.size(); start += s) out.push_back(sorted_window(sequence, start, r));
    return out;
}

std::vector<std::vector<Vertex>> CycleCopy::edges() const { return cycle_windows(sequence, r, r - ell); }

std::vector<std::vector<Vertex>> PathCopy::edges() const { return path_windows(sequence, r, r - ell); }

CycleCopy make_cycle_copy(std::vector<Vertex> sequence, unsigned r, unsigned ell) {
    const CycleGeometry g = derive_constants(r, ell);
    const auto n = static_cast<unsigned>(sequence.size());
    if (n % g.s != 0) throw InvalidArgument("make_cycle_copy: s must divide n");
    if (n <= r) throw InvalidArgument("make_cycle_copy: need n > r");
    std::vector<char> seen(n, 0);
    for (Vertex v : sequence) {
        if (v >= n || seen[v]) throw InvalidArgument("make_cycle_copy: sequence is not a permutation of [0, n)");
        seen[v] = 1;
    }
    CycleCopy c;
    c.r = r;
    c.ell = ell;
    for (const auto& w : cycle_windows(sequence, r, g.s)) {
        check_window(w);
        c.edge_ranks.push_back(rank_sorted_unchecked(w.data(), r));
    }
    std::sort(c.edge_ranks.begin(), c.edge_ranks.end());
    if (std::adjacent_find(c.edge_ranks.begin(), c.edge_ranks.end()) != c.edge_ranks.end()) {
        throw InvalidArgument("make_cycle_copy: windows are not distinct (n too small)");
    }
    c.sequence = std::move(sequence);
    return c;
}

PathCopy make_path_copy(std::vector<Vertex> sequence, unsigned r, unsigned ell, unsigned n_universe) {
    const CycleGeometry g = derive_constants(r, ell);
    const auto v = static_cast<unsigned>(sequence.size());
    if (v < r || (v - ell) % g.s != 0) throw InvalidArgument("make_path_copy: length must be ell + k*s with k >= 1");
    std::vector<Vertex> sorted(sequence);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= n_universe) {
        throw InvalidArgument("make_path_copy: vertices must be distinct and inside the universe");
    }
    PathCopy p;
    p.r = r;
    p.ell = ell;
    p.k = (v - ell) / g.s;
    p.n_universe = n_universe;
    for (const auto& w : path_windows(sequence, r, g.s)) p.edge_ranks.push_back(rank_sorted_unchecked(w.data(), r));
    std::sort(p.edge_ranks.begin(), p.edge_ranks.end());
    p.sequence = std::move(sequence);
    return p;
}

CycleCopy build_cycle(unsigned n, unsigned r, unsigned ell) {
    std::vector<Vertex> seq(n);
    std::iota(seq.begin(), seq.end(), 0);
    return make_cycle_copy(std::move(seq), r, ell);
}

PathCopy build_path(unsigned k, unsigned r, unsigned ell) {
    if (k == 0) throw InvalidArgument("build_path: k must be at least 1");
    const unsigned v = path_vertex_count(k, r, ell);
    std::vector<Vertex> seq(v);
    std::iota(seq.begin(), seq.end(), 0);
    return make_path_copy(std::move(seq), r, ell, v);
}

EdgePattern pattern_of(const CycleCopy& c) { return EdgePattern{c.n(), c.r, c.edges()}; }

EdgePattern pattern_of(const PathCopy& p) { return EdgePattern{p.v(), p.r, p.edges()}; }

// --- automorphisms ------------------------------------------------------------

namespace {

class AutSearch {
public:
    explicit AutSearch(const EdgePattern& pat) : v_(pat.v), deg_(pat.v, 0), codeg_(pat.v * pat.v, 0), closing_(pat.v) {
        for (const auto& e : pat.edges) {
            std::uint64_t mask = 0;
            for (Vertex x : e) {
                if (x >= v_) throw InvalidArgument("aut_bruteforce: edge vertex out of range");
                mask |= std::uint64_t{1} << x;
            }
            if (static_cast<unsigned>(std::popcount(mask)) != e.size()) {
                throw InvalidArgument("aut_bruteforce: edge repeats a vertex");
            }
            edge_masks_.insert(mask);
            for (Vertex x : e) {
                ++deg_[x];
                for (Vertex y : e) {
                    if (x != y) ++codeg_[x * v_ + y];
                }
            }
            // assignment order is 0..v-1, so an edge is fully mapped once its largest vertex is
            closing_[*std::max_element(e.begin(), e.end())].push_back(mask);
        }
    }

    unsigned v() const { return v_; }

    bool admissible(std::vector<Vertex>& image, unsigned pos, Vertex cand, std::uint64_t used) const {
        if ((used >> cand) & 1U) return false;
        if (deg_[pos] != deg_[cand]) return false;
        for (unsigned j = 0; j < pos; ++j) {
            if (codeg_[j * v_ + pos] != codeg_[image[j] * v_ + cand]) return false;
        }
        image[pos] = cand;
        for (std::uint64_t mask : closing_[pos]) {
            std::uint64_t img = 0;
            for (std::uint64_t m = mask; m; m &= m - 1) img |= std::uint64_t{1} << image[std::countr_zero(m)];
            if (!edge_masks_.count(img)) return false;
        }
        return true;
    }

    std::uint64_t count_from(std::vector<Vertex>& image, unsigned pos, std::uint64_t used) const {
        if (pos == v_) return 1;
        std::uint64_t total = 0;
        for (Vertex cand = 0; cand < v_; ++cand) {
            if (admissible(image, pos, cand, used)) total += count_from(image, pos + 1, used | (std::uint64_t{1} << cand));
        }
        return total;
    }

private:
    unsigned v_;
    std::vector<unsigned> deg_;
    std::vector<unsigned> codeg_;
    std::vector<std::vector<std::uint64_t>> closing_;
    std::unordered_set<std::uint64_t> edge_masks_;
};

void check_cap(const EdgePattern& pattern, unsigned cap) {
    if (pattern.v > cap || pattern.v > kMaxVertices) {
        throw ResourceLimit("aut_bruteforce: " + std::to_string(pattern.v) + " vertices exceeds cap " +
                            std::to_string(cap));
    }
}

}  // namespace

BigInt aut_bruteforce_serial(const EdgePattern& pattern, unsigned cap) {
    check_cap(pattern, cap);
    if (pattern.v == 0) return 1;
    const AutSearch search(pattern);
    std::vector<Vertex> image(pattern.v);
    return BigInt(search.count_from(image, 0, 0));
}

BigInt aut_bruteforce(const EdgePattern& pattern, unsigned cap) {
    check_cap(pattern, cap);
    if (pattern.v == 0) return 1;
    const AutSearch search(pattern);
    const int v = static_cast<int>(pattern.v);
    std::vector<std::uint64_t> per_first(pattern.v, 0);
#pragma omp parallel for schedule(dynamic)
    for (int first = 0; first < v; ++first) {
        std::vector<Vertex> image(search.v());
        if (search.admissible(image, 0, static_cast<Vertex>(first), 0)) {
            per_first[first] = search.count_from(image, 1, std::uint64_t{1} << first);
        }
    }
    BigInt total = 0;
    for (auto c : per_first) total += c;
    return total;
}

// --- memoized structural constants --------------------------------------------

namespace {

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

template <class Key, class Value, class Fn>
Value memoize(std::map<Key, Value>& cache, const Key& key, Fn compute) {
    {
        std::lock_guard lock(cache_mutex());
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    Value value = compute();
    std::lock_guard lock(cache_mutex());
    return cache.emplace(key, std::move(value)).first->second;
}

BigInt aut_cycle_bruteforce_cached(unsigned n, unsigned r, unsigned ell, unsigned cap) {
    static std::map<std::tuple<unsigned, unsigned, unsigned, unsigned>, BigInt> cache;
    return memoize(cache, std::make_tuple(n, r, ell, cap),
                   [&] { return aut_bruteforce(pattern_of(build_cycle(n, r, ell)), cap); });
}

bool cycle_is_valid(unsigned n, unsigned r, unsigned ell) {
    try {
        (void)build_cycle(n, r, ell);
        return true;
    } catch (const InvalidArgument&) {
        return false;
    }
}

}  // namespace

BigInt aut_cycle_closed_form(unsigned n, unsigned r, unsigned ell) {
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0) throw InvalidArgument("aut_cycle: s must divide n");
    const unsigned m = n / g.s;
    return BigInt(2) * m * boost::multiprecision::pow(BigInt(g.lambda), m);
}

ClosedFormValidation validate_cycle_closed_form(unsigned r, unsigned ell, unsigned cap) {
    static std::map<std::tuple<unsigned, unsigned, unsigned>, ClosedFormValidation> cache;
    return memoize(cache, std::make_tuple(r, ell, cap), [&] {
        const CycleGeometry g = derive_constants(r, ell);
        ClosedFormValidation out;
        std::vector<bool> match;
        for (unsigned n = g.s; n <= cap; n += g.s) {
            if (n <= r || !cycle_is_valid(n, r, ell)) continue;
            out.checked_n.push_back(n);
            const bool ok = aut_cycle_bruteforce_cached(n, r, ell, cap) == aut_cycle_closed_form(n, r, ell);
            match.push_back(ok);
            if (!ok) out.mismatched_n.push_back(n);
        }
        // longest all-matching suffix of the checked range
        std::size_t first = match.size();
        while (first > 0 && match[first - 1]) --first;
        const std::size_t suffix = match.size() - first;
        out.validated = suffix >= 2;
        out.first_valid_n = suffix > 0 ? out.checked_n[first] : 0;
        return out;
    });
}

BigInt aut_cycle(unsigned n, unsigned r, unsigned ell, unsigned cap) {
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0) throw InvalidArgument("aut_cycle: s must divide n");
    if (n <= cap) return aut_cycle_bruteforce_cached(n, r, ell, cap);
    const ClosedFormValidation val = validate_cycle_closed_form(r, ell, cap);
    if (!val.validated) {
        throw ResourceLimit("aut_cycle: n=" + std::to_string(n) + " is above the brute-force cap and the closed form "
                            "is not validated for this (r, ell)");
    }
    return aut_cycle_closed_form(n, r, ell);
}

BigInt count_copies_complete(unsigned v_h, const BigInt& aut_h, unsigned n) {
    return exact_divide(falling_factorial(n, v_h), aut_h, "count_copies_complete");
}

BigInt count_copies_complete(const CycleCopy& c, unsigned n, unsigned cap) {
    if (c.n() > n) return 0;
    return count_copies_complete(c.n(), aut_cycle(c.n(), c.r, c.ell, cap), n);
}

BigInt count_copies_complete(const PathCopy& p, unsigned n, unsigned cap) {
    if (p.v() > n) return 0;
    return count_copies_complete(p.v(), aut_path(p.k, p.r, p.ell, cap), n);
}

BigInt cycle_copy_count(unsigned n, unsigned r, unsigned ell, unsigned cap) {
    return exact_divide(factorial(n), aut_cycle(n, r, ell, cap), "cycle_copy_count");
}

namespace {

// A_k for every k with v(P_k) <= cap.
ATable bruteforce_A_table(unsigned r, unsigned ell, unsigned cap) {
    static std::map<std::tuple<unsigned, unsigned, unsigned>, ATable> cache;
    return memoize(cache, std::make_tuple(r, ell, cap), [&] {
        ATable t;
        t.r = r;
        t.ell = ell;
        t.geometry = derive_constants(r, ell);
        if (r > cap) throw ResourceLimit("compute_A_table: a single edge already exceeds the brute-force cap");
        BigInt lambda_pow = 1;
        for (unsigned k = 1; path_vertex_count(k, r, ell) <= cap; ++k) {
            lambda_pow *= t.geometry.lambda;
            BigInt aut = aut_bruteforce(pattern_of(build_path(k, r, ell)), cap);
            t.A.emplace_back(aut, lambda_pow);
            t.aut_path.push_back(std::move(aut));
        }
        t.k_bruteforce = static_cast<unsigned>(t.A.size());
        unsigned k_stab = t.k_bruteforce;
        while (k_stab > 1 && t.A[k_stab - 2] == t.A.back()) --k_stab;
        t.k_stab = k_stab;
        t.stabilization_observed = t.k_bruteforce - k_stab + 1 >= 3;
        if (!t.A.empty()) t.stable = t.A.back();
        return t;
    });
}

}  // namespace

ATable compute_A_table(unsigned r, unsigned ell, unsigned K, unsigned cap) {
    if (K == 0) throw InvalidArgument("compute_A_table: K must be at least 1");
    ATable t = bruteforce_A_table(r, ell, cap);
    if (K <= t.k_bruteforce) {
        t.A.resize(K);
        t.aut_path.resize(K);
        return t;
    }
    if (!t.stabilization_observed) {
        throw ResourceLimit("compute_A_table: A_k not observed to stabilize within the brute-force cap");
    }
    const Rational stable = t.stable_value();
    BigInt lambda_pow = boost::multiprecision::pow(BigInt(t.geometry.lambda), t.k_bruteforce);
    for (unsigned k = t.k_bruteforce + 1; k <= K; ++k) {
        lambda_pow *= t.geometry.lambda;
        const Rational aut = stable * lambda_pow;
        if (boost::multiprecision::denominator(aut) != 1) {
            throw InternalConsistency("compute_A_table: extrapolated Aut(P_k) is not an integer");
        }
        t.aut_path.push_back(boost::multiprecision::numerator(aut));
        t.A.push_back(stable);
    }
    t.extrapolated = true;
    return t;
}

BigInt aut_path(unsigned k, unsigned r, unsigned ell, unsigned cap) {
    if (k == 0) throw InvalidArgument("aut_path: k must be at least 1");
    return compute_A_table(r, ell, k, cap).aut_path.at(k - 1);
}

StructureConstants structure_constants(std::optional<unsigned> n, unsigned r, unsigned ell, unsigned K, unsigned cap) {
    StructureConstants out;
    out.geometry = derive_constants(r, ell);
    out.table = compute_A_table(r, ell, K, cap);
    out.n = n;
    if (n) {
        out.aut_cycle = aut_cycle(*n, r, ell, cap);
        out.aut_cycle_from_closed_form = *n > cap;
        out.n_cycles = exact_divide(factorial(*n), out.aut_cycle, "structure_constants");
    }
    return out;
}

}  // namespace hamlaw
