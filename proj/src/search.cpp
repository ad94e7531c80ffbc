#include "hamlaw/search.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "hamlaw/errors.hpp"
#include "hamlaw/params.hpp"

namespace hamlaw {

CompletionIndex::CompletionIndex(const Hypergraph& graph) : n_(graph.n()), r_(graph.r()) {
    if (r_ < 2 || r_ > kMaxArity) throw InvalidArgument("CompletionIndex: unsupported arity");
    all_ = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    const std::uint64_t keys = choose(n_, r_ - 1);
    dense_ = keys <= (std::uint64_t{1} << 24);
    if (dense_) table_.assign(keys, 0);
    Vertex others[kMaxArity];
    for (std::size_t i = 0; i < graph.edge_count(); ++i) {
        const auto e = graph.edge_vertices(i);
        for (unsigned drop = 0; drop < r_; ++drop) {
            unsigned k = 0;
            for (unsigned j = 0; j < r_; ++j) {
                if (j != drop) others[k++] = e[j];
            }
            const Rank key = rank_sorted_unchecked(others, r_ - 1);
            const std::uint64_t bit = std::uint64_t{1} << e[drop];
            if (dense_) {
                table_[key] |= bit;
            } else {
                sparse_[key] |= bit;
            }
        }
    }
}

SearchPlan make_plan(unsigned length, unsigned r, const std::vector<std::vector<unsigned>>& windows) {
    if (length > kMaxVertices) throw InvalidArgument("make_plan: too many positions");
    SearchPlan plan;
    plan.r = r;
    plan.steps.resize(length);
    for (const auto& w : windows) {
        if (w.size() != r) throw InvalidArgument("make_plan: window of wrong size");
        std::vector<unsigned> sorted(w);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= length) {
            throw InvalidArgument("make_plan: window positions must be distinct and in range");
        }
        const unsigned last = sorted.back();
        sorted.pop_back();
        plan.steps[last].windows.push_back(std::move(sorted));
    }
    return plan;
}

CyclePlan make_cycle_plan(unsigned n, unsigned r, unsigned ell, bool break_symmetry) {
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0) throw InvalidArgument("make_cycle_plan: s must divide n");
    if (n <= r) throw InvalidArgument("make_cycle_plan: need n > r");
    const unsigned m = n / g.s;
    std::vector<std::vector<unsigned>> windows(m);
    std::vector<std::vector<unsigned>> covering(n);
    for (unsigned i = 0; i < m; ++i) {
        for (unsigned j = 0; j < r; ++j) {
            const unsigned pos = (i * g.s + j) % n;
            windows[i].push_back(pos);
            covering[pos].push_back(i);
        }
    }
    CyclePlan out;
    out.plan = make_plan(n, r, windows);
    out.symmetry_broken = break_symmetry;
    if (!break_symmetry) return out;

    out.plan.steps[g.s - 1].force_anchor = true;
    for (auto& c : covering) std::sort(c.begin(), c.end());
    for (unsigned block = 0; block < m; ++block) {
        std::map<std::vector<unsigned>, std::vector<unsigned>> groups;
        for (unsigned j = 0; j < g.s; ++j) groups[covering[block * g.s + j]].push_back(block * g.s + j);
        for (const auto& [key, positions] : groups) {
            for (std::size_t i = 1; i < positions.size(); ++i) {
                out.plan.steps[positions[i]].twin_prev = static_cast<int>(positions[i - 1]);
                out.twin_factor *= i + 1;
            }
        }
    }
    return out;
}

SearchPlan make_path_plan(unsigned k, unsigned r, unsigned ell) {
    const CycleGeometry g = derive_constants(r, ell);
    if (k == 0) throw InvalidArgument("make_path_plan: k must be at least 1");
    const unsigned length = ell + k * g.s;
    std::vector<std::vector<unsigned>> windows(k);
    for (unsigned i = 0; i < k; ++i) {
        for (unsigned j = 0; j < r; ++j) windows[i].push_back(i * g.s + j);
    }
    return make_plan(length, r, windows);
}

namespace {

class Searcher {
public:
    Searcher(const SearchPlan& plan, const CompletionIndex& index, std::uint64_t node_cap)
        : plan_(plan), index_(index), length_(plan.length()), node_cap_(node_cap) {}

    std::uint64_t candidates(unsigned p, std::uint64_t used) const {
        const auto& step = plan_.steps[p];
        std::uint64_t c = index_.all() & ~used;
        Vertex others[CompletionIndex::kMaxArity];
        for (const auto& w : step.windows) {
            for (std::size_t i = 0; i < w.size(); ++i) others[i] = seq_[w[i]];
            c &= index_.completions(others);
            if (!c) return 0;
        }
        if (step.twin_prev >= 0) c &= ~((std::uint64_t{2} << seq_[step.twin_prev]) - 1);
        if (step.force_anchor && !(used & 1U)) c &= 1U;
        if (step.exclude_anchor) c &= ~std::uint64_t{1};
        return c;
    }

    std::uint64_t count(unsigned p, std::uint64_t used) {
        if (p == length_) return 1;
        std::uint64_t c = candidates(p, used);
        if (p + 1 == length_) return static_cast<std::uint64_t>(std::popcount(c));
        if (++nodes_ > node_cap_) throw ResourceLimit("search exceeded its node cap");
        std::uint64_t total = 0;
        while (c) {
            const unsigned v = static_cast<unsigned>(std::countr_zero(c));
            c &= c - 1;
            seq_[p] = v;
            total += count(p + 1, used | (std::uint64_t{1} << v));
        }
        return total;
    }

    bool visit(unsigned p, std::uint64_t used, const std::function<bool(std::span<const Vertex>)>& fn) {
        if (p == length_) return fn(std::span<const Vertex>(seq_, length_));
        std::uint64_t c = candidates(p, used);
        while (c) {
            const unsigned v = static_cast<unsigned>(std::countr_zero(c));
            c &= c - 1;
            seq_[p] = v;
            if (!visit(p + 1, used | (std::uint64_t{1} << v), fn)) return false;
        }
        return true;
    }

    Vertex* seq() { return seq_; }
    std::uint64_t nodes() const { return nodes_; }
    void set_cap(std::uint64_t cap) { node_cap_ = cap; }

private:
    const SearchPlan& plan_;
    const CompletionIndex& index_;
    unsigned length_;
    std::uint64_t node_cap_;
    std::uint64_t nodes_ = 0;
    Vertex seq_[kMaxVertices] = {};
};

struct FrontierItem {
    unsigned depth = 0;
    std::uint64_t used = 0;
    std::vector<Vertex> prefix;
};

}  // namespace

SearchStats count_assignments_serial(const SearchPlan& plan, const CompletionIndex& index, std::uint64_t node_cap) {
    Searcher s(plan, index, node_cap);
    SearchStats out;
    out.count = s.count(0, 0);
    out.nodes = s.nodes();
    return out;
}

SearchStats count_assignments_parallel(const SearchPlan& plan, const CompletionIndex& index, std::uint64_t node_cap) {
    const unsigned length = plan.length();
    if (length <= 2) return count_assignments_serial(plan, index, node_cap);

    // Breadth-first expansion to a frontier wide enough to balance threads.
    constexpr std::size_t kTarget = 512;
    std::vector<FrontierItem> frontier{FrontierItem{}};
    std::uint64_t expansion_nodes = 0;
    Searcher expander(plan, index, node_cap);
    while (frontier.size() < kTarget && frontier.front().depth + 1 < length) {
        std::vector<FrontierItem> next;
        for (const auto& item : frontier) {
            std::copy(item.prefix.begin(), item.prefix.end(), expander.seq());
            std::uint64_t c = expander.candidates(item.depth, item.used);
            ++expansion_nodes;
            while (c) {
                const unsigned v = static_cast<unsigned>(std::countr_zero(c));
                c &= c - 1;
                FrontierItem child{item.depth + 1, item.used | (std::uint64_t{1} << v), item.prefix};
                child.prefix.push_back(v);
                next.push_back(std::move(child));
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) return SearchStats{0, expansion_nodes};
    }

    std::vector<std::uint64_t> counts(frontier.size(), 0);
    std::vector<std::uint64_t> nodes(frontier.size(), 0);
    std::atomic<bool> failed{false};
    const auto items = static_cast<long>(frontier.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < items; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            Searcher s(plan, index, node_cap);
            std::copy(frontier[i].prefix.begin(), frontier[i].prefix.end(), s.seq());
            counts[i] = s.count(frontier[i].depth, frontier[i].used);
            nodes[i] = s.nodes();
        } catch (const ResourceLimit&) {
            failed = true;
        }
    }
    if (failed) throw ResourceLimit("search exceeded its node cap");
    SearchStats out;
    out.nodes = expansion_nodes;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        out.count += counts[i];
        out.nodes += nodes[i];
    }
    if (out.nodes > node_cap) throw ResourceLimit("search exceeded its node cap");
    return out;
}

void for_each_assignment(const SearchPlan& plan, const CompletionIndex& index,
                         const std::function<bool(std::span<const Vertex>)>& visit) {
    Searcher s(plan, index, ~std::uint64_t{0});
    s.visit(0, 0, visit);
}

}  // namespace hamlaw
