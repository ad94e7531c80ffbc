#include "hamlaw/combinadic.hpp"

#include <string>

#include "hamlaw/errors.hpp"

namespace hamlaw {

BinomialTable::BinomialTable() {
    for (unsigned n = 0; n <= kMaxVertices; ++n) {
        table_[n][0] = 1;
        for (unsigned k = 1; k <= n; ++k) table_[n][k] = table_[n - 1][k - 1] + (k < n ? table_[n - 1][k] : 0);
    }
}

const BinomialTable& BinomialTable::instance() {
    static const BinomialTable t;
    return t;
}

Rank rank_subset(std::span<const Vertex> subset, unsigned n, unsigned r) {
    if (n > kMaxVertices) throw InvalidArgument("rank_subset: n exceeds " + std::to_string(kMaxVertices));
    if (subset.size() != r) {
        throw InvalidArgument("rank_subset: expected " + std::to_string(r) + " vertices, got " +
                              std::to_string(subset.size()));
    }
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] >= n) throw InvalidArgument("rank_subset: vertex " + std::to_string(subset[i]) + " out of range");
        if (i > 0 && subset[i] <= subset[i - 1]) throw InvalidArgument("rank_subset: subset not strictly increasing");
    }
    return rank_sorted_unchecked(subset.data(), r);
}

std::vector<Vertex> unrank_subset(Rank rank, unsigned n, unsigned r) {
    if (n > kMaxVertices || r > n) throw InvalidArgument("unrank_subset: bad (n, r)");
    if (rank >= choose(n, r)) throw InvalidArgument("unrank_subset: rank out of range");
    std::vector<Vertex> out(r);
    unsigned v = n;
    for (unsigned i = r; i-- > 0;) {
        // largest v with C(v, i+1) <= rank
        do {
            --v;
        } while (choose(v, i + 1) > rank);
        out[i] = v;
        rank -= choose(v, i + 1);
    }
    return out;
}

}  // namespace hamlaw
