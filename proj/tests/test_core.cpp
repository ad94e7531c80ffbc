#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "hamlaw/combinadic.hpp"
#include "hamlaw/errors.hpp"
#include "hamlaw/hypergraph.hpp"
#include "hamlaw/params.hpp"
#include "hamlaw/rng.hpp"

using namespace hamlaw;

namespace {

// all r-subsets of [0, n) in colex order, generated independently of the ranking code
std::vector<std::vector<Vertex>> colex_subsets(unsigned n, unsigned r) {
    std::vector<std::vector<Vertex>> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        if (static_cast<unsigned>(__builtin_popcountll(mask)) != r) continue;
        std::vector<Vertex> s;
        for (unsigned v = 0; v < n; ++v) {
            if ((mask >> v) & 1U) s.push_back(v);
        }
        out.push_back(s);
    }
    // colex: compare from the largest element down
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return out;
}

}  // namespace

TEST_CASE("rank_subset endpoints") {
    CHECK(rank_subset(std::vector<Vertex>{0, 1, 2}, 5, 3) == 0);
    CHECK(rank_subset(std::vector<Vertex>{2, 3, 4}, 5, 3) == 9);
}

TEST_CASE("rank and unrank are inverse and follow colex order") {
    for (unsigned n = 1; n <= 12; ++n) {
        for (unsigned r = 1; r <= std::min(n, 5U); ++r) {
            const auto subsets = colex_subsets(n, r);
            REQUIRE(subsets.size() == choose(n, r));
            for (std::size_t i = 0; i < subsets.size(); ++i) {
                CHECK(rank_subset(subsets[i], n, r) == i);
                CHECK(unrank_subset(i, n, r) == subsets[i]);
            }
        }
    }
}

TEST_CASE("rank_subset rejects bad input") {
    CHECK_THROWS_AS(rank_subset(std::vector<Vertex>{0, 1, 5}, 5, 3), InvalidArgument);
    CHECK_THROWS_AS(rank_subset(std::vector<Vertex>{0, 1}, 5, 3), InvalidArgument);
    CHECK_THROWS_AS(rank_subset(std::vector<Vertex>{2, 1, 3}, 5, 3), InvalidArgument);
}

TEST_CASE("derive_constants hand values") {
    auto g = derive_constants(3, 2);
    CHECK(g.s == 1);
    CHECK(g.t == 1);
    CHECK(g.lambda == 1);
    g = derive_constants(4, 2);
    CHECK(g.s == 2);
    CHECK(g.t == 2);
    CHECK(g.lambda == 2);
    g = derive_constants(5, 2);
    CHECK(g.s == 3);
    CHECK(g.t == 2);
    CHECK(g.lambda == 2);
    g = derive_constants(7, 3);
    CHECK(g.s == 4);
    CHECK(g.t == 3);
    CHECK(g.lambda == 6);
    CHECK_THROWS_AS(derive_constants(3, 3), InvalidArgument);
    CHECK_THROWS_AS(derive_constants(3, 1), InvalidArgument);
}

TEST_CASE("Params validation") {
    const Params p = Params::make(12, 4, 2, 0.25);
    CHECK(p.m_edges == 6);
    CHECK_THROWS_AS(Params::make(7, 4, 2, 0.1), InvalidArgument);
    CHECK_THROWS_AS(Params::make(12, 4, 2, 1.5), InvalidArgument);
    const Params q = Params::from_c(60, 3, 2, 1.0);
    CHECK(q.p == doctest::Approx(std::exp(1.0) / 60).epsilon(1e-14));
}

TEST_CASE("hypergraph membership and serialization") {
    const Hypergraph g = Hypergraph::from_edges(6, 3, {{0, 1, 2}, {3, 4, 5}, {1, 2, 3}});
    CHECK(g.edge_count() == 3);
    CHECK(g.contains(rank_subset(std::vector<Vertex>{1, 2, 3}, 6, 3)));
    CHECK_FALSE(g.contains(rank_subset(std::vector<Vertex>{0, 2, 3}, 6, 3)));
    std::istringstream text(to_text(g));
    CHECK(read_text(text) == g);
    std::ostringstream bin;
    write_binary(bin, g);
    std::istringstream in(bin.str());
    CHECK(read_binary(in) == g);
    CHECK_THROWS_AS(Hypergraph::from_edges(6, 3, {{0, 1, 6}}), InvalidArgument);
}

TEST_CASE("relabel") {
    const Hypergraph g = Hypergraph::from_edges(5, 3, {{0, 1, 2}, {1, 3, 4}});
    std::vector<Vertex> id(5);
    std::iota(id.begin(), id.end(), 0);
    CHECK(relabel(g, id) == g);
    const std::vector<Vertex> inv{1, 0, 3, 2, 4};
    CHECK(relabel(relabel(g, inv), inv) == g);
    CHECK(relabel(g, inv).edge_count() == g.edge_count());
    CHECK_THROWS_AS(relabel(g, std::vector<Vertex>{0, 0, 1, 2, 3}), InvalidArgument);
}

TEST_CASE("counter rng is a pure function of its key") {
    CounterRng a(Seed{42, 7}, Domain::Auxiliary);
    CounterRng b(Seed{42, 7}, Domain::Auxiliary);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    CounterRng c(Seed{42, 8}, Domain::Auxiliary);
    CHECK(CounterRng(Seed{42, 7}, Domain::Auxiliary).next() != c.next());
    CHECK(bernoulli_threshold(0.0) == 0);
    CHECK(bernoulli_threshold(1.0) == (std::uint64_t{1} << 53));
}
