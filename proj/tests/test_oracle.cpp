#include <doctest.h>

#include <cmath>

#include "hamlaw/counting.hpp"
#include "hamlaw/errors.hpp"
#include "hamlaw/oracle.hpp"
#include "hamlaw/sampling.hpp"
#include "hamlaw/theory.hpp"
#include "oracles.hpp"

using namespace hamlaw;

TEST_CASE("overlap distribution: mass, diagonal, no m-1 overlap for s = 1") {
    const auto d5 = overlap_distribution(5, 3, 2);
    CHECK(d5.n_cycles == 12);
    CHECK(d5.counts[5] == 12);
    CHECK(d5.total() == 144);
    for (unsigned n : {5u, 6u, 7u}) {
        const auto d = overlap_distribution(n, 3, 2);
        CHECK(d.total() == d.n_cycles * d.n_cycles);
        CHECK(d.counts[d.m] == d.n_cycles);
        CHECK(d.counts[d.m - 1] == 0);
    }
    CHECK(overlap_distribution(7, 3, 2).n_cycles == 360);
    // s = 2
    const auto d = overlap_distribution(8, 4, 2);
    CHECK(d.total() == d.n_cycles * d.n_cycles);
    CHECK(d.counts[d.m] == d.n_cycles);
}

TEST_CASE("overlap distribution matches an unordered recount over all vertex orders") {
    const auto cycles = oracle_ref::cycles_all_orders(Hypergraph::complete(6, 3), 2);
    std::vector<std::vector<Rank>> list(cycles.begin(), cycles.end());
    const auto d = overlap_distribution(6, 3, 2, 5000, false);
    std::vector<unsigned long long> unordered(d.m + 1, 0);
    for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) {
            std::vector<Rank> common;
            std::set_intersection(list[i].begin(), list[i].end(), list[j].begin(), list[j].end(),
                                  std::back_inserter(common));
            ++unordered[common.size()];
        }
    }
    CHECK(d.n_cycles == list.size());
    for (unsigned t = 0; t < d.m; ++t) CHECK(d.counts[t] == 2 * unordered[t]);
    CHECK(d.counts[d.m] == list.size());
    CHECK(overlap_distribution(6, 3, 2, 5000, true).counts == d.counts);
}

TEST_CASE("overlap distribution cap") { CHECK_THROWS_AS(overlap_distribution(9, 3, 2, 1000), ResourceLimit); }

TEST_CASE("second-moment identity holds exactly") {
    for (unsigned n : {5u, 6u, 7u}) {
        const auto rep = second_moment_identity_check(n, 3, 2, 0.5);
        CHECK(rep.difference == 0);
        CHECK(rep.relative_difference <= 1e-12);
        CHECK(rep.ratio >= 1.0);
    }
    const auto one = second_moment_identity_check(7, 3, 2, 1.0);
    CHECK(one.second_direct == Rational(360 * 360));
    CHECK(one.ratio == doctest::Approx(1.0));
    CHECK(one.variance == 0);
    CHECK(second_moment_identity_check(8, 4, 2, 0.3).difference == 0);
}

TEST_CASE("second moment: Monte Carlo variance of Z against the exact value") {
    const double p = 0.45;
    const auto rep = second_moment_identity_check(7, 3, 2, p);
    const Params params = Params::make(7, 3, 2, p);
    std::vector<double> z(10000);
    CountOptions co;
    co.parallel = false;
    for (std::size_t i = 0; i < z.size(); ++i) {
        z[i] = to_double(count_hamilton(sample_gnp(params, Seed{91, i}), 2, co).count);
    }
    const double exact_var = to_double(rep.variance);
    const double se = bootstrap_se(z, [](std::span<const double> xs) { return variance(xs); }, 200, Seed{91, 0});
    CHECK(std::abs(variance(z) - exact_var) <= 5 * se);
    CHECK(std::abs(mean(z) - to_double(rep.first_moment)) <= 5 * std::sqrt(exact_var / z.size()));
}

TEST_CASE("planted mean: closed form equals the per-copy planted-edge expectation") {
    struct Case { unsigned n, r, ell, J; };
    for (const Case cs : {Case{6, 3, 2, 3}, Case{7, 3, 2, 3}, Case{8, 3, 2, 3}, Case{8, 4, 2, 2}}) {
        const Hypergraph complete = Hypergraph::complete(cs.n, cs.r);
        const auto cycles = oracle_ref::cycles_all_orders(complete, cs.ell);
        for (double p : {0.2, 0.5}) {
            for (unsigned j = 1; j <= cs.J; ++j) {
                const auto paths = oracle_ref::paths_all_sequences(complete, j, cs.ell);
                // E*[prod (x_e - p)] is (1-p)^j if F lies in the planted cycle and 0 otherwise
                double inside = 0;
                for (const auto& c : cycles) {
                    for (const auto& f : paths) inside += std::includes(c.begin(), c.end(), f.begin(), f.end());
                }
                inside /= static_cast<double>(cycles.size());
                const double direct = inside * std::pow(1 - p, j) / std::sqrt(static_cast<double>(paths.size())) /
                                      std::pow(p * (1 - p), j / 2.0);
                CHECK(planted_mean_exact(cs.n, cs.r, cs.ell, p, j) == doctest::Approx(direct).epsilon(1e-9));
                if (j < cs.n / (cs.r - cs.ell) - 1) {
                    CHECK(planted_mean_closed_form(cs.n, cs.r, cs.ell, p, j) == doctest::Approx(direct).epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("planted mean closed form at n = 60") {
    const double p = p_star(60, 3, 2, 1.0);
    const double expected = 60 * std::sqrt((1 - p) / (p * 34220.0));
    CHECK(planted_mean_closed_form(60, 3, 2, p, 1) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(planted_mean_exact(60, 3, 2, p, 1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("planted mean Monte Carlo within its band; closed form approaches mu_j") {
    const double p = p_star(15, 3, 2, 1.0);
    const auto rep = planted_mean_check(15, 3, 2, p, 2, 1500, Seed{5, 0});
    for (const auto& row : rep.rows) CHECK(row.within_band);
    double prev = 0;
    for (unsigned n : {30u, 60u}) {
        const double pn = p_star(n, 3, 2, 1.0);
        const auto r = planted_mean_check(n, 3, 2, pn, 1, 0, Seed{});
        const double gap = std::abs(r.rows[0].closed_form / r.rows[0].asymptotic - 1);
        if (prev > 0) CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("planted MGF identity at small n") {
    const unsigned n = 9;
    const double c = 1.2;
    const double p = p_star(n, 3, 2, c);
    const auto rep = planted_mgf_check(n, 3, 2, p, c, 3, 300, Seed{17, 0});
    CHECK(rep.bands_overlap);
    CHECK(rep.null_se > 0);
    CHECK(rep.reference == doctest::Approx(std::exp(-lognormal_params(3, 2, c, 3).sigma2 / 2)));
}

TEST_CASE("big overlap scan") {
    const auto rep = big_overlap_scan(10, 3, 2, 200, Seed{3, 0});
    CHECK(rep.frequency() <= 0.5);
    CHECK(rep.pairs_m_minus_one == 0);
    CHECK(rep.max_overlap < rep.m - 1);
    for (const auto& [trial, t] : rep.examples) {
        CHECK(t >= rep.window_low);
        CHECK(t + 1 <= rep.m);
        CHECK(trial < rep.trials);
    }
    const ExpectedZ ez = expected_Z(10, 3, 2, rep.p);
    CHECK(ez.value == doctest::Approx(std::log(10.0)).epsilon(1e-9));
}
