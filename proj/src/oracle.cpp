#include "hamlaw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "hamlaw/counting.hpp"
#include "hamlaw/errors.hpp"
#include "hamlaw/parallel.hpp"
#include "hamlaw/sampling.hpp"
#include "hamlaw/theory.hpp"
#include "hamlaw/ystat.hpp"

namespace hamlaw {

BigInt OverlapDistribution::total() const {
    BigInt t = 0;
    for (const BigInt& c : counts) t += c;
    return t;
}

namespace {

std::vector<CycleCopy> all_cycles(unsigned n, unsigned r, unsigned ell, std::uint64_t max_cycles) {
    const BigInt expected = cycle_copy_count(n, r, ell);
    if (expected > max_cycles) {
        throw ResourceLimit("overlap_distribution: N_C = " + to_decimal(expected) + " exceeds the cap " +
                            std::to_string(max_cycles));
    }
    auto cycles = enumerate_hamilton(Hypergraph::complete(n, r), ell, static_cast<std::size_t>(max_cycles));
    if (BigInt(cycles.size()) != expected) {
        throw InternalConsistency("overlap_distribution: enumeration disagrees with n!/Aut(C)");
    }
    return cycles;
}

// rows[i][x]: pairs (i, j) with statistic x; summed in index order afterwards.
template <class Stat>
std::vector<std::uint64_t> pair_histogram(const std::vector<CycleCopy>& cycles, std::size_t bins, bool parallel,
                                          Stat stat) {
    const long n_c = static_cast<long>(cycles.size());
    std::vector<std::vector<std::uint64_t>> rows(cycles.size(), std::vector<std::uint64_t>(bins, 0));
    parallel_for_trials(n_c, parallel ? 0 : 1, [&](long i) {
        for (long j = 0; j < n_c; ++j) ++rows[i][stat(cycles[i].edge_ranks, cycles[j].edge_ranks)];
    });
    std::vector<std::uint64_t> out(bins, 0);
    for (const auto& row : rows) {
        for (std::size_t x = 0; x < bins; ++x) out[x] += row[x];
    }
    return out;
}

unsigned union_size(const std::vector<Rank>& a, const std::vector<Rank>& b) {
    std::vector<Rank> u;
    u.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
    return static_cast<unsigned>(u.size());
}

double log_n_paths(unsigned n, unsigned r, unsigned ell, unsigned j) {
    const unsigned v = path_vertex_count(j, r, ell);
    return log_big(count_copies_complete(v, aut_path(j, r, ell), n));
}

double mean_of(std::span<const double> xs) { return mean(xs); }

}  // namespace

OverlapDistribution overlap_distribution(unsigned n, unsigned r, unsigned ell, std::uint64_t max_cycles,
                                         bool parallel) {
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0 || n <= r) throw InvalidArgument("overlap_distribution: need s | n and n > r");
    OverlapDistribution out;
    out.n = n;
    out.r = r;
    out.ell = ell;
    out.m = n / g.s;
    const auto cycles = all_cycles(n, r, ell, max_cycles);
    out.n_cycles = BigInt(cycles.size());
    const auto hist = pair_histogram(cycles, out.m + 1, parallel, shared_edges);
    out.counts.assign(hist.begin(), hist.end());
    return out;
}

SecondMomentReport second_moment_identity_check(unsigned n, unsigned r, unsigned ell, double p,
                                                std::uint64_t max_cycles) {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("second_moment_identity_check: p must lie in (0, 1]");
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0 || n <= r) throw InvalidArgument("second_moment_identity_check: need s | n and n > r");
    const unsigned m = n / g.s;
    const auto cycles = all_cycles(n, r, ell, max_cycles);
    const Rational P = exact_rational(p);
    const BigInt n_c(cycles.size());

    SecondMomentReport out;
    out.first_moment = Rational(n_c) * power(P, m);

    // (a): every ordered pair contributes p^|E1 u E2|
    const auto by_union = pair_histogram(cycles, 2 * m + 1, true, union_size);
    Rational a = 0;
    for (unsigned u = 0; u <= 2 * m; ++u) {
        if (by_union[u]) a += Rational(BigInt(by_union[u])) * power(P, u);
    }
    out.second_direct = a;

    // (b): E[Z]^2 sum_t P(t) / p^t, from the overlap law
    const auto by_overlap = pair_histogram(cycles, m + 1, true, shared_edges);
    Rational sum = 0;
    const Rational pairs = Rational(n_c * n_c);
    for (unsigned t = 0; t <= m; ++t) {
        if (by_overlap[t]) sum += Rational(BigInt(by_overlap[t])) / pairs / power(P, t);
    }
    out.second_from_overlap = out.first_moment * out.first_moment * sum;

    out.difference = out.second_direct - out.second_from_overlap;
    out.relative_difference = std::abs(to_double(out.difference / out.second_direct));
    out.variance = out.second_direct - out.first_moment * out.first_moment;
    out.ratio = to_double(out.second_direct / (out.first_moment * out.first_moment));
    return out;
}

double planted_mean_closed_form(unsigned n, unsigned r, unsigned ell, double p, unsigned j) {
    const unsigned m = n / derive_constants(r, ell).s;
    const double log_val = j * (std::log1p(-p) - std::log(p)) - log_n_paths(n, r, ell, j);
    return m * std::exp(0.5 * log_val);
}

double planted_mean_exact(unsigned n, unsigned r, unsigned ell, double p, unsigned j) {
    // Only copies made entirely of planted edges have nonzero mean: each of their edges gives (1 - p).
    const CycleCopy c = build_cycle(n, r, ell);
    const BigInt inside = count_paths(Hypergraph(n, r, c.edge_ranks), j, ell, false);
    if (inside == 0) return 0.0;
    const double log_val = j * (std::log1p(-p) - std::log(p)) - log_n_paths(n, r, ell, j);
    return to_double(inside) * std::exp(0.5 * log_val);
}

PlantedMeanReport planted_mean_check(unsigned n, unsigned r, unsigned ell, double p, unsigned J, unsigned trials,
                                     const Seed& seed, int workers) {
    const Params params = Params::make(n, r, ell, p);
    PlantedMeanReport out;
    out.n = n;
    out.r = r;
    out.ell = ell;
    out.p = p;
    out.c = c_from_p(n, r, ell, p);
    out.trials = trials;
    out.seed = seed;
    const ATable table = compute_A_table(r, ell, J);

    std::vector<std::vector<double>> samples(J, std::vector<double>(trials));
    YOptions yo;
    yo.parallel = false;
    parallel_for_trials(trials, workers, [&](long i) {
        const PlantedInstance inst = plant_cycle(params, Seed{seed.root, seed.stream + static_cast<std::uint64_t>(i)});
        const auto ys = y_statistics(inst.graph, ell, p, J, yo);
        for (unsigned k = 0; k < J; ++k) samples[k][i] = ys[k].value;
    });

    for (unsigned j = 1; j <= J; ++j) {
        PlantedMeanRow row;
        row.j = j;
        row.closed_form = planted_mean_closed_form(n, r, ell, p, j);
        row.exact = planted_mean_exact(n, r, ell, p, j);
        row.asymptotic = std::sqrt(series_term(table, j, out.c));
        if (trials > 0) {
            row.mc_mean = mean(samples[j - 1]);
            row.mc_se = trials > 1 ? std::sqrt(variance(samples[j - 1]) / trials) : 0.0;
            row.within_band = std::abs(row.mc_mean - row.exact) <= 4.0 * row.mc_se;
        }
        out.rows.push_back(row);
    }
    return out;
}

MgfReport planted_mgf_check(unsigned n, unsigned r, unsigned ell, double p, double c, unsigned K, unsigned trials,
                            const Seed& seed, int workers) {
    const Params params = Params::make(n, r, ell, p);
    MgfReport out;
    out.n = n;
    out.r = r;
    out.ell = ell;
    out.K = K;
    out.p = p;
    out.c = c;
    out.trials = trials;
    out.seed = seed;
    const LimitLawParams law = lognormal_params(r, ell, c, K);
    out.sigma2 = law.sigma2;
    out.reference = std::exp(-law.sigma2 / 2.0);
    if (trials == 0) return out;

    std::vector<double> null_x(trials), planted(trials);
    YOptions yo;
    yo.parallel = false;
    parallel_for_trials(2L * trials, workers, [&](long i) {
        const Seed trial_seed{seed.root, seed.stream + static_cast<std::uint64_t>(i)};
        if (i < static_cast<long>(trials)) {
            null_x[i] = x_statistic(sample_gnp(params, trial_seed), ell, p, c, K, yo).value;
        } else {
            const PlantedInstance inst = plant_cycle(params, trial_seed);
            planted[i - trials] = std::exp(-y_combined(inst.graph, ell, p, c, K, yo).value);
        }
    });

    constexpr unsigned kResamples = 1000;
    out.null_mean_x = mean(null_x);
    out.planted_mean = mean(planted);
    out.null_se = bootstrap_se(null_x, mean_of, kResamples, Seed{seed.root, seed.stream});
    out.planted_se = bootstrap_se(planted, mean_of, kResamples, Seed{seed.root, seed.stream + trials});
    out.bands_overlap = std::abs(out.null_mean_x - out.planted_mean) <= 4.0 * (out.null_se + out.planted_se);
    out.null_vs_reference = out.null_mean_x / out.reference - 1.0;
    out.planted_vs_reference = out.planted_mean / out.reference - 1.0;
    return out;
}

BigOverlapReport big_overlap_scan(unsigned n, unsigned r, unsigned ell, unsigned trials, const Seed& seed,
                                  int workers) {
    BigOverlapReport out;
    out.n = n;
    out.r = r;
    out.ell = ell;
    out.m = n / derive_constants(r, ell).s;
    out.log_n = std::log(static_cast<double>(n));
    out.window_low = static_cast<unsigned>(std::ceil(out.log_n));
    out.p = p_for_expectation(n, r, ell, out.log_n);
    out.trials = trials;
    out.seed = seed;
    const Params params = Params::make(n, r, ell, out.p);

    struct TrialScan {
        std::uint64_t in_window = 0;
        std::uint64_t m_minus_one = 0;
        unsigned max_overlap = 0;
        unsigned first_overlap = 0;  // some overlap in the window, for the examples list
    };
    std::vector<TrialScan> scans(trials);
    parallel_for_trials(trials, workers, [&](long i) {
        const Hypergraph graph = sample_gnp(params, Seed{seed.root, seed.stream + static_cast<std::uint64_t>(i)});
        const auto cycles = enumerate_hamilton(graph, ell);
        TrialScan& sc = scans[i];
        for (std::size_t a = 0; a < cycles.size(); ++a) {
            for (std::size_t b = 0; b < cycles.size(); ++b) {
                if (a == b) continue;
                const unsigned t = shared_edges(cycles[a].edge_ranks, cycles[b].edge_ranks);
                sc.max_overlap = std::max(sc.max_overlap, t);
                if (t + 1 == out.m) ++sc.m_minus_one;
                if (t >= out.window_low && t + 1 <= out.m) {
                    ++sc.in_window;
                    if (!sc.first_overlap) sc.first_overlap = t;
                }
            }
        }
    });
    constexpr std::size_t kExamples = 10;
    for (unsigned i = 0; i < trials; ++i) {
        const TrialScan& sc = scans[i];
        out.pairs_in_window += sc.in_window;
        out.pairs_m_minus_one += sc.m_minus_one;
        out.max_overlap = std::max(out.max_overlap, sc.max_overlap);
        if (sc.in_window) {
            ++out.trials_with_pair;
            if (out.examples.size() < kExamples) out.examples.emplace_back(i, sc.first_overlap);
        }
    }
    return out;
}

}  // namespace hamlaw
