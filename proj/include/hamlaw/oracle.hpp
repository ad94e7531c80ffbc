#pragma once

#include <cstdint>
#include <vector>

#include "hamlaw/bigint.hpp"
#include "hamlaw/rng.hpp"
#include "hamlaw/structures.hpp"

namespace hamlaw {

/// Ordered pairs (C1, C2) of Hamilton ell-cycle copies of the complete graph by shared edges.
struct OverlapDistribution {
    unsigned n = 0, r = 0, ell = 0, m = 0;
    BigInt n_cycles;
    std::vector<BigInt> counts;  // index t = |E(C1) & E(C2)|, t in [0, m]

    BigInt total() const;
};

/// Enumerates every copy once and intersects edge-rank lists pairwise.
/// ResourceLimit when N_C exceeds `max_cycles`.
OverlapDistribution overlap_distribution(unsigned n, unsigned r, unsigned ell, std::uint64_t max_cycles = 5000,
                                         bool parallel = true);

struct SecondMomentReport {
    Rational first_moment;         // E[Z] = N_C p^m
    Rational second_direct;        // sum over ordered pairs of p^|E(C1) | E(C2)|
    Rational second_from_overlap;  // E[Z]^2 sum_t P(t) / p^t
    Rational difference;           // second_direct - second_from_overlap, exactly
    double relative_difference = 0.0;
    Rational variance;             // E[Z^2] - E[Z]^2
    double ratio = 0.0;            // E[Z^2] / E[Z]^2
};

/// The second-moment identity, both sides in exact rationals (p read as its exact binary value).
SecondMomentReport second_moment_identity_check(unsigned n, unsigned r, unsigned ell, double p,
                                                std::uint64_t max_cycles = 5000);

struct PlantedMeanRow {
    unsigned j = 0;
    double closed_form = 0.0;  // m sqrt((1-p)^j / (p^j N_{P_j}))
    double exact = 0.0;        // (#P_j copies inside the cycle) ((1-p)/p)^(j/2) / sqrt(N_{P_j})
    double asymptotic = 0.0;   // mu_j = sqrt(A_j c^-j e^-js) / s with c = p / p*
    double mc_mean = 0.0;
    double mc_se = 0.0;        // standard error of mc_mean
    bool within_band = false;  // |mc_mean - exact| <= 4 mc_se
};

struct PlantedMeanReport {
    unsigned n = 0, r = 0, ell = 0;
    double p = 0.0;
    double c = 0.0;
    unsigned trials = 0;
    Seed seed;
    std::vector<PlantedMeanRow> rows;  // j = 1..J
};

/// Exact planted expectation of Y(P_j) (only planted-edge copies contribute), without sampling.
double planted_mean_exact(unsigned n, unsigned r, unsigned ell, double p, unsigned j);
double planted_mean_closed_form(unsigned n, unsigned r, unsigned ell, double p, unsigned j);

/// Planted means of Y(P_1..P_J): closed form, exact, asymptotic, and a Monte Carlo mean over
/// `trials` planted graphs (trial i uses Seed{seed.root, seed.stream + i}). trials = 0 skips sampling.
PlantedMeanReport planted_mean_check(unsigned n, unsigned r, unsigned ell, double p, unsigned J, unsigned trials,
                                     const Seed& seed, int workers = 0);

struct MgfReport {
    unsigned n = 0, r = 0, ell = 0, K = 0;
    double p = 0.0, c = 0.0;
    unsigned trials = 0;
    Seed seed;
    double null_mean_x = 0.0, null_se = 0.0;        // E[X] over null graphs
    double planted_mean = 0.0, planted_se = 0.0;    // E*[exp(-Y_N)] over planted graphs
    double reference = 0.0;                         // exp(-sigma2_K / 2)
    double sigma2 = 0.0;
    bool bands_overlap = false;                     // |difference| <= 4 (se_null + se_planted)
    double null_vs_reference = 0.0;                 // relative deviations from `reference`
    double planted_vs_reference = 0.0;
};

/// E[X] = E*[exp(-Y_N)] at finite n by Monte Carlo; null trials use streams seed.stream + i,
/// planted ones seed.stream + trials + i. Standard errors by bootstrap.
MgfReport planted_mgf_check(unsigned n, unsigned r, unsigned ell, double p, double c, unsigned K, unsigned trials,
                            const Seed& seed, int workers = 0);

struct BigOverlapReport {
    unsigned n = 0, r = 0, ell = 0, m = 0;
    double p = 0.0;
    double log_n = 0.0;
    unsigned window_low = 0;           // ceil(log n)
    unsigned trials = 0;
    Seed seed;
    unsigned trials_with_pair = 0;     // graphs holding two cycles sharing between log n and m-1 edges
    std::uint64_t pairs_in_window = 0; // ordered pairs
    std::uint64_t pairs_m_minus_one = 0;
    unsigned max_overlap = 0;          // largest overlap of two distinct cycles seen
    std::vector<std::pair<unsigned, unsigned>> examples;  // (trial, overlap), first few
    double frequency() const { return trials ? static_cast<double>(trials_with_pair) / trials : 0.0; }
};

/// Samples graphs at the p with E[Z] = log n, lists all cycles, and scans pairs for large overlaps.
BigOverlapReport big_overlap_scan(unsigned n, unsigned r, unsigned ell, unsigned trials, const Seed& seed,
                                  int workers = 0);

}  // namespace hamlaw
