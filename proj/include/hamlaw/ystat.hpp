#pragma once

#include <vector>

#include "hamlaw/bigint.hpp"
#include "hamlaw/hypergraph.hpp"
#include "hamlaw/structures.hpp"

namespace hamlaw {

inline constexpr unsigned kDefaultKMax = 8;

struct YStatistic {
    unsigned k = 0;
    double value = 0.0;
    // components[j]: the part of `value` contributed by edge subsets of size j (sums to value).
    std::vector<double> components;
};

struct YOptions {
    bool parallel = true;
    unsigned k_max = kDefaultKMax;
    unsigned aut_cap = kDefaultAutCap;
};

/// Y(P_1), ..., Y(P_K) for one graph at density p, sharing all embedding counts.
///
/// Sum over copies of prod (x_e - p) is expanded over edge subsets A of the path; each term
/// needs the number of injective maps of the path's vertices with the A-windows on edges of
/// the graph. Those counts depend only on the shape of A, are computed once per shape and
/// combined in exact integer arithmetic (p is a dyadic rational); one conversion at the end.
std::vector<YStatistic> y_statistics(const Hypergraph& graph, unsigned ell, double p, unsigned K,
                                     const YOptions& options = {});

YStatistic y_statistic(const Hypergraph& graph, unsigned k, unsigned ell, double p, const YOptions& options = {});

struct YCombined {
    double value = 0.0;              // Y_N = sum_k t_k Y(P_k)
    std::vector<YStatistic> terms;
    std::vector<double> weights;     // t_1..t_K
    double tail_bound = 0.0;         // sum_{k > K} t_k^2
    unsigned K = 0;
    double c = 0.0;
};

/// Y_N with t_k = sqrt(A_k c^-k e^-ks) / s.
YCombined y_combined(const Hypergraph& graph, unsigned ell, double p, double c, unsigned K,
                     const YOptions& options = {});

/// Sum over the injective maps into the complete r-graph on [0, n) of prod (x_e - p), divided
/// by Aut(P_k) and normalized like Y(P_k). Independent brute force used to check y_statistic.
double y_direct(const Hypergraph& graph, unsigned k, unsigned ell, double p, unsigned aut_cap = kDefaultAutCap);

struct XStatistic {
    double value = 0.0;  // Z / E[Z] * exp(-Y_N)
    BigInt Z;
    double expected_Z = 0.0;
    YCombined y;
};

XStatistic x_statistic(const Hypergraph& graph, unsigned ell, double p, double c, unsigned K,
                       const YOptions& options = {});

/// Z / E[Z] * exp(-y_n) evaluated in log space, so huge Z or tiny E[Z] are fine.
double x_from_parts(const BigInt& Z, double log_expected_Z, double y_n);

}  // namespace hamlaw
