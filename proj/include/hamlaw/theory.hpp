#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hamlaw/bigint.hpp"
#include "hamlaw/rng.hpp"
#include "hamlaw/structures.hpp"

namespace hamlaw {

/// p* = c * lambda * e^s / n^s.
double p_star(unsigned n, unsigned r, unsigned ell, double c);

/// c_n = p / p*(n) at c = 1: the finite-n density ratio used by every plug-in reference.
double c_from_p(unsigned n, unsigned r, unsigned ell, double p);

struct ExpectedZ {
    Rational exact;         // N_C * p^m with p read as the exact binary value of the double
    double value = 0.0;
    double log_value = 0.0; // -inf when p = 0
};

/// E[Z] = N_C p^(n/s).
ExpectedZ expected_Z(unsigned n, unsigned r, unsigned ell, double p, unsigned aut_cap = kDefaultAutCap);

/// p with E[Z] = target: (target / N_C)^(s/n). InfeasibleConfiguration when that exceeds 1.
double p_for_expectation(unsigned n, unsigned r, unsigned ell, double target, unsigned aut_cap = kDefaultAutCap);

/// t_k^2 = A_k c^-k e^-ks / s^2.
double series_term(const ATable& table, unsigned k, double c);

/// sum_{k > K} t_k^2, exact over the non-stabilized part and a geometric sum beyond.
/// Requires c e^s > 1.
double series_tail(unsigned r, unsigned ell, unsigned K, double c, unsigned aut_cap = kDefaultAutCap);

struct LimitLawParams {
    double mu = 0.0;
    double sigma2 = 0.0;
    unsigned K = 0;
    double tail = 0.0;
    double c = 0.0;
    std::vector<double> terms;  // t_k^2 for k = 1..K
};

LimitLawParams lognormal_params(unsigned r, unsigned ell, double c, unsigned K, unsigned aut_cap = kDefaultAutCap);

/// Default truncation max(k_stab + 5, 8).
unsigned default_truncation(unsigned r, unsigned ell, unsigned aut_cap = kDefaultAutCap);

// --- distributions ------------------------------------------------------------

double normal_cdf(double x, double mean = 0.0, double variance = 1.0);

/// P(Pois(lambda) <= j).
double poisson_cdf(unsigned j, double lambda);
double poisson_pmf(unsigned j, double lambda);

/// Gauss-Hermite rule of the given order (weight e^{-x^2}), by Golub-Welsch.
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussHermite& gauss_hermite(unsigned order);

/// P(Pois(m L) <= j) and P(Pois(m L) = j) with log L ~ Normal(mu, sigma2).
/// Adaptive Gauss-Kronrod over log L (truncated at 12 standard deviations), error target 1e-9;
/// NumericalFailure when the error estimate stays above it.
double mixture_cdf(double m, const LimitLawParams& law, unsigned j);
double mixture_pmf(double m, const LimitLawParams& law, unsigned j);

/// E[g(L)] under the same rule; used for the normalization self-check E[L] = 1.
double lognormal_expectation(const LimitLawParams& law, const std::function<double(double)>& g);

/// E[g(L)] by a fixed-order Gauss-Hermite rule. Accurate for smooth g only; kept as a cross-check.
double lognormal_expectation_gh(const LimitLawParams& law, const std::function<double(double)>& g, unsigned order);

// --- test functionals -----------------------------------------------------------

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);  // unbiased
double covariance(std::span<const double> xs, std::span<const double> ys);

/// One-sample Kolmogorov-Smirnov statistic. Samples may contain -inf.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Sample variance over sample mean.
double dispersion(std::span<const double> samples);

/// Le Cam total variation bound Z' (m / log n)^2.
double le_cam_bound(double z_prime, double m, double log_n);

/// Total variation between the empirical law of integer samples and a pmf on {0, 1, ...}.
double tv_distance(std::span<const double> integer_samples, const std::function<double(unsigned)>& pmf);

/// Bootstrap standard error of a statistic (resampling driven by the Bootstrap stream of `seed`).
double bootstrap_se(std::span<const double> samples, const std::function<double(std::span<const double>)>& statistic,
                    unsigned resamples, const Seed& seed);

struct TestReport {
    std::string statistic_name;
    double value = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool pass = false;
    std::uint64_t n_trials = 0;
    Seed seed;
};

TestReport make_report(std::string name, double value, double lower, double upper, std::uint64_t n_trials,
                       const Seed& seed);

}  // namespace hamlaw
