#include "hamlaw/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "hamlaw/errors.hpp"
#include "hamlaw/params.hpp"

namespace hamlaw {

double p_star(unsigned n, unsigned r, unsigned ell, double c) {
    const CycleGeometry g = derive_constants(r, ell);
    if (n == 0) throw InvalidArgument("p_star: n must be positive");
    return c * static_cast<double>(g.lambda) * std::exp(static_cast<double>(g.s)) /
           std::pow(static_cast<double>(n), static_cast<double>(g.s));
}

double c_from_p(unsigned n, unsigned r, unsigned ell, double p) { return p / p_star(n, r, ell, 1.0); }

ExpectedZ expected_Z(unsigned n, unsigned r, unsigned ell, double p, unsigned aut_cap) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("expected_Z: p must lie in [0, 1]");
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0) throw InvalidArgument("expected_Z: s must divide n");
    const unsigned m = n / g.s;
    const BigInt n_c = cycle_copy_count(n, r, ell, aut_cap);
    ExpectedZ out;
    out.exact = Rational(n_c) * power(exact_rational(p), m);
    if (p == 0.0) {
        out.value = 0.0;
        out.log_value = -std::numeric_limits<double>::infinity();
        return out;
    }
    out.log_value = log_big(n_c) + m * std::log(p);
    out.value = to_double(out.exact);
    if (out.value == 0.0 || !std::isfinite(out.value)) out.value = std::exp(out.log_value);
    return out;
}

double p_for_expectation(unsigned n, unsigned r, unsigned ell, double target, unsigned aut_cap) {
    if (!(target > 0.0)) throw InvalidArgument("p_for_expectation: target must be positive");
    const CycleGeometry g = derive_constants(r, ell);
    if (n % g.s != 0) throw InvalidArgument("p_for_expectation: s must divide n");
    const unsigned m = n / g.s;
    const double log_nc = log_big(cycle_copy_count(n, r, ell, aut_cap));
    const double log_p = (std::log(target) - log_nc) / m;
    if (log_p > 1e-15) {
        throw InfeasibleConfiguration("p_for_expectation: target exceeds N_C, would need p > 1");
    }
    return std::min(1.0, std::exp(log_p));
}

double series_term(const ATable& table, unsigned k, double c) {
    const double s = table.geometry.s;
    return to_double(table.a(k)) * std::exp(-static_cast<double>(k) * (std::log(c) + s)) / (s * s);
}

double series_tail(unsigned r, unsigned ell, unsigned K, double c, unsigned aut_cap) {
    if (!(c > 0.0)) throw InvalidArgument("series_tail: c must be positive");
    const CycleGeometry g = derive_constants(r, ell);
    const double x = std::exp(-static_cast<double>(g.s)) / c;
    if (x >= 1.0) throw InvalidArgument("series_tail: the series diverges unless c e^s > 1");
    const ATable probe = compute_A_table(r, ell, 1, aut_cap);
    if (!probe.stabilization_observed) {
        throw ResourceLimit("series_tail: A_k not observed to stabilize within the brute-force cap");
    }
    const unsigned k_stab = probe.k_stab;
    const ATable table = compute_A_table(r, ell, std::max(K + 1, k_stab), aut_cap);
    const double s = g.s;
    double tail = 0.0;
    for (unsigned k = K + 1; k < k_stab; ++k) tail += series_term(table, k, c);
    const unsigned from = std::max(K + 1, k_stab);
    tail += to_double(table.stable_value()) / (s * s) * std::pow(x, from) / (1.0 - x);
    return tail;
}

LimitLawParams lognormal_params(unsigned r, unsigned ell, double c, unsigned K, unsigned aut_cap) {
    LimitLawParams out;
    out.K = K;
    out.c = c;
    out.tail = series_tail(r, ell, K, c, aut_cap);
    if (K == 0) return out;
    const ATable table = compute_A_table(r, ell, K, aut_cap);
    for (unsigned k = 1; k <= K; ++k) {
        out.terms.push_back(series_term(table, k, c));
        out.sigma2 += out.terms.back();
    }
    out.mu = -0.5 * out.sigma2;
    return out;
}

unsigned default_truncation(unsigned r, unsigned ell, unsigned aut_cap) {
    const ATable probe = compute_A_table(r, ell, 1, aut_cap);
    return std::max(probe.k_stab + 5, 8U);
}

double normal_cdf(double x, double mean, double variance) {
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    if (!(variance > 0.0)) return x >= mean ? 1.0 : 0.0;
    return 0.5 * std::erfc(-(x - mean) / std::sqrt(2.0 * variance));
}

double poisson_cdf(unsigned j, double lambda) {
    if (lambda < 0.0) throw InvalidArgument("poisson_cdf: negative mean");
    if (lambda == 0.0) return 1.0;
    if (j > lambda + 40.0 * std::sqrt(lambda) + 100.0) return 1.0;  // upper tail below 1e-300
    return boost::math::gamma_q(static_cast<double>(j) + 1.0, lambda);
}

double poisson_pmf(unsigned j, double lambda) {
    if (lambda < 0.0) throw InvalidArgument("poisson_pmf: negative mean");
    if (lambda == 0.0) return j == 0 ? 1.0 : 0.0;
    return std::exp(j * std::log(lambda) - lambda - std::lgamma(j + 1.0));
}

const GaussHermite& gauss_hermite(unsigned order) {
    static std::mutex mu;
    static std::map<unsigned, GaussHermite> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    if (order == 0) throw InvalidArgument("gauss_hermite: order must be positive");
    // Jacobi matrix of the Hermite recurrence
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (unsigned i = 1; i < order; ++i) {
        J(i, i - 1) = J(i - 1, i) = std::sqrt(0.5 * i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    if (eig.info() != Eigen::Success) throw NumericalFailure("gauss_hermite: eigen-decomposition failed");
    GaussHermite rule;
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (unsigned i = 0; i < order; ++i) {
        rule.nodes.push_back(eig.eigenvalues()(i));
        const double v0 = eig.eigenvectors()(0, i);
        rule.weights.push_back(sqrt_pi * v0 * v0);
    }
    return cache.emplace(order, std::move(rule)).first->second;
}

namespace {

double gh_expectation(const LimitLawParams& law, const std::function<double(double)>& g, unsigned order) {
    const GaussHermite& rule = gauss_hermite(order);
    const double scale = std::sqrt(2.0 * law.sigma2);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * g(std::exp(law.mu + scale * rule.nodes[i]));
    }
    return acc / std::sqrt(std::numbers::pi);
}

// Adaptive Gauss-Kronrod over the log scale, truncated at 12 standard deviations.
double kronrod_expectation(const LimitLawParams& law, const std::function<double(double)>& g) {
    const double sd = std::sqrt(law.sigma2);
    const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
    auto f = [&](double w) {
        const double z = (w - law.mu) / sd;
        return norm * std::exp(-0.5 * z * z) * g(std::exp(w));
    };
    double err = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, law.mu - 12.0 * sd, law.mu + 12.0 * sd, 20, 1e-12, &err);
    if (!(err <= 1e-9)) throw NumericalFailure("lognormal quadrature: error estimate " + std::to_string(err));
    return value;
}

double adaptive_expectation(const LimitLawParams& law, const std::function<double(double)>& g, const char* what) {
    if (law.sigma2 < 0.0) throw InvalidArgument(std::string(what) + ": negative variance");
    if (law.sigma2 == 0.0) return g(std::exp(law.mu));
    try {
        return kronrod_expectation(law, g);
    } catch (const NumericalFailure& e) {
        throw NumericalFailure(std::string(what) + ": no convergence (sigma2 = " + std::to_string(law.sigma2) +
                               "): " + e.what());
    }
}

}  // namespace

double mixture_cdf(double m, const LimitLawParams& law, unsigned j) {
    if (!(m > 0.0)) throw InvalidArgument("mixture_cdf: m must be positive");
    return adaptive_expectation(law, [&](double z) { return poisson_cdf(j, m * z); }, "mixture_cdf");
}

double mixture_pmf(double m, const LimitLawParams& law, unsigned j) {
    if (!(m > 0.0)) throw InvalidArgument("mixture_pmf: m must be positive");
    return adaptive_expectation(law, [&](double z) { return poisson_pmf(j, m * z); }, "mixture_pmf");
}

double lognormal_expectation(const LimitLawParams& law, const std::function<double(double)>& g) {
    return adaptive_expectation(law, g, "lognormal_expectation");
}

double lognormal_expectation_gh(const LimitLawParams& law, const std::function<double(double)>& g, unsigned order) {
    if (law.sigma2 == 0.0) return g(std::exp(law.mu));
    return gh_expectation(law, g, order);
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw InvalidArgument("mean: empty sample");
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw InvalidArgument("variance: need at least two samples");
    const double mu = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return acc / static_cast<double>(xs.size() - 1);
}

double covariance(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InvalidArgument("covariance: need two equal samples of size >= 2");
    const double mx = mean(xs);
    const double my = mean(ys);
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) acc += (xs[i] - mx) * (ys[i] - my);
    return acc / static_cast<double>(xs.size() - 1);
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InvalidArgument("ks_distance: empty sample");
    std::vector<double> xs(samples.begin(), samples.end());
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        // compare both sides of the jump; the model cdf may jump here as well
        const double left = std::isinf(xs[i]) && xs[i] < 0 ? 0.0 : cdf(std::nextafter(xs[i], -HUGE_VAL));
        const double right = cdf(xs[i]);
        d = std::max({d, std::abs(left - static_cast<double>(i) / n), std::abs(right - static_cast<double>(j) / n)});
        i = j;
    }
    return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample: empty sample");
    std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() || j < y.size()) {
        const double v = (j == y.size() || (i < x.size() && x[i] <= y[j])) ? x[i] : y[j];
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / x.size() - static_cast<double>(j) / y.size()));
    }
    return d;
}

double dispersion(std::span<const double> samples) {
    const double mu = mean(samples);
    if (mu == 0.0) throw InvalidArgument("dispersion: zero sample mean");
    return variance(samples) / mu;
}

double le_cam_bound(double z_prime, double m, double log_n) {
    if (!(log_n > 0.0)) throw InvalidArgument("le_cam_bound: log n must be positive");
    const double q = m / log_n;
    return z_prime * q * q;
}

double tv_distance(std::span<const double> integer_samples, const std::function<double(unsigned)>& pmf) {
    if (integer_samples.empty()) throw InvalidArgument("tv_distance: empty sample");
    std::map<unsigned, double> freq;
    for (double x : integer_samples) {
        if (x < 0 || x != std::floor(x)) throw InvalidArgument("tv_distance: samples must be non-negative integers");
        freq[static_cast<unsigned>(x)] += 1.0 / static_cast<double>(integer_samples.size());
    }
    const unsigned top = freq.rbegin()->first;
    double diff = 0.0;
    double mass = 0.0;
    for (unsigned j = 0; j <= top; ++j) {
        const double q = pmf(j);
        mass += q;
        auto it = freq.find(j);
        diff += std::abs((it == freq.end() ? 0.0 : it->second) - q);
    }
    diff += std::max(0.0, 1.0 - mass);  // model mass above every observed value
    return 0.5 * diff;
}

double bootstrap_se(std::span<const double> samples, const std::function<double(std::span<const double>)>& statistic,
                    unsigned resamples, const Seed& seed) {
    if (samples.empty()) throw InvalidArgument("bootstrap_se: empty sample");
    if (resamples < 2) throw InvalidArgument("bootstrap_se: need at least two resamples");
    CounterRng rng(seed, Domain::Bootstrap);
    std::vector<double> stats;
    std::vector<double> draw(samples.size());
    for (unsigned b = 0; b < resamples; ++b) {
        for (auto& x : draw) x = samples[rng.below(samples.size())];
        stats.push_back(statistic(draw));
    }
    return std::sqrt(variance(stats));
}

TestReport make_report(std::string name, double value, double lower, double upper, std::uint64_t n_trials,
                       const Seed& seed) {
    TestReport r;
    r.statistic_name = std::move(name);
    r.value = value;
    r.lower = lower;
    r.upper = upper;
    r.pass = std::isfinite(value) && value >= lower && value <= upper;
    r.n_trials = n_trials;
    r.seed = seed;
    return r;
}

}  // namespace hamlaw
