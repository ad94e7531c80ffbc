#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hamlaw/bigint.hpp"
#include "hamlaw/rng.hpp"
#include "hamlaw/theory.hpp"

namespace hamlaw {

/// One experiment run, read from a `key = value` file ('#' starts a comment).
///
///   experiment  concentration | lognormal | poisson | clt | oracle-suite
///   n, r, ell   model size
///   p | c | target_m   exactly one density specification
///   K           Y truncation (default min(floor(log n), 8))
///   trials, seed, workers (0: OpenMP default)
///   model       null | planted | double (clt only), overlap_t for double
///   thinning    true | false (poisson: also run the sample-then-thin pipeline)
///   timing      true | false (fill the elapsed_ms column; breaks byte-identical replay)
///   max_nodes, max_dp_states, max_cycles, uniform_pair_limit   resource caps
///   out_dir     where trials.csv and summary.json go (empty: nothing written)
///   gate.<statistic> = lo,hi   pass iff lo <= statistic <= hi
struct ExperimentConfig {
    std::string experiment;
    unsigned n = 0, r = 0, ell = 0;
    std::optional<double> p, c, target_m;
    std::optional<unsigned> K;
    unsigned trials = 100;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string model = "null";
    unsigned overlap_t = 0;
    bool thinning = true;
    bool timing = false;
    std::uint64_t max_nodes = 20'000'000'000ULL;
    std::uint64_t max_dp_states = 30'000'000ULL;
    std::uint64_t max_cycles = 5000;
    std::uint64_t uniform_pair_limit = 200'000;
    std::string out_dir;
    std::map<std::string, std::pair<double, double>> gates;

    /// Throws UsageError.
    void validate() const;
    std::string to_text() const;
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);

    double density() const;  // resolved p
    unsigned truncation() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct TrialRecord {
    unsigned trial = 0;
    std::uint64_t seed = 0;  // root seed; the trial's Seed is {seed, trial}
    std::size_t edge_count = 0;
    std::optional<BigInt> Z;
    std::vector<double> y;  // Y(P_1..P_K), empty when not computed
    std::optional<double> y_n, x;
    std::optional<double> elapsed_ms;
};

struct ExperimentResult {
    ExperimentConfig config;
    double p = 0.0;
    double c = 0.0;  // c_n = p / p*(n)
    unsigned K = 0;
    std::vector<TrialRecord> records;
    std::vector<TrialRecord> thinned_records;       // poisson two-stage pipeline
    std::map<std::string, double> stats;
    std::map<std::string, std::string> exact;      // exact values as decimal strings
    std::vector<TestReport> gates;
    bool pass = true;
};

ExperimentResult run_concentration(const ExperimentConfig& config);
ExperimentResult run_lognormal(const ExperimentConfig& config);
ExperimentResult run_poisson(const ExperimentConfig& config);
ExperimentResult run_clt(const ExperimentConfig& config);
ExperimentResult run_oracle_suite(const ExperimentConfig& config);

/// Dispatches on config.experiment, then evaluates the gates (an unknown statistic is a UsageError).
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Columns: trial,seed,edge_count,Z,Y_1..Y_K,Y_N,X,elapsed_ms. Floats as %.17g; absent fields empty.
void write_csv(std::ostream& os, const std::vector<TrialRecord>& records, unsigned K);
std::string summary_json(const ExperimentResult& result);

/// Writes trials.csv (and trials_thinned.csv) plus summary.json under config.out_dir.
void emit_outputs(const ExperimentResult& result);

/// Load, run, emit. Returns 0 when every gate passes, 1 on a gate failure, 2 on a usage error.
int run_config(const std::string& path);

/// Reference law for log(Z / E[Z]) at density ratio c: the series summed to max(K, default
/// truncation) plus its certified tail, with mu = -sigma2 / 2.
LimitLawParams reference_law(unsigned r, unsigned ell, double c, unsigned K);

}  // namespace hamlaw
