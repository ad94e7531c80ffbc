#include "hamlaw/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hamlaw/counting.hpp"
#include "hamlaw/errors.hpp"
#include "hamlaw/oracle.hpp"
#include "hamlaw/parallel.hpp"
#include "hamlaw/params.hpp"
#include "hamlaw/sampling.hpp"
#include "hamlaw/ystat.hpp"

namespace hamlaw {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw UsageError("config: " + key + " is not a number: '" + v + "'");
    }
    if (used != v.size()) throw UsageError("config: " + key + " is not a number: '" + v + "'");
    return x;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
        throw UsageError("config: " + key + " must be a non-negative integer, got '" + v + "'");
    }
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw UsageError("config: " + key + " is out of range");
    }
}

unsigned parse_small(const std::string& key, const std::string& v) {
    const std::uint64_t x = parse_uint(key, v);
    if (x > 1'000'000'000ULL) throw UsageError("config: " + key + " is out of range");
    return static_cast<unsigned>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw UsageError("config: " + key + " must be true or false");
}

const std::set<std::string> kExperiments{"concentration", "lognormal", "poisson", "clt", "oracle-suite"};
const std::set<std::string> kModels{"null", "planted", "double"};

CountOptions count_options(const ExperimentConfig& cfg) {
    CountOptions co;
    co.parallel = false;  // trials are the parallel unit
    co.max_nodes = cfg.max_nodes;
    co.max_dp_states = cfg.max_dp_states;
    return co;
}

YOptions y_options() {
    YOptions yo;
    yo.parallel = false;
    return yo;
}

// fn(Seed, TrialRecord&) fills one record; records land in trial order whatever the schedule.
// Trial i runs on stream first + i, and that is its recorded trial index.
template <class Fn>
std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, Fn fn, unsigned first = 0) {
    std::vector<TrialRecord> records(cfg.trials);
    parallel_for_trials(cfg.trials, cfg.workers, [&](long i) {
        TrialRecord& rec = records[i];
        rec.trial = first + static_cast<unsigned>(i);
        rec.seed = cfg.seed;
        const auto start = std::chrono::steady_clock::now();
        fn(Seed{cfg.seed, rec.trial}, rec);
        if (cfg.timing) {
            rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
    });
    return records;
}

ExperimentResult start_result(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult res;
    res.config = cfg;
    res.p = cfg.density();
    res.c = c_from_p(cfg.n, cfg.r, cfg.ell, res.p);
    res.K = cfg.truncation();
    return res;
}

std::vector<double> z_values(const std::vector<TrialRecord>& records) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& rec : records) out.push_back(to_double(*rec.Z));
    return out;
}

double mean_stat(std::span<const double> xs) { return mean(xs); }

Seed bootstrap_seed(const ExperimentConfig& cfg, std::uint64_t which) { return Seed{cfg.seed, ~which}; }

double relative_spread(std::span<const double> xs) {
    const double m = mean(xs);
    return std::sqrt(variance(xs)) / m;
}

std::map<unsigned, unsigned> histogram(std::span<const double> xs) {
    std::map<unsigned, unsigned> h;
    for (double x : xs) ++h[static_cast<unsigned>(x)];
    return h;
}

double empirical_tv(std::span<const double> a, std::span<const double> b) {
    const auto ha = histogram(a);
    const auto hb = histogram(b);
    std::set<unsigned> keys;
    for (const auto& [k, v] : ha) keys.insert(k);
    for (const auto& [k, v] : hb) keys.insert(k);
    double tv = 0;
    for (unsigned k : keys) {
        const double pa = ha.count(k) ? static_cast<double>(ha.at(k)) / a.size() : 0.0;
        const double pb = hb.count(k) ? static_cast<double>(hb.at(k)) / b.size() : 0.0;
        tv += std::abs(pa - pb);
    }
    return 0.5 * tv;
}

}  // namespace

// --- config ---------------------------------------------------------------------

void ExperimentConfig::validate() const {
    if (!kExperiments.count(experiment)) throw UsageError("config: unknown experiment '" + experiment + "'");
    if (n == 0 || r == 0 || ell == 0) throw UsageError("config: n, r and ell are required");
    try {
        Params::make(n, r, ell, 0.5);
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    const int densities = p.has_value() + c.has_value() + target_m.has_value();
    if (densities != 1) throw UsageError("config: give exactly one of p, c, target_m");
    if (p && !(*p > 0.0 && *p <= 1.0)) throw UsageError("config: p must lie in (0, 1]");
    if (c && !(*c > 0.0)) throw UsageError("config: c must be positive");
    if (target_m && !(*target_m > 0.0)) throw UsageError("config: target_m must be positive");
    if (trials == 0) throw UsageError("config: trials must be positive");
    if (max_nodes == 0 || max_dp_states == 0 || max_cycles == 0 || uniform_pair_limit == 0) {
        throw UsageError("config: resource caps must be positive");
    }
    if (workers < 0) throw UsageError("config: workers must be >= 0");
    if (!kModels.count(model)) throw UsageError("config: model must be null, planted or double");
    if (K && (*K == 0 || *K > kDefaultKMax)) {
        throw UsageError("config: K must lie in [1, " + std::to_string(kDefaultKMax) + "]");
    }
    for (const auto& [name, band] : gates) {
        if (!(band.first <= band.second)) throw UsageError("config: gate." + name + " has lo > hi");
    }
    if (experiment == "concentration" && ell < 3) throw UsageError("config: concentration needs ell >= 3");
    if (experiment == "lognormal" && ell != 2) throw UsageError("config: lognormal needs ell = 2");
    if (experiment == "poisson" && !target_m) throw UsageError("config: poisson needs target_m");
}

std::string ExperimentConfig::to_text() const {
    std::ostringstream os;
    os << "experiment = " << experiment << "\n";
    os << "n = " << n << "\nr = " << r << "\nell = " << ell << "\n";
    if (p) os << "p = " << fmt17(*p) << "\n";
    if (c) os << "c = " << fmt17(*c) << "\n";
    if (target_m) os << "target_m = " << fmt17(*target_m) << "\n";
    if (K) os << "K = " << *K << "\n";
    os << "trials = " << trials << "\nseed = " << seed << "\nworkers = " << workers << "\n";
    os << "model = " << model << "\noverlap_t = " << overlap_t << "\n";
    os << "thinning = " << (thinning ? "true" : "false") << "\ntiming = " << (timing ? "true" : "false") << "\n";
    os << "max_nodes = " << max_nodes << "\nmax_dp_states = " << max_dp_states << "\nmax_cycles = " << max_cycles
       << "\nuniform_pair_limit = " << uniform_pair_limit << "\n";
    os << "out_dir = " << out_dir << "\n";
    for (const auto& [name, band] : gates) os << "gate." << name << " = " << fmt17(band.first) << "," << fmt17(band.second) << "\n";
    return os.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string line;
    unsigned lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string v = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw UsageError("config: duplicate key " + key);
        if (key == "experiment") cfg.experiment = v;
        else if (key == "n") cfg.n = parse_small(key, v);
        else if (key == "r") cfg.r = parse_small(key, v);
        else if (key == "ell") cfg.ell = parse_small(key, v);
        else if (key == "p") cfg.p = parse_double(key, v);
        else if (key == "c") cfg.c = parse_double(key, v);
        else if (key == "target_m") cfg.target_m = parse_double(key, v);
        else if (key == "K") cfg.K = parse_small(key, v);
        else if (key == "trials") cfg.trials = parse_small(key, v);
        else if (key == "seed") cfg.seed = parse_uint(key, v);
        else if (key == "workers") cfg.workers = static_cast<int>(parse_small(key, v));
        else if (key == "model") cfg.model = v;
        else if (key == "overlap_t") cfg.overlap_t = parse_small(key, v);
        else if (key == "thinning") cfg.thinning = parse_bool(key, v);
        else if (key == "timing") cfg.timing = parse_bool(key, v);
        else if (key == "max_nodes") cfg.max_nodes = parse_uint(key, v);
        else if (key == "max_dp_states") cfg.max_dp_states = parse_uint(key, v);
        else if (key == "max_cycles") cfg.max_cycles = parse_uint(key, v);
        else if (key == "uniform_pair_limit") cfg.uniform_pair_limit = parse_uint(key, v);
        else if (key == "out_dir") cfg.out_dir = v;
        else if (key.rfind("gate.", 0) == 0 && key.size() > 5) {
            const auto comma = v.find(',');
            if (comma == std::string::npos) throw UsageError("config: " + key + " must be lo,hi");
            cfg.gates[key.substr(5)] = {parse_double(key, trim(v.substr(0, comma))), parse_double(key, trim(v.substr(comma + 1)))};
        } else {
            throw UsageError("config: unknown key " + key);
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

double ExperimentConfig::density() const {
    if (p) return *p;
    if (c) return p_star(n, r, ell, *c);
    if (target_m) {
        try {
            return p_for_expectation(n, r, ell, *target_m);
        } catch (const InfeasibleConfiguration& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
    }
    throw UsageError("config: no density given");
}

unsigned ExperimentConfig::truncation() const {
    if (K) return *K;
    const auto k = static_cast<unsigned>(std::floor(std::log(static_cast<double>(n))));
    return std::clamp(k, 1U, kDefaultKMax);
}

LimitLawParams reference_law(unsigned r, unsigned ell, double c, unsigned K) {
    LimitLawParams law = lognormal_params(r, ell, c, std::max(K, default_truncation(r, ell)));
    law.sigma2 += law.tail;
    law.mu = -0.5 * law.sigma2;
    return law;
}

// --- experiments ------------------------------------------------------------------

ExperimentResult run_concentration(const ExperimentConfig& cfg) {
    ExperimentResult res = start_result(cfg);
    const Params params = Params::make(cfg.n, cfg.r, cfg.ell, res.p);
    const CountOptions co = count_options(cfg);
    res.records = run_trials(cfg, [&](const Seed& seed, TrialRecord& rec) {
        const Hypergraph g = sample_gnp(params, seed);
        rec.edge_count = g.edge_count();
        rec.Z = count_hamilton(g, cfg.ell, co).count;
    });
    const ExpectedZ ez = expected_Z(cfg.n, cfg.r, cfg.ell, res.p);
    const auto z = z_values(res.records);
    std::vector<double> ratio;
    for (double x : z) ratio.push_back(x / ez.value);
    auto& st = res.stats;
    st["expected_Z"] = ez.value;
    st["mean_Z"] = mean(z);
    st["mean_ratio"] = mean(ratio);
    st["mean_ratio_se"] = bootstrap_se(ratio, mean_stat, 1000, bootstrap_seed(cfg, 1));
    st["cv2"] = cfg.trials > 1 ? variance(z) / (mean(z) * mean(z)) : 0.0;
    st["inv_expected_Z"] = 1.0 / ez.value;
    st["cv2_bound"] = 1.0 / ez.value + 0.1;
    res.exact["expected_Z"] = to_decimal(ez.exact);
    if (cycle_copy_count(cfg.n, cfg.r, cfg.ell) <= cfg.max_cycles && res.p < 1.0) {
        const auto sm = second_moment_identity_check(cfg.n, cfg.r, cfg.ell, res.p, cfg.max_cycles);
        st["second_moment_ratio_exact"] = sm.ratio;
        st["cv2_exact"] = sm.ratio - 1.0;
    }
    return res;
}

ExperimentResult run_lognormal(const ExperimentConfig& cfg) {
    ExperimentResult res = start_result(cfg);
    const Params params = Params::make(cfg.n, cfg.r, cfg.ell, res.p);
    const CountOptions co = count_options(cfg);
    const ExpectedZ ez = expected_Z(cfg.n, cfg.r, cfg.ell, res.p);
    res.records = run_trials(cfg, [&](const Seed& seed, TrialRecord& rec) {
        const Hypergraph g = sample_gnp(params, seed);
        rec.edge_count = g.edge_count();
        rec.Z = count_hamilton(g, cfg.ell, co).count;
        const YCombined y = y_combined(g, cfg.ell, res.p, res.c, res.K, y_options());
        for (const auto& t : y.terms) rec.y.push_back(t.value);
        rec.y_n = y.value;
        rec.x = x_from_parts(*rec.Z, ez.log_value, y.value);
    });
    const LimitLawParams law = reference_law(cfg.r, cfg.ell, res.c, res.K);
    const LimitLawParams law_k = lognormal_params(cfg.r, cfg.ell, res.c, res.K);
    std::vector<double> ratio, log_ratio, x;
    double zeros = 0, second = 0;
    for (const auto& rec : res.records) {
        const double lr = *rec.Z == 0 ? -INFINITY : log_big(*rec.Z) - ez.log_value;
        ratio.push_back(std::exp(lr));
        log_ratio.push_back(lr);
        x.push_back(*rec.x);
        zeros += (*rec.Z == 0);
        second += ratio.back() * ratio.back();
    }
    auto& st = res.stats;
    st["expected_Z"] = ez.value;
    st["c_n"] = res.c;
    st["mu_n"] = law.mu;
    st["sigma2_n"] = law.sigma2;
    st["sigma2_K"] = law_k.sigma2;
    st["sigma2_tail"] = law_k.tail;
    st["ks_log_ratio"] = ks_distance(log_ratio, [&](double v) { return normal_cdf(v, law.mu, law.sigma2); });
    st["zero_fraction"] = zeros / cfg.trials;
    st["mean_ratio"] = mean(ratio);
    st["mean_ratio_se"] = bootstrap_se(ratio, mean_stat, 1000, bootstrap_seed(cfg, 1));
    st["mean_ratio_z"] = (st["mean_ratio"] - 1.0) / st["mean_ratio_se"];
    st["mean_x"] = mean(x);
    st["mean_x_se"] = bootstrap_se(x, mean_stat, 1000, bootstrap_seed(cfg, 2));
    st["var_x"] = variance(x);
    st["x_reference"] = std::exp(-0.5 * law_k.sigma2);
    st["rel_spread_x"] = relative_spread(x);
    st["rel_spread_ratio"] = relative_spread(ratio);
    st["x_more_concentrated"] = st["rel_spread_x"] < st["rel_spread_ratio"] ? 1.0 : 0.0;
    st["second_moment_ratio_empirical"] = second / cfg.trials;
    st["second_moment_ratio_predicted"] = std::exp(law.sigma2);
    res.exact["expected_Z"] = to_decimal(ez.exact);
    return res;
}

ExperimentResult run_poisson(const ExperimentConfig& cfg) {
    ExperimentResult res = start_result(cfg);
    const double m = *cfg.target_m;
    const Params params = Params::make(cfg.n, cfg.r, cfg.ell, res.p);
    const CountOptions co = count_options(cfg);
    res.records = run_trials(cfg, [&](const Seed& seed, TrialRecord& rec) {
        const Hypergraph g = sample_gnp(params, seed);
        rec.edge_count = g.edge_count();
        rec.Z = count_hamilton(g, cfg.ell, co).count;
    });
    const auto z = z_values(res.records);
    auto& st = res.stats;
    st["target_m"] = m;
    st["c_n"] = res.c;
    st["mean_Z"] = mean(z);
    st["mean_Z_rel_error"] = mean(z) / m - 1.0;
    st["var_Z"] = variance(z);
    st["dispersion"] = dispersion(z);
    st["tv_poisson"] = tv_distance(z, [&](unsigned j) { return poisson_pmf(j, m); });
    if (cfg.ell == 2) {
        const LimitLawParams law = reference_law(cfg.r, cfg.ell, res.c, res.K);
        std::map<unsigned, double> cache;
        st["tv_mixture"] = tv_distance(z, [&](unsigned j) {
            auto it = cache.find(j);
            if (it == cache.end()) it = cache.emplace(j, mixture_pmf(m, law, j)).first;
            return it->second;
        });
        st["mixture_sigma2"] = law.sigma2;
        st["mixture_dispersion"] = 1.0 + m * (std::exp(law.sigma2) - 1.0);
    }
    const double log_n = std::log(static_cast<double>(cfg.n));
    st["le_cam_bound"] = le_cam_bound(log_n, m, log_n);
    if (cfg.thinning && m < log_n) {
        const unsigned m_edges = params.m_edges;
        const double p_prime = p_for_expectation(cfg.n, cfg.r, cfg.ell, log_n);
        const double q = std::pow(m / log_n, 1.0 / m_edges);
        const Params first = Params::make(cfg.n, cfg.r, cfg.ell, p_prime);
        res.thinned_records = run_trials(cfg, [&](const Seed& seed, TrialRecord& rec) {
            const Hypergraph g = thin(sample_gnp(first, seed), q, seed);
            rec.edge_count = g.edge_count();
            rec.Z = count_hamilton(g, cfg.ell, co).count;
        }, cfg.trials);  // streams disjoint from the direct pipeline, so the samples are independent
        const auto zt = z_values(res.thinned_records);
        std::vector<double> e_direct, e_thin;
        for (const auto& rec : res.records) e_direct.push_back(static_cast<double>(rec.edge_count));
        for (const auto& rec : res.thinned_records) e_thin.push_back(static_cast<double>(rec.edge_count));
        st["thin_p_prime"] = p_prime;
        st["thin_q"] = q;
        st["thin_mean_Z"] = mean(zt);
        st["thin_dispersion"] = dispersion(zt);
        st["ks_edge_counts"] = ks_two_sample(e_direct, e_thin);
        st["tv_pipelines"] = empirical_tv(z, zt);
    }
    return res;
}

ExperimentResult run_clt(const ExperimentConfig& cfg) {
    ExperimentResult res = start_result(cfg);
    const Params params = Params::make(cfg.n, cfg.r, cfg.ell, res.p);
    DoublePlantOptions dpo;
    dpo.uniform_pair_limit = cfg.uniform_pair_limit;
    std::vector<std::string> schemes(cfg.trials);
    res.records = run_trials(cfg, [&](const Seed& seed, TrialRecord& rec) {
        Hypergraph g;
        if (cfg.model == "null") {
            g = sample_gnp(params, seed);
        } else if (cfg.model == "planted") {
            g = plant_cycle(params, seed).graph;
        } else {
            PlantedInstance inst = plant_two_cycles(params, cfg.overlap_t, seed, dpo);
            schemes[rec.trial] = inst.scheme;
            g = std::move(inst.graph);
        }
        rec.edge_count = g.edge_count();
        for (const auto& y : y_statistics(g, cfg.ell, res.p, res.K, y_options())) rec.y.push_back(y.value);
    });
    const double factor = cfg.model == "null" ? 0.0 : cfg.model == "planted" ? 1.0 : 2.0;
    const ATable table = compute_A_table(cfg.r, cfg.ell, res.K);
    std::vector<std::vector<double>> cols(res.K);
    for (const auto& rec : res.records) {
        for (unsigned k = 0; k < res.K; ++k) cols[k].push_back(rec.y[k]);
    }
    auto& st = res.stats;
    double dev = 0, dev_asym = 0, band = 0, offdiag = 0, vmin = INFINITY, vmax = -INFINITY, ks_max = 0;
    for (unsigned k = 1; k <= res.K; ++k) {
        const auto& col = cols[k - 1];
        const std::string s = std::to_string(k);
        const double mk = mean(col), vk = variance(col);
        const double ref = factor * planted_mean_closed_form(cfg.n, cfg.r, cfg.ell, res.p, k);
        const double mu = factor * std::sqrt(series_term(table, k, res.c));
        std::vector<double> centered;
        for (double y : col) centered.push_back(y - mk);
        const double ks = ks_distance(centered, [](double v) { return normal_cdf(v); });
        st["mean_" + s] = mk;
        st["var_" + s] = vk;
        st["ref_mean_" + s] = ref;
        st["mu_" + s] = mu;
        st["ks_" + s] = ks;
        dev = std::max(dev, std::abs(mk - ref));
        dev_asym = std::max(dev_asym, std::abs(mk - mu));
        band = std::max(band, std::abs(mk - ref) / std::sqrt(vk / cfg.trials));
        vmin = std::min(vmin, vk);
        vmax = std::max(vmax, vk);
        ks_max = std::max(ks_max, ks);
        for (unsigned j = k + 1; j <= res.K; ++j) {
            const double cv = covariance(col, cols[j - 1]);
            st["cov_" + s + "_" + std::to_string(j)] = cv;
            offdiag = std::max(offdiag, std::abs(cv));
        }
    }
    st["c_n"] = res.c;
    st["max_abs_mean_dev"] = dev;
    st["max_abs_mean_dev_asymptotic"] = dev_asym;
    st["max_band_z"] = band;
    st["max_abs_offdiag"] = offdiag;
    st["min_var"] = vmin;
    st["max_var"] = vmax;
    st["max_ks"] = ks_max;
    if (cfg.model == "double") {
        res.exact["double_plant_scheme"] = schemes.empty() ? "" : schemes[0];
        // the union of the two cycles has 2m - t edges, each a planted P_1 copy
        const double per_edge = planted_mean_closed_form(cfg.n, cfg.r, cfg.ell, res.p, 1) / params.m_edges;
        st["exact_mean_1"] = (2.0 * params.m_edges - cfg.overlap_t) * per_edge;
    }
    return res;
}

ExperimentResult run_oracle_suite(const ExperimentConfig& cfg) {
    ExperimentResult res = start_result(cfg);
    auto& st = res.stats;
    const auto d = overlap_distribution(cfg.n, cfg.r, cfg.ell, cfg.max_cycles);
    st["n_cycles"] = to_double(d.n_cycles);
    st["overlap_total_ok"] = d.total() == d.n_cycles * d.n_cycles;
    st["overlap_diagonal_ok"] = d.counts[d.m] == d.n_cycles;
    st["overlap_m_minus_one"] = to_double(d.counts[d.m - 1]);
    st["n_cycles_matches_formula"] = d.n_cycles == cycle_copy_count(cfg.n, cfg.r, cfg.ell);
    for (unsigned t = 0; t <= d.m; ++t) res.exact["overlap_count_" + std::to_string(t)] = to_decimal(d.counts[t]);
    if (res.p < 1.0) {
        const auto sm = second_moment_identity_check(cfg.n, cfg.r, cfg.ell, res.p, cfg.max_cycles);
        st["second_moment_exact_zero"] = sm.difference == 0;
        st["second_moment_rel_diff"] = sm.relative_difference;
        st["second_moment_ratio"] = sm.ratio;
        res.exact["second_moment"] = to_decimal(sm.second_direct);
        res.exact["variance_Z"] = to_decimal(sm.variance);
        double gap = 0;
        for (unsigned j = 1; j <= res.K && j + 1 < d.m; ++j) {
            const double a = planted_mean_closed_form(cfg.n, cfg.r, cfg.ell, res.p, j);
            const double b = planted_mean_exact(cfg.n, cfg.r, cfg.ell, res.p, j);
            gap = std::max(gap, std::abs(a - b) / std::abs(b));
        }
        st["planted_mean_max_rel_gap"] = gap;
    }
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult res;
    if (config.experiment == "concentration") res = run_concentration(config);
    else if (config.experiment == "lognormal") res = run_lognormal(config);
    else if (config.experiment == "poisson") res = run_poisson(config);
    else if (config.experiment == "clt") res = run_clt(config);
    else if (config.experiment == "oracle-suite") res = run_oracle_suite(config);
    else throw UsageError("unknown experiment '" + config.experiment + "'");
    res.pass = true;
    for (const auto& [name, band] : config.gates) {
        const auto it = res.stats.find(name);
        if (it == res.stats.end()) throw UsageError("gate on unknown statistic '" + name + "'");
        res.gates.push_back(make_report(name, it->second, band.first, band.second, config.trials, Seed{config.seed, 0}));
        res.pass = res.pass && res.gates.back().pass;
    }
    return res;
}

// --- output -------------------------------------------------------------------------

void write_csv(std::ostream& os, const std::vector<TrialRecord>& records, unsigned K) {
    os << "trial,seed,edge_count,Z";
    for (unsigned k = 1; k <= K; ++k) os << ",Y_" << k;
    os << ",Y_N,X,elapsed_ms\n";
    for (const auto& rec : records) {
        os << rec.trial << ',' << rec.seed << ',' << rec.edge_count << ',';
        if (rec.Z) os << to_decimal(*rec.Z);
        for (unsigned k = 0; k < K; ++k) {
            os << ',';
            if (k < rec.y.size()) os << fmt17(rec.y[k]);
        }
        os << ',';
        if (rec.y_n) os << fmt17(*rec.y_n);
        os << ',';
        if (rec.x) os << fmt17(*rec.x);
        os << ',';
        if (rec.elapsed_ms) os << fmt17(*rec.elapsed_ms);
        os << '\n';
    }
}

std::string summary_json(const ExperimentResult& res) {
    nlohmann::json j;
    j["schema"] = 1;
    j["experiment"] = res.config.experiment;
    nlohmann::json cfg;
    std::istringstream lines(res.config.to_text());
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find('=');
        cfg[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    j["config"] = cfg;
    j["p"] = res.p;
    j["c_n"] = res.c;
    j["K"] = res.K;
    j["trials"] = res.config.trials;
    j["root_seed"] = res.config.seed;
    j["stats"] = res.stats;
    j["exact"] = res.exact;
    j["gates"] = nlohmann::json::array();
    for (const auto& g : res.gates) {
        j["gates"].push_back({{"statistic", g.statistic_name}, {"value", g.value}, {"lower", g.lower},
                              {"upper", g.upper}, {"pass", g.pass}});
    }
    j["pass"] = res.pass;
    return j.dump(2) + "\n";
}

void emit_outputs(const ExperimentResult& res) {
    if (res.config.out_dir.empty()) return;
    const std::filesystem::path dir(res.config.out_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream os(dir / "trials.csv");
        write_csv(os, res.records, res.K);
    }
    if (!res.thinned_records.empty()) {
        std::ofstream os(dir / "trials_thinned.csv");
        write_csv(os, res.thinned_records, res.K);
    }
    std::ofstream os(dir / "summary.json");
    os << summary_json(res);
}

int run_config(const std::string& path) {
    try {
        const ExperimentResult res = run_experiment(ExperimentConfig::load(path));
        emit_outputs(res);
        return res.pass ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace hamlaw
