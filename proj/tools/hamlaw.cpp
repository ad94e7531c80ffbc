// Command-line front end: constants, sample, count, stat-y, theory, oracle, experiment.

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "hamlaw/counting.hpp"
#include "hamlaw/errors.hpp"
#include "hamlaw/harness.hpp"
#include "hamlaw/oracle.hpp"
#include "hamlaw/sampling.hpp"
#include "hamlaw/structures.hpp"
#include "hamlaw/theory.hpp"
#include "hamlaw/ystat.hpp"

using namespace hamlaw;
using Json = nlohmann::ordered_json;

namespace {

struct Common {
    bool json = false;
    int workers = 0;
    std::uint64_t seed = 1;
    std::uint64_t stream = 0;
    unsigned trials = 0;
    std::string out_dir;
};

struct Model {
    unsigned n = 0, r = 3, ell = 2;
    std::optional<double> p, c;
    unsigned K = 0;

    void add_to(CLI::App* app, bool need_n = true) {
        auto* o = app->add_option("--n", n, "vertices");
        if (need_n) o->required();
        app->add_option("--r", r, "edge size")->capture_default_str();
        app->add_option("--ell", ell, "overlap of consecutive edges")->capture_default_str();
        auto* po = app->add_option("--p", p, "edge probability");
        auto* co = app->add_option("--c", c, "density ratio: p = c lambda e^s / n^s");
        po->excludes(co);
        app->add_option("--K", K, "path-length truncation");
    }
    double density() const {
        if (p) return *p;
        if (c) return p_star(n, r, ell, *c);
        throw UsageError("give --p or --c");
    }
    double ratio() const { return c ? *c : c_from_p(n, r, ell, density()); }
};

void print(const Json& j, bool as_json, const std::string& prefix = "") {
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            print(value, false, name);
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            for (std::size_t i = 0; i < value.size(); ++i) print(value[i], false, name + "[" + std::to_string(i) + "]");
        } else {
            std::cout << name << " = " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
    }
}

Json seed_json(const Seed& s) { return Json{{"root", s.root}, {"stream", s.stream}}; }

Json table_json(const ATable& t) {
    Json a = Json::array(), aut = Json::array();
    for (const auto& x : t.A) a.push_back(to_decimal(x));
    for (const auto& x : t.aut_path) aut.push_back(to_decimal(x));
    return Json{{"A", a},
                {"aut_path", aut},
                {"k_stab", t.k_stab},
                {"k_bruteforce", t.k_bruteforce},
                {"stabilization_observed", t.stabilization_observed},
                {"extrapolated", t.extrapolated}};
}

Json cycle_json(const CycleCopy& c) { return Json{{"sequence", c.sequence}, {"edge_ranks", c.edge_ranks}}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamilton ell-cycles in random hypergraphs: exact counts, Y statistics, limit laws"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_flag("--json", common.json, "print JSON");
    app.add_option("--workers", common.workers, "worker threads (0: OpenMP default)");

    // constants
    auto* constants = app.add_subcommand("constants", "structural constants for (r, ell)");
    Model cm;
    std::optional<unsigned> cn;
    unsigned cap = kDefaultAutCap;
    constants->add_option("--n", cn, "also report Aut(C) and N_C for this n");
    constants->add_option("--r", cm.r)->capture_default_str();
    constants->add_option("--ell", cm.ell)->capture_default_str();
    constants->add_option("--K", cm.K, "A-table length")->default_val(8);
    constants->add_option("--aut-cap", cap, "largest vertex count for brute-force automorphisms")->capture_default_str();

    // sample
    auto* sample = app.add_subcommand("sample", "sample a hypergraph");
    Model sm;
    sm.add_to(sample);
    std::string model = "null", out_path;
    unsigned overlap_t = 0;
    bool binary = false;
    sample->add_option("--model", model, "null | planted | double")->capture_default_str();
    sample->add_option("--overlap-t", overlap_t, "shared edges of the two planted cycles");
    sample->add_option("--seed", common.seed)->capture_default_str();
    sample->add_option("--stream", common.stream)->capture_default_str();
    sample->add_option("--out", out_path, "write the hypergraph here");
    sample->add_flag("--binary", binary, "binary file format");

    // count
    auto* count = app.add_subcommand("count", "exact number of Hamilton ell-cycles");
    std::string input, method = "auto";
    unsigned ell = 2;
    std::size_t list = 0;
    count->add_option("--input", input, "hypergraph file")->required();
    count->add_option("--ell", ell)->capture_default_str();
    count->add_option("--method", method, "auto | backtracking | dp")->capture_default_str();
    count->add_option("--list", list, "also list the first copies (at most this many)");

    // stat-y
    auto* staty = app.add_subcommand("stat-y", "Y(P_1..P_K), and Y_N with --c");
    double yp = 0;
    std::optional<double> yc;
    unsigned yK = 3;
    staty->add_option("--input", input, "hypergraph file")->required();
    staty->add_option("--ell", ell)->capture_default_str();
    staty->add_option("--p", yp, "edge probability")->required();
    staty->add_option("--c", yc, "density ratio for the weights t_k");
    staty->add_option("--K", yK)->capture_default_str();

    // theory
    auto* theory = app.add_subcommand("theory", "thresholds, lognormal parameters, mixture law");
    Model tm;
    tm.add_to(theory, false);
    std::optional<double> target_m;
    unsigned jmax = 10;
    theory->add_option("--m", target_m, "also tabulate the Poisson-lognormal mixture with this mean");
    theory->add_option("--jmax", jmax, "mixture table length")->capture_default_str();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact small-n checks");
    oracle->require_subcommand(1);
    oracle->fallthrough();
    Model om;
    std::uint64_t max_cycles = 5000;
    auto* o_overlap = oracle->add_subcommand("overlap", "overlap distribution of cycle pairs");
    auto* o_second = oracle->add_subcommand("second-moment", "second-moment identity, exactly");
    auto* o_mean = oracle->add_subcommand("planted-mean", "planted means of Y(P_j)");
    auto* o_mgf = oracle->add_subcommand("planted-mgf", "E[X] against E*[exp(-Y_N)]");
    auto* o_big = oracle->add_subcommand("big-overlap", "large overlaps at E[Z] = log n");
    for (auto* sub : {o_overlap, o_second, o_mean, o_mgf, o_big}) {
        sub->add_option("--n", om.n)->required();
        sub->add_option("--r", om.r)->capture_default_str();
        sub->add_option("--ell", om.ell)->capture_default_str();
        sub->add_option("--seed", common.seed)->capture_default_str();
        sub->add_option("--trials", common.trials);
        sub->add_option("--max-cycles", max_cycles)->capture_default_str();
    }
    for (auto* sub : {o_second, o_mean, o_mgf}) {
        auto* po = sub->add_option("--p", om.p);
        auto* co = sub->add_option("--c", om.c);
        po->excludes(co);
        sub->add_option("--K", om.K);
    }

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run an experiment config");
    std::string config_path;
    std::optional<std::uint64_t> x_seed;
    std::optional<unsigned> x_trials;
    std::optional<std::string> x_out;
    experiment->add_option("--config", config_path, "key = value config file")->required();
    experiment->add_option("--seed", x_seed, "override the root seed");
    experiment->add_option("--trials", x_trials, "override the trial count");
    experiment->add_option("--out-dir", x_out, "override the output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (common.workers > 0) omp_set_num_threads(common.workers);

    try {
        if (*constants) {
            const StructureConstants sc = structure_constants(cn, cm.r, cm.ell, cm.K, cap);
            Json j{{"r", cm.r},
                   {"ell", cm.ell},
                   {"s", sc.geometry.s},
                   {"t", sc.geometry.t},
                   {"lambda", sc.geometry.lambda},
                   {"table", table_json(sc.table)}};
            if (cn) {
                j["n"] = *cn;
                j["aut_cycle"] = to_decimal(sc.aut_cycle);
                j["n_cycles"] = to_decimal(sc.n_cycles);
                j["aut_cycle_from_closed_form"] = sc.aut_cycle_from_closed_form;
            }
            print(j, common.json);
        } else if (*sample) {
            const Params params = Params::make(sm.n, sm.r, sm.ell, sm.density());
            const Seed seed{common.seed, common.stream};
            Json j{{"params", params.describe()}, {"seed", seed_json(seed)}, {"model", model}};
            Hypergraph g;
            if (model == "null") {
                g = sample_gnp(params, seed);
            } else if (model == "planted") {
                auto inst = plant_cycle(params, seed);
                j["planted"] = Json::array({cycle_json(inst.planted[0])});
                g = std::move(inst.graph);
            } else if (model == "double") {
                auto inst = plant_two_cycles(params, overlap_t, seed);
                j["planted"] = Json::array({cycle_json(inst.planted[0]), cycle_json(inst.planted[1])});
                j["overlap_t"] = inst.overlap_t;
                j["scheme"] = inst.scheme;
                g = std::move(inst.graph);
            } else {
                throw UsageError("--model must be null, planted or double");
            }
            j["edge_count"] = g.edge_count();
            if (!out_path.empty()) {
                save_hypergraph(out_path, g, binary);
                j["out"] = out_path;
            } else if (!common.json) {
                write_text(std::cout, g);
                return 0;
            }
            print(j, common.json);
        } else if (*count) {
            const Hypergraph g = load_hypergraph(input);
            CountOptions co;
            if (method == "backtracking") co.method = CountMethod::Backtracking;
            else if (method == "dp") co.method = CountMethod::SubsetDp;
            else if (method != "auto") throw UsageError("--method must be auto, backtracking or dp");
            const CountResult res = count_hamilton(g, ell, co);
            Json j{{"n", g.n()},
                   {"r", g.r()},
                   {"ell", ell},
                   {"edge_count", g.edge_count()},
                   {"Z", to_decimal(res.count)},
                   {"method", to_string(res.method)},
                   {"ordered_count", to_decimal(res.ordered_count)},
                   {"divisor", to_decimal(res.divisor)},
                   {"nodes_explored", res.nodes_explored},
                   {"elapsed_s", res.elapsed.count()}};
            if (list > 0) {
                Json copies = Json::array();
                for (const auto& c : enumerate_hamilton(g, ell)) {
                    if (copies.size() == list) break;
                    copies.push_back(cycle_json(c));
                }
                j["copies"] = copies;
            }
            print(j, common.json);
        } else if (*staty) {
            const Hypergraph g = load_hypergraph(input);
            Json j{{"n", g.n()}, {"r", g.r()}, {"ell", ell}, {"p", yp}, {"K", yK}};
            if (yc) {
                const YCombined y = y_combined(g, ell, yp, *yc, yK);
                Json ys = Json::array();
                for (const auto& t : y.terms) ys.push_back(t.value);
                j["Y"] = ys;
                j["weights"] = y.weights;
                j["c"] = *yc;
                j["Y_N"] = y.value;
                j["tail_bound"] = y.tail_bound;
            } else {
                Json ys = Json::array();
                for (const auto& t : y_statistics(g, ell, yp, yK)) ys.push_back(t.value);
                j["Y"] = ys;
            }
            print(j, common.json);
        } else if (*theory) {
            const double c = tm.c ? *tm.c : (tm.n && tm.p ? c_from_p(tm.n, tm.r, tm.ell, *tm.p) : 1.0);
            const unsigned K = tm.K ? tm.K : default_truncation(tm.r, tm.ell);
            const LimitLawParams law = lognormal_params(tm.r, tm.ell, c, K);
            Json j{{"r", tm.r}, {"ell", tm.ell}, {"c", c}, {"K", K}, {"mu", law.mu}, {"sigma2", law.sigma2},
                   {"tail_bound", law.tail}, {"terms", law.terms}};
            if (tm.n) {
                const double p = tm.p ? *tm.p : p_star(tm.n, tm.r, tm.ell, c);
                const ExpectedZ ez = expected_Z(tm.n, tm.r, tm.ell, p);
                j["n"] = tm.n;
                j["p"] = p;
                j["p_star"] = p_star(tm.n, tm.r, tm.ell, 1.0);
                j["expected_Z"] = ez.value;
                j["log_expected_Z"] = ez.log_value;
                if (target_m) j["p_for_target_m"] = p_for_expectation(tm.n, tm.r, tm.ell, *target_m);
            }
            if (target_m) {
                const LimitLawParams ref = reference_law(tm.r, tm.ell, c, K);
                Json rows = Json::array();
                for (unsigned jj = 0; jj <= jmax; ++jj) {
                    rows.push_back(Json{{"j", jj},
                                        {"pmf", mixture_pmf(*target_m, ref, jj)},
                                        {"cdf", mixture_cdf(*target_m, ref, jj)},
                                        {"poisson_pmf", poisson_pmf(jj, *target_m)}});
                }
                j["mixture_sigma2"] = ref.sigma2;
                j["mixture"] = rows;
            }
            print(j, common.json);
        } else if (*oracle) {
            const Seed seed{common.seed, 0};
            if (*o_overlap) {
                const auto d = overlap_distribution(om.n, om.r, om.ell, max_cycles);
                Json counts = Json::array();
                for (const auto& x : d.counts) counts.push_back(to_decimal(x));
                print(Json{{"n", om.n}, {"r", om.r}, {"ell", om.ell}, {"m", d.m}, {"n_cycles", to_decimal(d.n_cycles)},
                           {"counts", counts}, {"total", to_decimal(d.total())}},
                      common.json);
            } else if (*o_second) {
                const double p = om.density();
                const auto rep = second_moment_identity_check(om.n, om.r, om.ell, p, max_cycles);
                print(Json{{"n", om.n}, {"r", om.r}, {"ell", om.ell}, {"p", p},
                           {"first_moment", to_decimal(rep.first_moment)},
                           {"second_direct", to_decimal(rep.second_direct)},
                           {"second_from_overlap", to_decimal(rep.second_from_overlap)},
                           {"difference", to_decimal(rep.difference)},
                           {"relative_difference", rep.relative_difference},
                           {"variance", to_decimal(rep.variance)},
                           {"ratio", rep.ratio}},
                      common.json);
            } else if (*o_mean) {
                const double p = om.density();
                const auto rep = planted_mean_check(om.n, om.r, om.ell, p, om.K ? om.K : 3, common.trials, seed,
                                                    common.workers);
                Json rows = Json::array();
                for (const auto& row : rep.rows) {
                    rows.push_back(Json{{"j", row.j}, {"closed_form", row.closed_form}, {"exact", row.exact},
                                        {"asymptotic_mu", row.asymptotic}, {"mc_mean", row.mc_mean},
                                        {"mc_se", row.mc_se}, {"within_band", row.within_band}});
                }
                print(Json{{"n", om.n}, {"r", om.r}, {"ell", om.ell}, {"p", p}, {"c_n", rep.c},
                           {"trials", rep.trials}, {"seed", seed_json(seed)}, {"rows", rows}},
                      common.json);
            } else if (*o_mgf) {
                const double p = om.density();
                const double c = om.ratio();
                const auto rep = planted_mgf_check(om.n, om.r, om.ell, p, c, om.K ? om.K : 3,
                                                   common.trials ? common.trials : 200, seed, common.workers);
                print(Json{{"n", om.n}, {"r", om.r}, {"ell", om.ell}, {"p", p}, {"c", c}, {"K", rep.K},
                           {"trials", rep.trials}, {"seed", seed_json(seed)},
                           {"null_mean_x", rep.null_mean_x}, {"null_se", rep.null_se},
                           {"planted_mean", rep.planted_mean}, {"planted_se", rep.planted_se},
                           {"bands_overlap", rep.bands_overlap}, {"sigma2_K", rep.sigma2},
                           {"reference", rep.reference}},
                      common.json);
            } else if (*o_big) {
                const auto rep = big_overlap_scan(om.n, om.r, om.ell, common.trials ? common.trials : 200, seed,
                                                  common.workers);
                Json ex = Json::array();
                for (const auto& [trial, t] : rep.examples) ex.push_back(Json{{"trial", trial}, {"overlap", t}});
                print(Json{{"n", om.n}, {"r", om.r}, {"ell", om.ell}, {"m", rep.m}, {"p", rep.p},
                           {"window", Json::array({rep.window_low, rep.m - 1})}, {"trials", rep.trials},
                           {"seed", seed_json(seed)}, {"trials_with_pair", rep.trials_with_pair},
                           {"frequency", rep.frequency()}, {"pairs_in_window", rep.pairs_in_window},
                           {"pairs_m_minus_one", rep.pairs_m_minus_one}, {"max_overlap", rep.max_overlap},
                           {"examples", ex}},
                      common.json);
            }
        } else if (*experiment) {
            ExperimentConfig cfg = ExperimentConfig::load(config_path);
            if (x_seed) cfg.seed = *x_seed;
            if (x_trials) cfg.trials = *x_trials;
            if (x_out) cfg.out_dir = *x_out;
            if (common.workers > 0) cfg.workers = common.workers;
            const ExperimentResult res = run_experiment(cfg);
            emit_outputs(res);
            if (common.json) {
                std::cout << summary_json(res);
            } else {
                for (const auto& [k, v] : res.stats) std::cout << k << " = " << v << "\n";
                for (const auto& g : res.gates) {
                    std::cout << (g.pass ? "PASS " : "FAIL ") << g.statistic_name << " = " << g.value << " in ["
                              << g.lower << ", " << g.upper << "]\n";
                }
            }
            return res.pass ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
