#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hamlaw/errors.hpp"
#include "hamlaw/harness.hpp"

using namespace hamlaw;

namespace {

std::string csv_of(const ExperimentResult& res) {
    std::ostringstream os;
    write_csv(os, res.records, res.K);
    return os.str();
}

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("hamlaw_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

ExperimentConfig small(const std::string& experiment) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    cfg.n = 9;
    cfg.r = 3;
    cfg.ell = 2;
    cfg.c = 1.2;
    cfg.K = 3;
    cfg.trials = 40;
    cfg.seed = 77;
    return cfg;
}

}  // namespace

TEST_CASE("config round-trips through its text form") {
    ExperimentConfig cfg = small("clt");
    cfg.c = 0.1 + 0.2;  // not exactly representable in short decimal
    cfg.model = "double";
    cfg.overlap_t = 2;
    cfg.timing = true;
    cfg.gates["mean_1"] = {-0.125, 1.0 / 3.0};
    cfg.out_dir = "out/x";
    const ExperimentConfig back = ExperimentConfig::parse(cfg.to_text());
    CHECK(back == cfg);
    CHECK(back.to_text() == cfg.to_text());
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(ExperimentConfig::parse("n = 9\nbogus = 1\n"), UsageError);
    CHECK_THROWS_AS(ExperimentConfig::parse("n = 9\nn = 10\n"), UsageError);
    CHECK_THROWS_AS(ExperimentConfig::parse("n = nine\n"), UsageError);
    CHECK_THROWS_AS(ExperimentConfig::parse("gate.x = 1\n"), UsageError);
    ExperimentConfig two = small("clt");
    two.p = 0.3;
    CHECK_THROWS_AS(two.validate(), UsageError);
    ExperimentConfig none = small("clt");
    none.c.reset();
    CHECK_THROWS_AS(none.validate(), UsageError);
    ExperimentConfig bad_exp = small("nonsense");
    CHECK_THROWS_AS(bad_exp.validate(), UsageError);
    ExperimentConfig poisson = small("poisson");
    CHECK_THROWS_AS(poisson.validate(), UsageError);  // needs target_m
    ExperimentConfig conc = small("concentration");
    CHECK_THROWS_AS(conc.validate(), UsageError);  // needs ell >= 3
    CHECK(ExperimentConfig::parse("# comment\nexperiment = clt # trailing\n").experiment == "clt");
    ExperimentConfig dflt = small("clt");
    dflt.K.reset();
    dflt.n = 60;
    CHECK(dflt.truncation() == 4);
}

TEST_CASE("replay: same seed gives identical CSV, independent of worker count") {
    ExperimentConfig cfg = small("lognormal");
    cfg.workers = 1;
    const std::string a = csv_of(run_experiment(cfg));
    cfg.workers = 3;
    const std::string b = csv_of(run_experiment(cfg));
    CHECK(a == b);
    cfg.seed = 78;
    CHECK(csv_of(run_experiment(cfg)) != a);
    CHECK(a.rfind("trial,seed,edge_count,Z,Y_1,Y_2,Y_3,Y_N,X,elapsed_ms\n", 0) == 0);
}

TEST_CASE("concentration at p = 1 is deterministic") {
    ExperimentConfig cfg;
    cfg.experiment = "concentration";
    cfg.n = 8;
    cfg.r = 4;
    cfg.ell = 3;
    cfg.p = 1.0;
    cfg.trials = 5;
    const auto res = run_experiment(cfg);
    CHECK(res.stats.at("mean_ratio") == doctest::Approx(1.0));
    CHECK(res.stats.at("cv2") == 0.0);
    for (const auto& rec : res.records) CHECK(*rec.Z == res.records[0].Z.value());
}

TEST_CASE("every experiment runs and reports its statistics") {
    auto clt = small("clt");
    for (const char* model : {"null", "planted", "double"}) {
        clt.model = model;
        clt.overlap_t = 3;
        const auto res = run_experiment(clt);
        CHECK(res.stats.count("cov_1_3"));
        CHECK(res.stats.count("max_band_z"));
    }
    auto poisson = small("poisson");
    poisson.c.reset();
    poisson.target_m = 1.5;
    poisson.n = 12;
    const auto pr = run_experiment(poisson);
    CHECK(pr.stats.count("tv_mixture"));
    CHECK(pr.stats.count("ks_edge_counts"));
    CHECK(pr.thinned_records.size() == poisson.trials);
    auto oracle = small("oracle-suite");
    oracle.n = 7;
    oracle.p = 0.5;
    oracle.c.reset();
    const auto orc = run_experiment(oracle);
    CHECK(orc.stats.at("overlap_total_ok") == 1.0);
    CHECK(orc.stats.at("overlap_m_minus_one") == 0.0);
    CHECK(orc.stats.at("second_moment_exact_zero") == 1.0);
    CHECK(orc.stats.at("planted_mean_max_rel_gap") < 1e-9);
}

TEST_CASE("run_config exit codes and outputs") {
    const auto dir = temp_dir("runconfig");
    CHECK(run_config((dir / "missing.cfg").string()) == 2);

    ExperimentConfig cfg = small("lognormal");
    cfg.trials = 10;
    cfg.out_dir = (dir / "out").string();
    cfg.gates["mean_ratio"] = {10, 11};
    { std::ofstream(dir / "impossible.cfg") << cfg.to_text(); }
    CHECK(run_config((dir / "impossible.cfg").string()) == 1);
    CHECK(std::filesystem::exists(dir / "out" / "trials.csv"));
    CHECK(std::filesystem::exists(dir / "out" / "summary.json"));

    cfg.gates.clear();
    cfg.gates["mean_ratio"] = {0, 100};
    { std::ofstream(dir / "ok.cfg") << cfg.to_text(); }
    CHECK(run_config((dir / "ok.cfg").string()) == 0);

    cfg.gates.clear();
    cfg.gates["no_such_statistic"] = {0, 1};
    { std::ofstream(dir / "unknown.cfg") << cfg.to_text(); }
    CHECK(run_config((dir / "unknown.cfg").string()) == 2);

    std::ifstream js(dir / "out" / "summary.json");
    std::stringstream ss;
    ss << js.rdbuf();
    CHECK(ss.str().find("\"schema\": 1") != std::string::npos);
}

TEST_CASE("summary statistics are recomputable from the CSV") {
    ExperimentConfig cfg = small("lognormal");
    const auto res = run_experiment(cfg);
    std::istringstream csv(csv_of(res));
    std::string line;
    std::getline(csv, line);
    double sum_x = 0;
    unsigned rows = 0;
    while (std::getline(csv, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        sum_x += std::stod(f.at(8));
        ++rows;
    }
    CHECK(rows == cfg.trials);
    CHECK(sum_x / rows == doctest::Approx(res.stats.at("mean_x")).epsilon(1e-12));
}

TEST_CASE("shipped configs parse, validate and round-trip") {
    unsigned seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(HAMLAW_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        const ExperimentConfig cfg = ExperimentConfig::load(entry.path().string());
        CHECK_NOTHROW(cfg.validate());
        CHECK(ExperimentConfig::parse(cfg.to_text()) == cfg);
        ++seen;
    }
    CHECK(seen >= 5);
}
