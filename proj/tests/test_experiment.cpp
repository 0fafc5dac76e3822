#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "cmr/experiment.hpp"

using namespace cmr;

TEST_SUITE_BEGIN("experiment");

TEST_CASE("presets instantiate the standard parameter rows") {
    const ExperimentConfig a1 = ExperimentConfig::from_preset("A-1");
    CHECK(a1.rx_elements() == 13);
    CHECK(a1.tx_elements() == 27);
    CHECK(a1.pulses == 8);
    CHECK(a1.targets == 10);
    CHECK(a1.samples == 64);
    CHECK(a1.kind == ArrayKind::Cplsa);

    const ExperimentConfig b2 = ExperimentConfig::from_preset("B-2");
    CHECK(b2.rx_elements() == 25);
    CHECK(b2.tx_elements() == 49);
    CHECK(b2.pulses == 15);
    CHECK(b2.targets == 30);
    CHECK(b2.samples == 64);
    CHECK(b2.kind == ArrayKind::Cppa);

    CHECK_THROWS_AS(ExperimentConfig::from_preset("C-9"), std::invalid_argument);
}

TEST_CASE("a noiseless trial is essentially exact") {
    ExperimentConfig cfg = ExperimentConfig::from_preset("A-1");
    cfg.trials = 1;
    cfg.seed = 12345;
    cfg.snr_grid = {std::numeric_limits<double>::infinity()};
    cfg.methods = {Method::CcpdJevd};
    const auto records = run_experiment(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].mae_rad < 1e-4);
    CHECK(records[0].scenario == "overdetermined");
    CHECK(records[0].conditions_satisfied);
}

TEST_CASE("aggregate averages per grid cell and ignores record order") {
    TrialRecord r1;
    r1.experiment = "A-1";
    r1.snr_db = 0.0;
    r1.method = Method::CcpdJevd;
    r1.trial = 0;
    r1.mae_rad = 0.1;
    r1.cpu_seconds = 1.0;
    TrialRecord r2 = r1;
    r2.trial = 1;
    r2.mae_rad = 0.3;
    r2.cpu_seconds = 3.0;

    const auto single = aggregate(std::vector<TrialRecord>{r1});
    REQUIRE(single.size() == 1);
    CHECK(single[0].mean_mae == doctest::Approx(0.1));

    const auto fwd = aggregate(std::vector<TrialRecord>{r1, r2});
    const auto rev = aggregate(std::vector<TrialRecord>{r2, r1});
    REQUIRE(fwd.size() == 1);
    CHECK(fwd[0].mean_mae == doctest::Approx(0.2));
    CHECK(fwd[0].mean_cpu == doctest::Approx(2.0));
    CHECK(fwd[0].mean_mae == rev[0].mean_mae);
    CHECK(fwd[0].trials == 2);
}

TEST_CASE("csv output matches the record schema and survives parsing") {
    std::ostringstream empty;
    write_csv({}, empty);
    CHECK(empty.str() == "experiment,snr_db,method,trial,mae_rad,cpu_seconds,converged\n");

    TrialRecord r;
    r.experiment = "B-3";
    r.snr_db = std::numeric_limits<double>::infinity();
    r.method = Method::CcpdAlsAlg;
    r.trial = 7;
    r.mae_rad = 0.012345678901234567;
    r.cpu_seconds = 1.5;
    r.converged = true;

    std::ostringstream os;
    write_csv(std::vector<TrialRecord>{r}, os);
    std::istringstream is(os.str());
    const auto parsed = parse_csv(is);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].experiment == "B-3");
    CHECK(std::isinf(parsed[0].snr_db));
    CHECK(parsed[0].method == Method::CcpdAlsAlg);
    CHECK(parsed[0].trial == 7);
    CHECK(parsed[0].mae_rad == r.mae_rad); // round-trip exact
    CHECK(parsed[0].converged);

    std::vector<TrialRecord> many(1000, r);
    std::ostringstream big;
    write_csv(many, big);
    std::size_t lines = 0;
    for (char c : big.str())
        if (c == '\n') ++lines;
    CHECK(lines == 1001);
}

TEST_CASE("json output mirrors the record fields") {
    TrialRecord r;
    r.experiment = "A-2";
    r.snr_db = -10.0;
    r.method = Method::CcpdJevd;
    r.trial = 3;
    r.mae_rad = 0.25;
    r.cpu_seconds = 0.5;
    r.converged = false;
    r.conditions_satisfied = true;
    r.scenario = "slightly single underdetermined";

    std::ostringstream os;
    write_json(std::vector<TrialRecord>{r}, os);
    const std::string s = os.str();
    CHECK(s.find("\"experiment\": \"A-2\"") != std::string::npos);
    CHECK(s.find("\"snr_db\": -10.0") != std::string::npos);
    CHECK(s.find("\"method\": \"ccpd-jevd\"") != std::string::npos);
    CHECK(s.find("\"scenario\": \"slightly single underdetermined\"") != std::string::npos);
}

TEST_CASE("snr grids parse ranges, lists, and the noiseless sentinel") {
    const auto grid = parse_snr_grid("-25:5:5");
    REQUIRE(grid.size() == 7);
    CHECK(grid.front() == -25.0);
    CHECK(grid.back() == 5.0);

    const auto list = parse_snr_grid("-5,0,inf");
    REQUIRE(list.size() == 3);
    CHECK(std::isinf(list[2]));

    CHECK_THROWS_AS(parse_snr_grid(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("1:0:5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_snr_grid("abc"), std::invalid_argument);
}

TEST_CASE("config files round-trip and override previous settings") {
    RunOptions opts;
    opts.experiment = ExperimentConfig::from_preset("B-1");
    opts.experiment.trials = 17;
    opts.experiment.seed = 99;
    opts.experiment.methods = {Method::CcpdJevd, Method::CcpdAlsRand};
    opts.experiment.measure_time = false;
    opts.format = OutputFormat::Json;
    opts.out = "records.json";

    std::ostringstream os;
    write_config(opts, os);

    RunOptions loaded;
    std::istringstream is(os.str());
    apply_config(loaded, is);
    CHECK(loaded.experiment.preset == "B-1");
    CHECK(loaded.experiment.trials == 17);
    CHECK(loaded.experiment.seed == 99);
    CHECK(loaded.experiment.targets == 20);
    CHECK(loaded.experiment.rx_elements() == 25);
    CHECK(loaded.experiment.methods == opts.experiment.methods);
    CHECK(loaded.experiment.measure_time == false);
    CHECK(loaded.format == OutputFormat::Json);
    CHECK(loaded.out == "records.json");
    loaded.experiment.validate();

    // later keys win
    RunOptions override_opts;
    std::istringstream is2("trials = 5\ntrials = 9\n");
    apply_config(override_opts, is2);
    CHECK(override_opts.experiment.trials == 9);

    RunOptions bad;
    std::istringstream is3("no_such_key = 1\n");
    CHECK_THROWS_AS(apply_config(bad, is3), std::invalid_argument);

    // preset fidelity: tampering with a pinned parameter is rejected
    RunOptions conflict;
    std::istringstream is4("preset = A-1\ntargets = 11\n");
    apply_config(conflict, is4);
    CHECK_THROWS_AS(conflict.experiment.validate(), std::invalid_argument);
}

TEST_CASE("records are bit-deterministic in the seed") {
    ExperimentConfig cfg = ExperimentConfig::from_preset("A-1");
    cfg.trials = 2;
    cfg.seed = 31337;
    cfg.snr_grid = {5.0};
    cfg.methods = {Method::CcpdJevd, Method::CcpdAlsRand};
    cfg.measure_time = false;

    const auto r1 = run_experiment(cfg);
    const auto r2 = run_experiment(cfg);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].mae_rad == r2[i].mae_rad);
        CHECK(r1[i].cpu_seconds == 0.0);
    }
}

TEST_SUITE_END();
