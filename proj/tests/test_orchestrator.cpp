#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "support.hpp"
#include "wlansim/pipeline/orchestrator.hpp"
#include "wlansim/wlan/radio.hpp"
#include "wlansim/wlan/scenario_io.hpp"

using namespace wlansim;
using namespace wlansim::pipeline;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("wlansim-orch-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static inline int counter = 0;
};

// Small but convergent: one learning run long enough for the exploration
// decay to concentrate the trailing window.
PipelineConfig fast_config() {
    PipelineConfig cfg;
    cfg.learning_seeds = {1};
    cfg.eval_seeds = {101, 102};
    cfg.iterations = 200;
    cfg.iter_duration_s = 0.5;
    cfg.eval_duration_s = 1.0;
    cfg.monitor_duration_s = 2.0;
    cfg.monitor_samples = 4;
    return cfg;
}

}  // namespace

TEST_CASE("fit_path_loss recovers exact synthetic samples") {
    const wlan::ChannelParams ch = wlan::default_channel();
    std::vector<ProbeSample> samples;
    for (double d : {1.5, 3.0, 8.0, 15.0, 30.0, 55.0}) {
        samples.push_back(ProbeSample{d, 23.0 - wlan::path_loss_db(d, 0, ch)});
    }
    const PathLossFit fit = fit_path_loss(samples, 23.0);
    CHECK(fit.exponent == doctest::Approx(3.5).epsilon(0.001));
    CHECK(fit.pl0_db == doctest::Approx(40.0).epsilon(0.001));

    CHECK_THROWS_AS(fit_path_loss({}, 23.0), wlan::ConfigError);
    CHECK_THROWS_AS(fit_path_loss({ProbeSample{5.0, -60.0}, ProbeSample{5.0, -61.0}}, 23.0),
                    wlan::ConfigError);
}

TEST_CASE("extract_features estimates the jittered exponent from probes") {
    for (std::uint64_t seed : {1ull, 4ull, 7ull, 42ull}) {
        UnderlayHandle u(wlan::canonical_scenario(), seed);
        const ScenarioSpec spec = extract_features(u, 16);
        CHECK(std::abs(spec.estimated_exponent - u.hidden_exponent()) < 0.3);
        CHECK(spec.bss_list.size() == 2);
    }
    UnderlayHandle u(wlan::canonical_scenario(), 3);
    CHECK_THROWS_AS(extract_features(u, 0), wlan::ConfigError);
}

TEST_CASE("prepare_sandbox round trip against the source scenario") {
    const wlan::Scenario source = wlan::canonical_scenario();
    UnderlayHandle u(source, 42);
    const ScenarioSpec spec = extract_features(u, 24);
    const wlan::Scenario sandbox = prepare_sandbox(spec);

    REQUIRE(sandbox.bss_list.size() == source.bss_list.size());
    for (std::size_t i = 0; i < source.bss_list.size(); ++i) {
        CHECK(sandbox.bss_list[i].ap.position.x == source.bss_list[i].ap.position.x);
        CHECK(sandbox.bss_list[i].ap.position.y == source.bss_list[i].ap.position.y);
        CHECK(sandbox.bss_list[i].tx_power_dbm == source.default_power_dbm);
    }
    CHECK(std::abs(sandbox.channel.exponent - u.hidden_exponent()) < 0.3);
    CHECK(sandbox.power_levels_dbm == source.power_levels_dbm);

    SUBCASE("missing fields are configuration errors") {
        ScenarioSpec broken = spec;
        broken.power_levels_dbm.clear();
        CHECK_THROWS_AS(prepare_sandbox(broken), wlan::ConfigError);
        ScenarioSpec no_bss = spec;
        no_bss.bss_list.clear();
        CHECK_THROWS_AS(prepare_sandbox(no_bss), wlan::ConfigError);
    }
}

TEST_CASE("select_model picks the best-ranked match") {
    TempDir dir;
    Marketplace mkt{dir.path};
    ModelDescriptor a;
    a.id = "a";
    a.algorithm = "eps-greedy";
    a.use_case = {"tpc-obss"};
    a.maturity = "beta";
    a.observed_improvement = {80.0};
    a.eval_count = 1;
    ModelDescriptor b = a;
    b.id = "b";
    b.observed_improvement = {10.0};
    mkt.save(a);
    mkt.save(b);
    CHECK(select_model(mkt, {"tpc-obss"}).id == "a");
    CHECK_THROWS_AS(select_model(mkt, {"routing"}), NoModelError);

    TempDir single_dir;
    Marketplace single{single_dir.path};
    mkt.save(b);
    single.save(b);
    CHECK(select_model(single, {"tpc-obss"}).id == "b");
}

TEST_CASE("plumbing neutrality: sandbox path equals a direct engine call") {
    const wlan::Scenario s = wlan::canonical_scenario();
    const DirectRunner runner;
    const auto via_path =
        measure_fixed_config(s, {7.0, 7.0}, sim::seconds(1.0), 55, runner);
    wlan::Scenario direct_s = s;
    wlan::apply_powers(direct_s, {7.0, 7.0});
    const auto direct = wlan::simulate_scenario(direct_s, sim::seconds(1.0), 55);
    CHECK(via_path == direct);
}

TEST_CASE("evaluate_in_sandbox") {
    const wlan::Scenario sandbox = wlan::canonical_scenario();
    const DirectRunner runner;
    const PipelineConfig cfg = fast_config();

    ModelDescriptor model;
    model.id = "probe";
    model.algorithm = "eps-greedy";
    model.hyperparameters = {{"eps0", 1.0}, {"decay", 0.995}, {"reward_mode", "team"}};
    model.use_case = {"tpc-obss"};
    model.maturity = "mature";

    SUBCASE("default model converges and clears a 20% threshold") {
        const SandboxReport r = evaluate_in_sandbox(sandbox, model, 20.0, cfg, runner);
        CHECK(r.passed);
        CHECK(r.improvement_pct >= 20.0);
        REQUIRE(r.candidate_powers_dbm.size() == 2);
        CHECK(r.candidate_powers_dbm[0] < 23.0);
        CHECK(r.candidate_powers_dbm[1] < 23.0);
        CHECK(r.baseline_mbps > 0.0);
    }
    SUBCASE("an unreachable threshold fails") {
        const SandboxReport r = evaluate_in_sandbox(sandbox, model, 1000.0, cfg, runner);
        CHECK_FALSE(r.passed);
        CHECK_FALSE(r.failure_reason.empty());
    }
    SUBCASE("a model pinned to the default power cannot improve") {
        ModelDescriptor pinned = model;
        pinned.hyperparameters["arms_dbm"] = std::vector<double>{23.0};
        const SandboxReport r = evaluate_in_sandbox(sandbox, pinned, 20.0, cfg, runner);
        CHECK_FALSE(r.passed);
        CHECK(r.improvement_pct == doctest::Approx(0.0).epsilon(0.05));
        CHECK(r.candidate_powers_dbm == std::vector<double>{23.0, 23.0});
    }
}

TEST_CASE("run_pipeline deploys, monitors, and updates the marketplace") {
    TempDir dir;
    Marketplace mkt{dir.path};
    write_default_marketplace(mkt);
    UnderlayHandle underlay(wlan::canonical_scenario(), 1);
    const DirectRunner runner;
    const PipelineConfig cfg = fast_config();

    const std::vector<double> before = underlay.current_powers();
    CHECK(before == std::vector<double>{23.0, 23.0});

    const PipelineResult result = run_pipeline(underlay, mkt, cfg, runner);
    CHECK(result.sandbox.passed);
    CHECK(result.monitoring.improvement_pct >= 30.0);
    CHECK(underlay.current_powers() == result.sandbox.candidate_powers_dbm);
    for (double p : result.sandbox.candidate_powers_dbm) CHECK(p < 23.0);

    const auto updated = mkt.load(result.sandbox.model_id);
    REQUIRE(updated.has_value());
    CHECK(updated->eval_count == 1);
    REQUIRE(updated->observed_improvement.size() == 1);
    CHECK(updated->observed_improvement[0] ==
          doctest::Approx(result.monitoring.improvement_pct));
}

TEST_CASE("a failing top-ranked model falls through to the next one") {
    TempDir dir;
    Marketplace mkt{dir.path};
    // Ranks first (same maturity as the stock eps-greedy, earlier id) but is
    // pinned to the default power, so its sandbox evaluation cannot improve.
    ModelDescriptor pinned;
    pinned.id = "aaa-pinned";
    pinned.algorithm = "eps-greedy";
    pinned.hyperparameters = {{"eps0", 1.0},
                              {"decay", 0.995},
                              {"reward_mode", "team"},
                              {"arms_dbm", std::vector<double>{23.0}}};
    pinned.use_case = {"tpc-obss"};
    pinned.maturity = "mature";
    mkt.save(pinned);
    write_default_marketplace(mkt);
    REQUIRE(mkt.ranked_for({"tpc-obss"}).front().id == "aaa-pinned");

    UnderlayHandle underlay(wlan::canonical_scenario(), 1);
    const DirectRunner runner;
    const PipelineResult result = run_pipeline(underlay, mkt, fast_config(), runner);
    REQUIRE(result.attempts.size() == 2);
    CHECK_FALSE(result.attempts[0].passed);
    CHECK(result.attempts[0].model_id == "aaa-pinned");
    CHECK(result.sandbox.passed);
    CHECK(result.sandbox.model_id == "tpc-eps-greedy");
    // only the deployed model gets bookkeeping
    CHECK(mkt.load("aaa-pinned")->eval_count == 0);
    CHECK(mkt.load("tpc-eps-greedy")->eval_count == 1);
}

TEST_CASE("underlay hides its perturbations behind measurements") {
    wlan::Scenario base = wlan::canonical_scenario();
    base.bss_list[0].traffic_load = wlan::TrafficLoad::finite(30.0);
    base.bss_list[1].traffic_load = wlan::TrafficLoad::finite(40.0);
    UnderlayHandle u(base, 9);
    // exponent jitter stays inside +/-0.2, traffic jitter inside +/-10%
    CHECK(std::abs(u.hidden_exponent() - 3.5) <= 0.2);
    const auto& observed = u.observed_bss();
    CHECK(observed[0].traffic_load.mbps == doctest::Approx(30.0).epsilon(0.101));
    CHECK(observed[1].traffic_load.mbps == doctest::Approx(40.0).epsilon(0.101));
    const bool perturbed = observed[0].traffic_load.mbps != 30.0 ||
                           observed[1].traffic_load.mbps != 40.0;
    CHECK(perturbed);
    // same seed rebuilds the same underlay
    UnderlayHandle v(base, 9);
    CHECK(v.hidden_exponent() == u.hidden_exponent());
    CHECK(v.observed_bss()[0].traffic_load.mbps == observed[0].traffic_load.mbps);
}

TEST_CASE("pipeline failure leaves the underlay untouched") {
    TempDir dir;
    Marketplace mkt{dir.path};
    write_default_marketplace(mkt);
    UnderlayHandle underlay(wlan::canonical_scenario(), 1);
    const DirectRunner runner;
    PipelineConfig cfg = fast_config();
    cfg.threshold_pct = 100000.0;
    cfg.max_models = 2;

    CHECK_THROWS_AS(run_pipeline(underlay, mkt, cfg, runner), PipelineExhausted);
    CHECK(underlay.current_powers() == std::vector<double>{23.0, 23.0});
    for (const ModelDescriptor& m : mkt.load_all()) {
        CHECK(m.eval_count == 0);
        CHECK(m.observed_improvement.empty());
    }
}

TEST_CASE("pipeline is deterministic given its inputs") {
    const PipelineConfig cfg = fast_config();
    const DirectRunner runner;
    nlohmann::json first;
    for (int round = 0; round < 2; ++round) {
        TempDir dir;
        Marketplace mkt{dir.path};
        write_default_marketplace(mkt);
        UnderlayHandle underlay(wlan::canonical_scenario(), 1);
        const PipelineResult r = run_pipeline(underlay, mkt, cfg, runner);
        nlohmann::json j;
        j["sandbox"] = r.sandbox.to_json();
        j["monitoring"] = r.monitoring.to_json();
        if (round == 0) first = j;
        else CHECK(first == j);
    }
}

TEST_CASE("stability sweep") {
    const wlan::Scenario s = wlan::canonical_scenario();
    const DirectRunner runner;
    SUBCASE("single seed is degenerate with zero CoV") {
        const auto rows = stability_sweep(s, {0.5}, 1, 3, runner);
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].cov == 0.0);
        CHECK(rows[0].degenerate);
    }
    SUBCASE("wall clock grows with simulated duration") {
        const auto rows = stability_sweep(s, {0.2, 2.0}, 2, 3, runner);
        REQUIRE(rows.size() == 2);
        CHECK(rows[1].mean_exec_ms > rows[0].mean_exec_ms);
        CHECK_FALSE(rows[0].degenerate);
    }
    SUBCASE("durations must come sorted") {
        CHECK_THROWS_AS(stability_sweep(s, {2.0, 1.0}, 2, 3, runner),
                        std::invalid_argument);
    }
}

TEST_CASE("adapter-backed runner matches the direct runner through the pipeline") {
    const wlan::Scenario s = wlan::canonical_scenario();
    const DirectRunner direct;
    const AdapterRunner adapter;
    const auto a = measure_fixed_config(s, {7.0, 7.0}, sim::seconds(0.5), 9, direct);
    const auto b = measure_fixed_config(s, {7.0, 7.0}, sim::seconds(0.5), 9, adapter);
    CHECK(a == b);
}
