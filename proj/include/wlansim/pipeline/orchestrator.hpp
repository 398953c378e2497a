#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "wlansim/adapter/backend.hpp"
#include "wlansim/mab/episode.hpp"
#include "wlansim/pipeline/marketplace.hpp"
#include "wlansim/pipeline/underlay.hpp"
#include "wlansim/wlan/dcf.hpp"
#include "wlansim/wlan/scenario.hpp"

#include <json.hpp>

namespace wlansim::pipeline {

// How the orchestrator reaches a simulator: directly in-process, or through
// the standardized adapter commands. Both must yield identical reports for
// identical inputs.
class SimulationRunner {
public:
    virtual ~SimulationRunner() = default;
    virtual wlan::ThroughputReport run(const wlan::Scenario& s, sim::SimTime duration,
                                       std::uint64_t seed) const = 0;
    virtual std::string name() const = 0;
};

class DirectRunner final : public SimulationRunner {
public:
    wlan::ThroughputReport run(const wlan::Scenario& s, sim::SimTime duration,
                               std::uint64_t seed) const override;
    std::string name() const override { return "direct"; }
};

// Drives a fresh reference backend per run via Start/Collect.
class AdapterRunner final : public SimulationRunner {
public:
    wlan::ThroughputReport run(const wlan::Scenario& s, sim::SimTime duration,
                               std::uint64_t seed) const override;
    std::string name() const override { return "adapter"; }
};

// Features extracted from an underlay: exact management-plane knowledge
// (nodes, loads, radio capabilities) plus channel parameters estimated from
// probe measurements.
struct ScenarioSpec {
    std::vector<wlan::Bss> bss_list;
    std::vector<wlan::WallCount> walls;
    std::vector<double> power_levels_dbm;
    double default_power_dbm = 23.0;
    double estimated_pl0_db = 0.0;
    double estimated_exponent = 0.0;
    int probes_used = 0;
};

struct SandboxReport {
    std::string model_id;
    double baseline_mbps = 0.0;
    std::vector<double> candidate_powers_dbm;
    double candidate_mbps = 0.0;
    double improvement_pct = 0.0;
    bool passed = false;
    std::string failure_reason;  // empty when passed
    std::vector<std::uint64_t> learning_seeds;
    std::vector<std::uint64_t> eval_seeds;

    nlohmann::json to_json() const;
    std::string csv() const;
};

struct MonitoringReport {
    std::vector<std::string> bss_ids;
    std::vector<double> pre_mbps;
    std::vector<double> post_mbps;
    double pre_aggregate_mbps = 0.0;
    double post_aggregate_mbps = 0.0;
    double improvement_pct = 0.0;
    sim::SimTime window_us = 0;
    int samples_per_window = 0;

    nlohmann::json to_json() const;
    std::string csv() const;
};

struct PipelineConfig {
    std::vector<std::string> use_case = {"tpc-obss"};
    double threshold_pct = 20.0;
    int max_models = 3;
    std::vector<std::uint64_t> learning_seeds = {1, 2};
    std::vector<std::uint64_t> eval_seeds = {101, 102, 103};
    int iterations = 200;
    double iter_duration_s = 5.0;
    double eval_duration_s = 10.0;
    double monitor_duration_s = 10.0;
    int monitor_samples = 10;
    std::uint64_t monitor_seed = 777;
    int probe_count = 16;

    nlohmann::json to_json() const;
    static PipelineConfig from_json(const nlohmann::json& j);
};

struct PipelineResult {
    SandboxReport sandbox;                  // the passing evaluation
    MonitoringReport monitoring;
    std::vector<SandboxReport> attempts;    // every evaluation, in order
};

class PipelineExhausted : public std::runtime_error {
public:
    explicit PipelineExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct PathLossFit {
    double pl0_db = 0.0;
    double exponent = 0.0;
};

// Least squares of rx power on 10*log10(distance): the slope is the negated
// exponent, the intercept is ref_tx - pl0. Needs >= 2 distinct distances.
PathLossFit fit_path_loss(const std::vector<ProbeSample>& samples, double ref_tx_dbm);

// Step 1: probe the underlay and fit the log-distance model.
ScenarioSpec extract_features(const UnderlayHandle& underlay, int probe_count);

// Step 2: build the sandbox scenario from the spec plus default constants.
wlan::Scenario prepare_sandbox(const ScenarioSpec& spec);

// Step 3: best-ranked matching model. Throws NoModelError when no model
// carries a requested tag.
class NoModelError : public std::runtime_error {
public:
    explicit NoModelError(const std::string& what) : std::runtime_error(what) {}
};
ModelDescriptor select_model(const Marketplace& m, const std::vector<std::string>& tags);

// Steps 4-5: train the model's agents in the sandbox, derive the converged
// configuration (per-BSS modal arm over the final 25% of iterations, modal
// share >= 40% required), and score it by fixed-configuration re-simulation
// against the default-power baseline.
SandboxReport evaluate_in_sandbox(const wlan::Scenario& sandbox,
                                  const ModelDescriptor& model, double threshold_pct,
                                  const PipelineConfig& cfg,
                                  const SimulationRunner& runner);

// Steps 1-8 end to end. On a failing evaluation the next-ranked model is
// tried, up to cfg.max_models; if none passes, PipelineExhausted is thrown
// and the underlay is left untouched. On success the configuration is
// deployed, pre/post windows are monitored, and the outcome is appended to
// the model's marketplace record.
PipelineResult run_pipeline(UnderlayHandle& underlay, const Marketplace& marketplace,
                            const PipelineConfig& cfg, const SimulationRunner& runner);

// Fixed-configuration measurement through the sandbox path; equals a direct
// simulate_scenario call with the same seed.
wlan::ThroughputReport measure_fixed_config(const wlan::Scenario& s,
                                            const std::vector<double>& powers_dbm,
                                            sim::SimTime duration, std::uint64_t seed,
                                            const SimulationRunner& runner);

struct SweepRow {
    double duration_s = 0.0;
    double mean_exec_ms = 0.0;
    double cov = 0.0;
    bool degenerate = false;  // fewer than 2 seeds
};

// Execution-time versus output-variability tradeoff: per duration, runs
// `seeds_per_point` seeded simulations, reporting wall-clock mean and the
// coefficient of variation of aggregate throughput.
std::vector<SweepRow> stability_sweep(const wlan::Scenario& s,
                                      const std::vector<double>& durations_s,
                                      int seeds_per_point, std::uint64_t base_seed,
                                      const SimulationRunner& runner);

// `duration_s,mean_exec_ms,cov`
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace wlansim::pipeline
