#include "wlansim/pipeline/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

#include "wlansim/util/text.hpp"
#include "wlansim/wlan/scenario_io.hpp"

namespace wlansim::pipeline {

using nlohmann::json;

wlan::ThroughputReport DirectRunner::run(const wlan::Scenario& s, sim::SimTime duration,
                                         std::uint64_t seed) const {
    return wlan::simulate_scenario(s, duration, seed);
}

wlan::ThroughputReport AdapterRunner::run(const wlan::Scenario& s, sim::SimTime duration,
                                          std::uint64_t seed) const {
    adapter::ReferenceBackend backend;
    adapter::Response started =
        backend.dispatch(adapter::AdapterCommand::start(s, duration, seed));
    if (!started.ok()) {
        throw std::runtime_error("adapter runner: start failed: " + started.message);
    }
    adapter::Response collected = backend.dispatch(adapter::AdapterCommand::collect());
    if (!collected.ok() || !collected.report.has_value()) {
        throw std::runtime_error("adapter runner: collect failed: " + collected.message);
    }
    return *collected.report;
}

json SandboxReport::to_json() const {
    json j;
    j["model_id"] = model_id;
    j["baseline_mbps"] = baseline_mbps;
    j["candidate_powers_dbm"] = candidate_powers_dbm;
    j["candidate_mbps"] = candidate_mbps;
    j["improvement_pct"] = improvement_pct;
    j["passed"] = passed;
    j["failure_reason"] = failure_reason;
    j["learning_seeds"] = learning_seeds;
    j["eval_seeds"] = eval_seeds;
    return j;
}

std::string SandboxReport::csv() const {
    std::string out =
        "model_id,baseline_mbps,candidate_powers,candidate_mbps,improvement_pct,passed\n";
    std::vector<std::string> powers;
    for (double p : candidate_powers_dbm) powers.push_back(util::format_double(p));
    out += util::csv_escape(model_id);
    out += ',';
    out += util::format_double(baseline_mbps);
    out += ',';
    out += util::csv_escape(util::join(powers, '/'));
    out += ',';
    out += util::format_double(candidate_mbps);
    out += ',';
    out += util::format_double(improvement_pct);
    out += ',';
    out += passed ? "1" : "0";
    out += '\n';
    return out;
}

json MonitoringReport::to_json() const {
    json j;
    json per_bss = json::array();
    for (std::size_t i = 0; i < bss_ids.size(); ++i) {
        per_bss.push_back({{"bss_id", bss_ids[i]},
                           {"pre_mbps", pre_mbps[i]},
                           {"post_mbps", post_mbps[i]}});
    }
    j["per_bss"] = per_bss;
    j["pre_aggregate_mbps"] = pre_aggregate_mbps;
    j["post_aggregate_mbps"] = post_aggregate_mbps;
    j["improvement_pct"] = improvement_pct;
    j["window_us"] = window_us;
    j["samples_per_window"] = samples_per_window;
    return j;
}

std::string MonitoringReport::csv() const {
    std::string out = "bss_id,pre_mbps,post_mbps\n";
    for (std::size_t i = 0; i < bss_ids.size(); ++i) {
        out += util::csv_escape(bss_ids[i]);
        out += ',';
        out += util::format_double(pre_mbps[i]);
        out += ',';
        out += util::format_double(post_mbps[i]);
        out += '\n';
    }
    out += "aggregate,";
    out += util::format_double(pre_aggregate_mbps);
    out += ',';
    out += util::format_double(post_aggregate_mbps);
    out += '\n';
    return out;
}

json PipelineConfig::to_json() const {
    json j;
    j["use_case"] = use_case;
    j["threshold_pct"] = threshold_pct;
    j["max_models"] = max_models;
    j["learning_seeds"] = learning_seeds;
    j["eval_seeds"] = eval_seeds;
    j["iterations"] = iterations;
    j["iter_duration_s"] = iter_duration_s;
    j["eval_duration_s"] = eval_duration_s;
    j["monitor_duration_s"] = monitor_duration_s;
    j["monitor_samples"] = monitor_samples;
    j["monitor_seed"] = monitor_seed;
    j["probe_count"] = probe_count;
    return j;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
    PipelineConfig cfg;
    if (!j.is_object()) throw wlan::ConfigError("pipeline config: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::set<std::string> known = {
            "use_case",         "threshold_pct",  "max_models",
            "learning_seeds",   "eval_seeds",     "iterations",
            "iter_duration_s",  "eval_duration_s", "monitor_duration_s",
            "monitor_samples",  "monitor_seed",   "probe_count"};
        if (!known.contains(it.key())) {
            throw wlan::ConfigError("pipeline config: unknown key '" + it.key() + "'");
        }
    }
    try {
        cfg.use_case = j.value("use_case", cfg.use_case);
        cfg.threshold_pct = j.value("threshold_pct", cfg.threshold_pct);
        cfg.max_models = j.value("max_models", cfg.max_models);
        cfg.learning_seeds = j.value("learning_seeds", cfg.learning_seeds);
        cfg.eval_seeds = j.value("eval_seeds", cfg.eval_seeds);
        cfg.iterations = j.value("iterations", cfg.iterations);
        cfg.iter_duration_s = j.value("iter_duration_s", cfg.iter_duration_s);
        cfg.eval_duration_s = j.value("eval_duration_s", cfg.eval_duration_s);
        cfg.monitor_duration_s = j.value("monitor_duration_s", cfg.monitor_duration_s);
        cfg.monitor_samples = j.value("monitor_samples", cfg.monitor_samples);
        cfg.monitor_seed = j.value("monitor_seed", cfg.monitor_seed);
        cfg.probe_count = j.value("probe_count", cfg.probe_count);
    } catch (const json::exception& e) {
        throw wlan::ConfigError(std::string("pipeline config: ") + e.what());
    }
    if (cfg.learning_seeds.empty() || cfg.eval_seeds.empty()) {
        throw wlan::ConfigError("pipeline config: seed lists must be non-empty");
    }
    if (cfg.iterations <= 0 || cfg.max_models <= 0) {
        throw wlan::ConfigError("pipeline config: iterations and max_models must be > 0");
    }
    return cfg;
}

PathLossFit fit_path_loss(const std::vector<ProbeSample>& samples, double ref_tx_dbm) {
    std::set<double> distinct;
    for (const ProbeSample& p : samples) distinct.insert(p.distance_m);
    if (distinct.size() < 2) {
        throw wlan::ConfigError(
            "fit_path_loss: need probes at >= 2 distinct distances, got " +
            std::to_string(distinct.size()));
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(samples.size());
    for (const ProbeSample& p : samples) {
        const double x = 10.0 * std::log10(p.distance_m);
        sx += x;
        sy += p.rx_dbm;
        sxx += x * x;
        sxy += x * p.rx_dbm;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return PathLossFit{ref_tx_dbm - intercept, -slope};
}

ScenarioSpec extract_features(const UnderlayHandle& underlay, int probe_count) {
    const PathLossFit fit =
        fit_path_loss(underlay.probe_path_loss(probe_count), underlay.default_power());

    ScenarioSpec spec;
    spec.bss_list = underlay.observed_bss();
    spec.walls = underlay.observed_walls();
    spec.power_levels_dbm = underlay.power_levels();
    spec.default_power_dbm = underlay.default_power();
    spec.estimated_exponent = fit.exponent;
    spec.estimated_pl0_db = fit.pl0_db;
    spec.probes_used = probe_count;
    return spec;
}

wlan::Scenario prepare_sandbox(const ScenarioSpec& spec) {
    if (spec.bss_list.empty()) {
        throw wlan::ConfigError("prepare_sandbox: spec has no BSS");
    }
    if (spec.power_levels_dbm.empty()) {
        throw wlan::ConfigError("prepare_sandbox: spec.power_levels is empty");
    }
    wlan::Scenario s;
    s.bss_list = spec.bss_list;
    s.walls = spec.walls;
    s.power_levels_dbm = spec.power_levels_dbm;
    s.default_power_dbm = spec.default_power_dbm;
    s.channel = wlan::default_channel();
    s.channel.pl0_db = spec.estimated_pl0_db;
    s.channel.exponent = spec.estimated_exponent;
    s.mcs = wlan::default_mcs_table();
    s.mac = wlan::default_mac();
    for (wlan::Bss& b : s.bss_list) {
        b.tx_power_dbm = s.default_power_dbm;
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw wlan::ConfigError(std::string("prepare_sandbox: ") + e.what());
    }
    return s;
}

ModelDescriptor select_model(const Marketplace& m, const std::vector<std::string>& tags) {
    const std::vector<ModelDescriptor> ranked = m.ranked_for(tags);
    if (ranked.empty()) {
        throw NoModelError("select_model: no marketplace model matches the requested tags");
    }
    return ranked.front();
}

wlan::ThroughputReport measure_fixed_config(const wlan::Scenario& s,
                                            const std::vector<double>& powers_dbm,
                                            sim::SimTime duration, std::uint64_t seed,
                                            const SimulationRunner& runner) {
    wlan::Scenario work = s;
    wlan::apply_powers(work, powers_dbm);
    return runner.run(work, duration, seed);
}

namespace {

double mean_aggregate_over_seeds(const wlan::Scenario& s,
                                 const std::vector<double>& powers,
                                 sim::SimTime duration,
                                 const std::vector<std::uint64_t>& seeds,
                                 const SimulationRunner& runner) {
    double sum = 0.0;
    for (std::uint64_t seed : seeds) {
        sum += measure_fixed_config(s, powers, duration, seed, runner).aggregate_mbps();
    }
    return sum / static_cast<double>(seeds.size());
}

}  // namespace

SandboxReport evaluate_in_sandbox(const wlan::Scenario& sandbox,
                                  const ModelDescriptor& model, double threshold_pct,
                                  const PipelineConfig& cfg,
                                  const SimulationRunner& runner) {
    constexpr double kConvergenceWindow = 0.25;  // trailing fraction pooled
    constexpr double kMinModalShare = 0.40;

    SandboxReport report;
    report.model_id = model.id;
    report.learning_seeds = cfg.learning_seeds;
    report.eval_seeds = cfg.eval_seeds;

    const sim::SimTime eval_duration = sim::seconds(cfg.eval_duration_s);
    const sim::SimTime iter_duration = sim::seconds(cfg.iter_duration_s);

    const std::vector<double> default_powers(sandbox.bss_list.size(),
                                             sandbox.default_power_dbm);
    report.baseline_mbps = mean_aggregate_over_seeds(sandbox, default_powers,
                                                     eval_duration, cfg.eval_seeds, runner);

    const mab::AgentConfig agent = model.agent_config();
    const mab::SimulateFn sim_fn = [&runner](const wlan::Scenario& s, sim::SimTime d,
                                             std::uint64_t seed) {
        return runner.run(s, d, seed);
    };

    // Pool the trailing-window arm picks of every learning run per BSS.
    const int n_bss = static_cast<int>(sandbox.bss_list.size());
    std::vector<std::map<double, int>> counts(static_cast<std::size_t>(n_bss));
    std::vector<int> totals(static_cast<std::size_t>(n_bss), 0);
    for (std::uint64_t seed : cfg.learning_seeds) {
        const mab::LearningTrace trace = mab::run_learning_episode(
            sandbox, agent, cfg.iterations, iter_duration, seed, sim_fn);
        const int window =
            std::max(1, static_cast<int>(cfg.iterations * kConvergenceWindow));
        const int first_iter = cfg.iterations - window + 1;
        for (const mab::TraceRow& row : trace.rows) {
            if (row.iteration < first_iter) continue;
            for (int i = 0; i < n_bss; ++i) {
                if (row.bss_id == sandbox.bss_list[static_cast<std::size_t>(i)].id) {
                    ++counts[static_cast<std::size_t>(i)][row.power_dbm];
                    ++totals[static_cast<std::size_t>(i)];
                }
            }
        }
    }

    report.candidate_powers_dbm.resize(static_cast<std::size_t>(n_bss), 0.0);
    for (int i = 0; i < n_bss; ++i) {
        int best_count = -1;
        double best_power = 0.0;
        for (const auto& [power, count] : counts[static_cast<std::size_t>(i)]) {
            if (count > best_count) {
                best_count = count;
                best_power = power;
            }
        }
        const double share = totals[static_cast<std::size_t>(i)] > 0
                                 ? static_cast<double>(best_count) /
                                       totals[static_cast<std::size_t>(i)]
                                 : 0.0;
        if (share < kMinModalShare) {
            report.passed = false;
            report.failure_reason =
                "no convergence: modal arm share " + util::format_double(share) +
                " below 0.4 for bss '" +
                sandbox.bss_list[static_cast<std::size_t>(i)].id + "'";
            return report;
        }
        report.candidate_powers_dbm[static_cast<std::size_t>(i)] = best_power;
    }

    report.candidate_mbps =
        mean_aggregate_over_seeds(sandbox, report.candidate_powers_dbm, eval_duration,
                                  cfg.eval_seeds, runner);
    report.improvement_pct = 100.0 * (report.candidate_mbps - report.baseline_mbps) /
                             report.baseline_mbps;
    report.passed = report.improvement_pct >= threshold_pct;
    if (!report.passed) {
        report.failure_reason = "improvement " + util::format_double(report.improvement_pct) +
                                "% below threshold " + util::format_double(threshold_pct) +
                                "%";
    }
    return report;
}

namespace {

MonitoringReport monitor_window(const UnderlayHandle& underlay, const PipelineConfig& cfg,
                                bool post, MonitoringReport base) {
    const sim::SimTime window = sim::seconds(cfg.monitor_duration_s);
    const sim::SimTime sample_every =
        cfg.monitor_samples > 0 ? window / cfg.monitor_samples : 0;
    const std::uint64_t seed = cfg.monitor_seed + (post ? 1 : 0);
    const wlan::ThroughputReport r = underlay.measure(window, seed, sample_every);
    if (!post) {
        for (const wlan::BssThroughput& b : r.per_bss) {
            base.bss_ids.push_back(b.bss_id);
            base.pre_mbps.push_back(b.delivered_mbps);
        }
        base.pre_aggregate_mbps = r.aggregate_mbps();
    } else {
        for (const wlan::BssThroughput& b : r.per_bss) {
            base.post_mbps.push_back(b.delivered_mbps);
        }
        base.post_aggregate_mbps = r.aggregate_mbps();
    }
    base.window_us = window;
    base.samples_per_window = cfg.monitor_samples;
    return base;
}

}  // namespace

PipelineResult run_pipeline(UnderlayHandle& underlay, const Marketplace& marketplace,
                            const PipelineConfig& cfg, const SimulationRunner& runner) {
    // Steps 1-2: characterize the underlay and stand up the sandbox.
    const ScenarioSpec spec = extract_features(underlay, cfg.probe_count);
    const wlan::Scenario sandbox = prepare_sandbox(spec);

    // Step 3: candidate models, best first.
    const std::vector<ModelDescriptor> ranked = marketplace.ranked_for(cfg.use_case);

    PipelineResult result;
    bool deployed = false;
    const int tries = std::min<int>(cfg.max_models, static_cast<int>(ranked.size()));
    for (int k = 0; k < tries && !deployed; ++k) {
        // Steps 4-5: evaluate in the sandbox; try the next model on failure.
        SandboxReport report =
            evaluate_in_sandbox(sandbox, ranked[static_cast<std::size_t>(k)],
                                cfg.threshold_pct, cfg, runner);
        result.attempts.push_back(report);
        if (!report.passed) continue;

        // Step 6-7: deploy to the operative network and monitor around the
        // change.
        result.monitoring = monitor_window(underlay, cfg, false, MonitoringReport{});
        underlay.apply_powers(report.candidate_powers_dbm);
        result.monitoring = monitor_window(underlay, cfg, true, result.monitoring);
        result.monitoring.improvement_pct =
            100.0 *
            (result.monitoring.post_aggregate_mbps - result.monitoring.pre_aggregate_mbps) /
            result.monitoring.pre_aggregate_mbps;

        // Step 8: feed the monitored outcome back into the marketplace.
        marketplace.record_result(report.model_id, result.monitoring.improvement_pct);
        result.sandbox = std::move(report);
        deployed = true;
    }
    if (!deployed) {
        throw PipelineExhausted("pipeline: no model passed the sandbox threshold (tried " +
                                std::to_string(result.attempts.size()) + " of " +
                                std::to_string(ranked.size()) + " matching models)");
    }
    return result;
}

std::vector<SweepRow> stability_sweep(const wlan::Scenario& s,
                                      const std::vector<double>& durations_s,
                                      int seeds_per_point, std::uint64_t base_seed,
                                      const SimulationRunner& runner) {
    if (!std::is_sorted(durations_s.begin(), durations_s.end())) {
        throw std::invalid_argument("stability_sweep: durations must be ascending");
    }
    if (seeds_per_point < 1) {
        throw std::invalid_argument("stability_sweep: need at least one seed");
    }
    std::vector<SweepRow> rows;
    rows.reserve(durations_s.size());
    for (double dur_s : durations_s) {
        const sim::SimTime duration = sim::seconds(dur_s);
        std::vector<double> aggregates;
        aggregates.reserve(static_cast<std::size_t>(seeds_per_point));
        double total_ms = 0.0;
        for (int k = 0; k < seeds_per_point; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            const wlan::ThroughputReport r =
                runner.run(s, duration, base_seed + static_cast<std::uint64_t>(k));
            const auto t1 = std::chrono::steady_clock::now();
            total_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
            aggregates.push_back(r.aggregate_mbps());
        }
        SweepRow row;
        row.duration_s = dur_s;
        row.mean_exec_ms = total_ms / seeds_per_point;
        row.degenerate = seeds_per_point < 2;
        double mean = 0.0;
        for (double a : aggregates) mean += a;
        mean /= static_cast<double>(aggregates.size());
        if (!row.degenerate && mean > 0.0) {
            double var = 0.0;
            for (double a : aggregates) var += (a - mean) * (a - mean);
            var /= static_cast<double>(aggregates.size() - 1);
            row.cov = std::sqrt(var) / mean;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "duration_s,mean_exec_ms,cov\n";
    for (const SweepRow& r : rows) {
        out += util::format_double(r.duration_s);
        out += ',';
        out += util::format_double(r.mean_exec_ms);
        out += ',';
        out += util::format_double(r.cov);
        out += '\n';
    }
    return out;
}

}  // namespace wlansim::pipeline
