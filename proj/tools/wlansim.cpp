// wlansim: discrete-event WLAN simulator with embedded bandit TPC agents and
// an ML-sandbox pipeline. Subcommands: simulate, learn, pipeline, sweep,
// oracle, plus init for starter files.
//
// Exit codes: 0 success, 2 input error, 3 pipeline exhausted, 4 oracle cap
// exceeded.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wlansim/mab/episode.hpp"
#include "wlansim/pipeline/marketplace.hpp"
#include "wlansim/pipeline/orchestrator.hpp"
#include "wlansim/pipeline/underlay.hpp"
#include "wlansim/util/parallel.hpp"
#include "wlansim/util/text.hpp"
#include "wlansim/version.hpp"
#include "wlansim/wlan/scenario_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wlansim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitPipelineExhausted = 3;
constexpr int kExitCapExceeded = 4;

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw wlan::ConfigError(path.string() + ": cannot open for writing");
    out << text;
}

// Every command writes `<output>.manifest.json` (or manifest.json for
// directory outputs) holding everything needed to reproduce the run.
void write_manifest(const fs::path& where, const std::string& command,
                    std::uint64_t master_seed, const json& config,
                    const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["engine"] = {{"name", std::string(kEngineName)},
                   {"version", std::string(kEngineVersion)}};
    m["prng"] = std::string(kPrngAlgorithm);
    m["master_seed"] = master_seed;
    m["config"] = config;
    m["outputs"] = outputs;
    wlan::save_json_file(m, where);
}

std::vector<double> parse_duration_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& part : util::split(text, ',')) {
        if (part.empty()) continue;
        out.push_back(std::stod(part));
    }
    if (out.empty()) throw wlan::ConfigError("durations: empty list");
    return out;
}

std::string powers_label(const std::vector<double>& powers) {
    std::vector<std::string> parts;
    parts.reserve(powers.size());
    for (double p : powers) parts.push_back(util::format_double(p));
    return util::join(parts, '/');
}

struct UnderlaySpec {
    wlan::Scenario scenario;
    std::uint64_t underlay_seed = 0;
};

UnderlaySpec load_underlay_file(const fs::path& path) {
    const json j = wlan::load_json_file(path);
    if (!j.is_object()) throw wlan::ConfigError(path.string() + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "scenario" && it.key() != "scenario_file" &&
            it.key() != "underlay_seed") {
            throw wlan::ConfigError(path.string() + ": unknown key '" + it.key() + "'");
        }
    }
    UnderlaySpec spec;
    if (j.contains("scenario")) {
        spec.scenario = wlan::scenario_from_json(j.at("scenario"));
    } else if (j.contains("scenario_file")) {
        const fs::path rel = j.at("scenario_file").get<std::string>();
        spec.scenario =
            wlan::load_scenario_file(rel.is_absolute() ? rel : path.parent_path() / rel);
    } else {
        throw wlan::ConfigError(path.string() +
                                ": missing key 'scenario' or 'scenario_file'");
    }
    if (!j.contains("underlay_seed")) {
        throw wlan::ConfigError(path.string() + ": missing key 'underlay_seed'");
    }
    spec.underlay_seed = j.at("underlay_seed").get<std::uint64_t>();
    return spec;
}

int cmd_simulate(const std::string& scenario_file, double duration_s,
                 std::uint64_t seed, const std::string& out_csv,
                 const std::string& trace_file) {
    const wlan::Scenario scenario = wlan::load_scenario_file(scenario_file);
    wlan::SimOptions opt;
    std::ofstream trace;
    if (!trace_file.empty()) {
        trace.open(trace_file, std::ios::binary);
        if (!trace) throw wlan::ConfigError(trace_file + ": cannot open for writing");
        trace << "time_us,seq,kind,detail\n";
        opt.trace = &trace;
    }
    const wlan::ThroughputReport report =
        wlan::simulate_scenario(scenario, sim::seconds(duration_s), seed, opt);
    write_text(out_csv, wlan::throughput_report_csv(report));

    json config;
    config["scenario_file"] = scenario_file;
    config["scenario"] = wlan::scenario_to_json(scenario);
    config["duration_s"] = duration_s;
    config["trace_file"] = trace_file;
    std::vector<std::string> outputs = {out_csv};
    if (!trace_file.empty()) outputs.push_back(trace_file);
    write_manifest(out_csv + ".manifest.json", "simulate", seed, config, outputs);
    return kExitOk;
}

int cmd_learn(const std::string& scenario_file, const std::string& policy_name,
              int iterations, double iter_duration_s, std::uint64_t seed,
              const std::string& reward_mode, double eps0, double decay, double ucb_c,
              const std::string& out_csv) {
    const wlan::Scenario scenario = wlan::load_scenario_file(scenario_file);
    mab::AgentConfig agent;
    agent.policy.kind = mab::policy_kind_from_name(policy_name);
    agent.policy.eps0 = eps0;
    agent.policy.decay = decay;
    agent.policy.ucb_c = ucb_c;
    agent.reward_mode = mab::reward_mode_from_name(reward_mode);

    const mab::LearningTrace trace = mab::run_learning_episode(
        scenario, agent, iterations, sim::seconds(iter_duration_s), seed);
    write_text(out_csv, trace.csv());

    json config;
    config["scenario_file"] = scenario_file;
    config["scenario"] = wlan::scenario_to_json(scenario);
    config["policy"] = policy_name;
    config["reward_mode"] = reward_mode;
    config["eps0"] = eps0;
    config["decay"] = decay;
    config["ucb_c"] = ucb_c;
    config["iterations"] = iterations;
    config["iter_duration_s"] = iter_duration_s;
    write_manifest(out_csv + ".manifest.json", "learn", seed, config, {out_csv});
    return kExitOk;
}

int cmd_pipeline(const std::string& underlay_file, const std::string& marketplace_dir,
                 const std::string& config_file, const std::string& out_dir,
                 const std::string& runner_name) {
    const UnderlaySpec spec = load_underlay_file(underlay_file);
    const pipeline::PipelineConfig cfg =
        pipeline::PipelineConfig::from_json(wlan::load_json_file(config_file));
    pipeline::Marketplace marketplace{fs::path(marketplace_dir)};
    pipeline::UnderlayHandle underlay(spec.scenario, spec.underlay_seed);

    const pipeline::DirectRunner direct;
    const pipeline::AdapterRunner via_adapter;
    const pipeline::SimulationRunner& runner =
        runner_name == "adapter" ? static_cast<const pipeline::SimulationRunner&>(via_adapter)
                                 : direct;

    pipeline::PipelineResult result;
    try {
        result = pipeline::run_pipeline(underlay, marketplace, cfg, runner);
    } catch (const pipeline::PipelineExhausted& e) {
        std::cerr << "wlansim pipeline: " << e.what() << "\n";
        return kExitPipelineExhausted;
    }

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    wlan::save_json_file(result.sandbox.to_json(), dir / "sandbox_report.json");
    wlan::save_json_file(result.monitoring.to_json(), dir / "monitoring_report.json");
    write_text(dir / "sandbox_report.csv", result.sandbox.csv());
    write_text(dir / "monitoring_report.csv", result.monitoring.csv());
    json attempts = json::array();
    for (const pipeline::SandboxReport& a : result.attempts) attempts.push_back(a.to_json());
    wlan::save_json_file(attempts, dir / "attempts.json");

    json config;
    config["underlay_file"] = underlay_file;
    config["underlay_seed"] = spec.underlay_seed;
    config["scenario"] = wlan::scenario_to_json(spec.scenario);
    config["marketplace_dir"] = marketplace_dir;
    config["pipeline_config"] = cfg.to_json();
    config["runner"] = runner_name;
    write_manifest(dir / "manifest.json", "pipeline", spec.underlay_seed, config,
                   {(dir / "sandbox_report.json").string(),
                    (dir / "monitoring_report.json").string(),
                    (dir / "sandbox_report.csv").string(),
                    (dir / "monitoring_report.csv").string(),
                    (dir / "attempts.json").string()});
    std::cout << "deployed " << powers_label(result.sandbox.candidate_powers_dbm)
              << " dBm, monitored improvement "
              << util::format_double(result.monitoring.improvement_pct) << "%\n";
    return kExitOk;
}

int cmd_sweep(const std::string& scenario_file, const std::string& durations,
              int seeds, std::uint64_t seed, const std::string& out_csv) {
    const wlan::Scenario scenario = wlan::load_scenario_file(scenario_file);
    const std::vector<double> durations_s = parse_duration_list(durations);
    const pipeline::DirectRunner runner;
    const std::vector<pipeline::SweepRow> rows =
        pipeline::stability_sweep(scenario, durations_s, seeds, seed, runner);
    write_text(out_csv, pipeline::sweep_csv(rows));

    json config;
    config["scenario_file"] = scenario_file;
    config["scenario"] = wlan::scenario_to_json(scenario);
    config["durations_s"] = durations_s;
    config["seeds_per_point"] = seeds;
    write_manifest(out_csv + ".manifest.json", "sweep", seed, config, {out_csv});
    return kExitOk;
}

int cmd_oracle(const std::string& scenario_file, int seeds, double duration_s,
               std::uint64_t seed, std::int64_t cap, int jobs,
               const std::string& out_csv) {
    const wlan::Scenario scenario = wlan::load_scenario_file(scenario_file);
    const std::size_t n_bss = scenario.bss_list.size();
    const std::size_t n_levels = scenario.power_levels_dbm.size();

    double combos_f = 1.0;
    for (std::size_t i = 0; i < n_bss; ++i) combos_f *= static_cast<double>(n_levels);
    if (combos_f > static_cast<double>(cap)) {
        std::cerr << "wlansim oracle: " << combos_f << " joint configurations exceed the cap of "
                  << cap << "; raise it with --cap if you mean it\n";
        return kExitCapExceeded;
    }
    const std::size_t combos = static_cast<std::size_t>(combos_f);

    struct Row {
        std::vector<double> powers;
        double mean_aggregate = 0.0;
        std::vector<double> mean_per_bss;
    };
    std::vector<Row> rows(combos);
    util::parallel_for_index(combos, jobs, [&](std::size_t c) {
        Row& row = rows[c];
        row.powers.resize(n_bss);
        std::size_t rem = c;
        for (std::size_t i = 0; i < n_bss; ++i) {
            row.powers[i] = scenario.power_levels_dbm[rem % n_levels];
            rem /= n_levels;
        }
        wlan::Scenario work = scenario;
        wlan::apply_powers(work, row.powers);
        row.mean_per_bss.assign(n_bss, 0.0);
        for (int k = 0; k < seeds; ++k) {
            const wlan::ThroughputReport r = wlan::simulate_scenario(
                work, sim::seconds(duration_s), seed + static_cast<std::uint64_t>(k));
            for (std::size_t i = 0; i < n_bss; ++i) {
                row.mean_per_bss[i] += r.per_bss[i].delivered_mbps;
            }
        }
        for (std::size_t i = 0; i < n_bss; ++i) {
            row.mean_per_bss[i] /= seeds;
            row.mean_aggregate += row.mean_per_bss[i];
        }
    });
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) {
                         return a.mean_aggregate > b.mean_aggregate;
                     });

    std::string csv = "powers,mean_aggregate_mbps";
    for (const wlan::Bss& b : scenario.bss_list) csv += ",mean_bss_" + b.id;
    csv += '\n';
    for (const Row& row : rows) {
        csv += powers_label(row.powers);
        csv += ',';
        csv += util::format_double(row.mean_aggregate);
        for (double v : row.mean_per_bss) {
            csv += ',';
            csv += util::format_double(v);
        }
        csv += '\n';
    }
    write_text(out_csv, csv);

    json config;
    config["scenario_file"] = scenario_file;
    config["scenario"] = wlan::scenario_to_json(scenario);
    config["seeds"] = seeds;
    config["duration_s"] = duration_s;
    config["cap"] = cap;
    write_manifest(out_csv + ".manifest.json", "oracle", seed, config, {out_csv});
    return kExitOk;
}

int cmd_init(const std::string& out_dir, std::uint64_t underlay_seed) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    wlan::save_scenario_file(wlan::canonical_scenario(), dir / "scenario.json");
    json underlay;
    underlay["scenario_file"] = "scenario.json";
    underlay["underlay_seed"] = underlay_seed;
    wlan::save_json_file(underlay, dir / "underlay.json");
    wlan::save_json_file(pipeline::PipelineConfig{}.to_json(), dir / "pipeline.json");
    pipeline::Marketplace marketplace{dir / "marketplace"};
    pipeline::write_default_marketplace(marketplace);
    std::cout << "wrote scenario.json, underlay.json, pipeline.json, marketplace/ under "
              << dir.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wlansim: WLAN simulator with bandit power control and an ML sandbox pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    int jobs = 1;
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
    app.add_option("--jobs", jobs, "Worker threads for independent runs")
        ->capture_default_str();

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run one scenario and report throughput");
    std::string sim_scenario, sim_out = "report.csv", sim_trace;
    double sim_duration = 10.0;
    simulate->add_option("scenario", sim_scenario, "Scenario file (JSON)")->required();
    simulate->add_option("--duration-s", sim_duration, "Simulated seconds")
        ->capture_default_str();
    simulate->add_option("--out", sim_out, "Throughput report CSV")->capture_default_str();
    simulate->add_option("--trace", sim_trace, "Event trace CSV (optional)");

    // learn
    auto* learn = app.add_subcommand("learn", "Run bandit TPC agents over iterations");
    std::string learn_scenario, learn_policy = "eps-greedy", learn_out = "trace.csv";
    std::string learn_reward = "team";
    int learn_iters = 200;
    double learn_iter_dur = 5.0, learn_eps0 = 1.0, learn_decay = 0.995;
    double learn_ucb_c = 1.4142135623730951;
    learn->add_option("scenario", learn_scenario, "Scenario file (JSON)")->required();
    learn->add_option("--policy", learn_policy, "eps-greedy | ucb1 | thompson")
        ->capture_default_str();
    learn->add_option("--iterations", learn_iters, "Learning iterations")
        ->capture_default_str();
    learn->add_option("--iter-duration-s", learn_iter_dur, "Seconds per iteration")
        ->capture_default_str();
    learn->add_option("--reward", learn_reward, "team | selfish")->capture_default_str();
    learn->add_option("--eps0", learn_eps0, "Initial exploration rate")
        ->capture_default_str();
    learn->add_option("--decay", learn_decay, "Exploration decay")->capture_default_str();
    learn->add_option("--ucb-c", learn_ucb_c, "UCB1 exploration constant")
        ->capture_default_str();
    learn->add_option("--out", learn_out, "Learning trace CSV")->capture_default_str();

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Run the sandbox pipeline end to end");
    std::string pipe_underlay, pipe_marketplace, pipe_config, pipe_out = "pipeline-out";
    std::string pipe_runner = "direct";
    pipe->add_option("underlay", pipe_underlay, "Underlay file (JSON)")->required();
    pipe->add_option("marketplace", pipe_marketplace, "Marketplace directory")->required();
    pipe->add_option("config", pipe_config, "Pipeline config file (JSON)")->required();
    pipe->add_option("--out-dir", pipe_out, "Report output directory")
        ->capture_default_str();
    pipe->add_option("--runner", pipe_runner, "direct | adapter")->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Duration vs variability sweep");
    std::string sweep_scenario, sweep_durations = "1,5,10,50,100";
    std::string sweep_out = "sweep.csv";
    int sweep_seeds = 10;
    sweep->add_option("scenario", sweep_scenario, "Scenario file (JSON)")->required();
    sweep->add_option("--durations", sweep_durations, "Comma-separated seconds, ascending")
        ->capture_default_str();
    sweep->add_option("--seeds", sweep_seeds, "Seeds per duration")->capture_default_str();
    sweep->add_option("--out", sweep_out, "Sweep table CSV")->capture_default_str();

    // oracle
    auto* oracle = app.add_subcommand("oracle",
                                      "Exhaustively rank joint power configurations");
    std::string oracle_scenario, oracle_out = "oracle.csv";
    int oracle_seeds = 10;
    double oracle_duration = 10.0;
    std::int64_t oracle_cap = 10000;
    oracle->add_option("scenario", oracle_scenario, "Scenario file (JSON)")->required();
    oracle->add_option("--seeds", oracle_seeds, "Seeds per configuration")
        ->capture_default_str();
    oracle->add_option("--duration-s", oracle_duration, "Seconds per run")
        ->capture_default_str();
    oracle->add_option("--cap", oracle_cap, "Max joint configurations")
        ->capture_default_str();
    oracle->add_option("--out", oracle_out, "Ranked table CSV")->capture_default_str();

    // init
    auto* init = app.add_subcommand("init", "Write starter scenario/underlay/marketplace");
    std::string init_dir = ".";
    std::uint64_t init_underlay_seed = 1;
    init->add_option("--out-dir", init_dir, "Target directory")->capture_default_str();
    init->add_option("--underlay-seed", init_underlay_seed, "Underlay perturbation seed")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(sim_scenario, sim_duration, seed, sim_out, sim_trace);
        }
        if (learn->parsed()) {
            return cmd_learn(learn_scenario, learn_policy, learn_iters, learn_iter_dur,
                             seed, learn_reward, learn_eps0, learn_decay, learn_ucb_c,
                             learn_out);
        }
        if (pipe->parsed()) {
            return cmd_pipeline(pipe_underlay, pipe_marketplace, pipe_config, pipe_out,
                                pipe_runner);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_scenario, sweep_durations, sweep_seeds, seed, sweep_out);
        }
        if (oracle->parsed()) {
            return cmd_oracle(oracle_scenario, oracle_seeds, oracle_duration, seed,
                              oracle_cap, jobs, oracle_out);
        }
        if (init->parsed()) {
            return cmd_init(init_dir, init_underlay_seed);
        }
    } catch (const wlan::ConfigError& e) {
        std::cerr << "wlansim: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "wlansim: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "wlansim: internal error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
