#include "wlansim/mab/episode.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "wlansim/util/text.hpp"

namespace wlansim::mab {

std::string reward_mode_name(RewardMode m) {
    return m == RewardMode::Team ? "team" : "selfish";
}

RewardMode reward_mode_from_name(const std::string& name) {
    if (name == "team") return RewardMode::Team;
    if (name == "selfish") return RewardMode::Selfish;
    throw std::invalid_argument("unknown reward mode '" + name +
                                "' (expected team or selfish)");
}

std::string LearningTrace::csv() const {
    std::string out = "iter,bss_id,power_dbm,thr_mbps,reward\n";
    for (const TraceRow& r : rows) {
        out += std::to_string(r.iteration);
        out += ',';
        out += util::csv_escape(r.bss_id);
        out += ',';
        out += util::format_double(r.power_dbm);
        out += ',';
        out += util::format_double(r.thr_mbps);
        out += ',';
        out += util::format_double(r.reward);
        out += '\n';
    }
    return out;
}

LearningTrace::Modal LearningTrace::modal_power(int bss_index,
                                                double trailing_fraction) const {
    Modal modal;
    if (iterations == 0 || n_bss == 0) return modal;
    const int window =
        std::max(1, static_cast<int>(static_cast<double>(iterations) * trailing_fraction));
    const int first_iter = iterations - window + 1;
    const std::string& bss_id = rows[static_cast<std::size_t>(bss_index)].bss_id;
    std::map<double, int> counts;
    int total = 0;
    for (const TraceRow& r : rows) {
        if (r.iteration < first_iter || r.bss_id != bss_id) continue;
        ++counts[r.power_dbm];
        ++total;
    }
    int best_count = -1;
    for (const auto& [power, count] : counts) {
        if (count > best_count) {
            best_count = count;
            modal.power_dbm = power;
        }
    }
    modal.share = total > 0 ? static_cast<double>(best_count) / total : 0.0;
    return modal;
}

double LearningTrace::trailing_mean_aggregate(double trailing_fraction) const {
    if (iterations == 0) return 0.0;
    const int window =
        std::max(1, static_cast<int>(static_cast<double>(iterations) * trailing_fraction));
    const int first_iter = iterations - window + 1;
    double sum = 0.0;
    for (const TraceRow& r : rows) {
        if (r.iteration < first_iter) continue;
        sum += r.thr_mbps;
    }
    return sum / static_cast<double>(window);
}

double reward_bound_mbps(const wlan::Bss& bss, const wlan::McsTable& mcs) {
    return bss.traffic_load.saturated ? wlan::max_phy_rate(mcs) : bss.traffic_load.mbps;
}

LearningTrace run_learning_episode(const wlan::Scenario& s, const AgentConfig& agent,
                                   int iterations, sim::SimTime iter_duration,
                                   std::uint64_t seed, const SimulateFn& simulate) {
    s.validate();
    agent.policy.validate();
    if (iterations < 0) {
        throw std::invalid_argument("run_learning_episode: negative iteration count");
    }

    std::vector<double> arms = agent.arms_dbm.empty() ? s.power_levels_dbm : agent.arms_dbm;
    for (double a : arms) {
        if (std::find(s.power_levels_dbm.begin(), s.power_levels_dbm.end(), a) ==
            s.power_levels_dbm.end()) {
            throw std::invalid_argument(
                "run_learning_episode: arm power not in scenario power_levels");
        }
    }

    const int n_bss = static_cast<int>(s.bss_list.size());
    std::vector<std::vector<ArmStats>> stats(
        static_cast<std::size_t>(n_bss), std::vector<ArmStats>(arms.size()));
    std::vector<sim::RngStream> agent_rng;
    std::vector<double> bounds;
    agent_rng.reserve(static_cast<std::size_t>(n_bss));
    for (const wlan::Bss& b : s.bss_list) {
        agent_rng.emplace_back(seed, "agent." + b.id);
        bounds.push_back(reward_bound_mbps(b, s.mcs));
    }

    const SimulateFn run = simulate
                               ? simulate
                               : SimulateFn([](const wlan::Scenario& sc, sim::SimTime d,
                                               std::uint64_t sd) {
                                     return wlan::simulate_scenario(sc, d, sd);
                                 });

    LearningTrace trace;
    trace.iterations = iterations;
    trace.n_bss = n_bss;
    trace.rows.reserve(static_cast<std::size_t>(iterations) *
                       static_cast<std::size_t>(n_bss));

    wlan::Scenario work = s;
    std::vector<int> chosen(static_cast<std::size_t>(n_bss), 0);
    for (int iter = 0; iter < iterations; ++iter) {
        for (int i = 0; i < n_bss; ++i) {
            chosen[static_cast<std::size_t>(i)] =
                select_arm(agent.policy, stats[static_cast<std::size_t>(i)], iter,
                           agent_rng[static_cast<std::size_t>(i)]);
            work.bss_list[static_cast<std::size_t>(i)].tx_power_dbm =
                arms[static_cast<std::size_t>(chosen[static_cast<std::size_t>(i)])];
        }

        const std::uint64_t iter_seed =
            sim::derive_seed(seed, "episode.iter", static_cast<std::uint64_t>(iter));
        const wlan::ThroughputReport report = run(work, iter_duration, iter_seed);

        double aggregate_thr = 0.0;
        double aggregate_bound = 0.0;
        for (int i = 0; i < n_bss; ++i) {
            aggregate_thr += report.per_bss[static_cast<std::size_t>(i)].delivered_mbps;
            aggregate_bound += bounds[static_cast<std::size_t>(i)];
        }

        for (int i = 0; i < n_bss; ++i) {
            const double thr = report.per_bss[static_cast<std::size_t>(i)].delivered_mbps;
            const double reward =
                agent.reward_mode == RewardMode::Team
                    ? normalize_reward(aggregate_thr, aggregate_bound)
                    : normalize_reward(thr, bounds[static_cast<std::size_t>(i)]);
            update(stats[static_cast<std::size_t>(i)]
                        [static_cast<std::size_t>(chosen[static_cast<std::size_t>(i)])],
                   reward);
            trace.rows.push_back(TraceRow{
                iter + 1, s.bss_list[static_cast<std::size_t>(i)].id,
                arms[static_cast<std::size_t>(chosen[static_cast<std::size_t>(i)])], thr,
                reward});
        }
    }
    return trace;
}

}  // namespace wlansim::mab
