#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wlansim/mab/bandit.hpp"
#include "wlansim/sim/time.hpp"
#include "wlansim/wlan/dcf.hpp"
#include "wlansim/wlan/scenario.hpp"

namespace wlansim::mab {

// Where the per-iteration reward comes from. `Team` feeds every agent the
// normalized network aggregate (same signal for all BSSs); `Selfish` feeds
// each agent its own BSS's normalized throughput. Selfish agents in an
// overlapping deployment drift to high power, where deferring neighbours
// cost them nothing, so the shared-reward mode is the default.
enum class RewardMode : std::uint8_t { Team, Selfish };

std::string reward_mode_name(RewardMode m);
RewardMode reward_mode_from_name(const std::string& name);

struct AgentConfig {
    PolicyConfig policy;
    RewardMode reward_mode = RewardMode::Team;
    // Restriction of the selectable power levels; empty means all of the
    // scenario's power_levels. Values must be scenario power levels.
    std::vector<double> arms_dbm;
};

struct TraceRow {
    int iteration = 0;  // 1-based
    std::string bss_id;
    double power_dbm = 0.0;
    double thr_mbps = 0.0;
    double reward = 0.0;
};

struct LearningTrace {
    int iterations = 0;
    int n_bss = 0;
    std::vector<TraceRow> rows;  // iterations * n_bss, grouped by iteration

    // `iter,bss_id,power_dbm,thr_mbps,reward`
    std::string csv() const;

    // Most frequent power for one BSS over the trailing fraction of
    // iterations; share is its frequency in that window.
    struct Modal {
        double power_dbm = 0.0;
        double share = 0.0;
    };
    Modal modal_power(int bss_index, double trailing_fraction) const;

    // Mean aggregate throughput over the trailing fraction of iterations.
    double trailing_mean_aggregate(double trailing_fraction) const;
};

using SimulateFn = std::function<wlan::ThroughputReport(
    const wlan::Scenario&, sim::SimTime, std::uint64_t)>;

// One decentralized agent per BSS, all sharing the same configuration. Per
// iteration each agent picks a power arm, the scenario runs for
// iter_duration under that joint configuration, and every agent is updated
// from the resulting throughput.
LearningTrace run_learning_episode(const wlan::Scenario& s, const AgentConfig& agent,
                                   int iterations,
                                   sim::SimTime iter_duration,
                                   std::uint64_t seed,
                                   const SimulateFn& simulate = {});

// Reward bound per BSS: offered load when finite, top PHY rate when
// saturated.
double reward_bound_mbps(const wlan::Bss& bss, const wlan::McsTable& mcs);

}  // namespace wlansim::mab
