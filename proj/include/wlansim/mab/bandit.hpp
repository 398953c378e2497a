#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wlansim/sim/rng.hpp"

namespace wlansim::mab {

struct Arm {
    int index = 0;         // into the configured power levels
    double power_dbm = 0.0;
};

struct ArmStats {
    std::int64_t pulls = 0;
    double mean_reward = 0.0;
    // Thompson pseudo-counts (Beta posterior).
    double alpha = 1.0;
    double beta = 1.0;
};

enum class PolicyKind : std::uint8_t { EpsilonGreedy, Ucb1, Thompson };

std::string policy_kind_name(PolicyKind k);
PolicyKind policy_kind_from_name(const std::string& name);  // throws on unknown

struct PolicyConfig {
    PolicyKind kind = PolicyKind::EpsilonGreedy;
    double eps0 = 1.0;      // initial exploration probability
    double decay = 0.995;   // per-iteration multiplicative decay
    double ucb_c = 1.4142135623730951;

    static PolicyConfig eps_greedy(double eps0 = 1.0, double decay = 0.995);
    static PolicyConfig ucb1(double c = 1.4142135623730951);
    static PolicyConfig thompson();

    void validate() const;  // throws std::invalid_argument
};

// min(throughput / bound, 1). The bound is the offered load for finite
// traffic, the top PHY rate for saturated traffic. bound <= 0 is a
// configuration error.
double normalize_reward(double throughput_mbps, double bound_mbps);

// Picks an arm for iteration t (0-based). Epsilon-greedy explores uniformly
// with probability eps0*decay^t, otherwise takes the best empirical mean;
// UCB1 plays any unpulled arm first, then the highest upper confidence
// bound; Thompson takes the argmax of per-arm Beta samples. All ties break
// toward the lowest index.
int select_arm(const PolicyConfig& policy, std::span<const ArmStats> stats,
               std::int64_t t, sim::RngStream& rng);

// Incremental mean update; Thompson counts grow by (reward, 1-reward).
// Rewards outside [0,1] fault.
void update(ArmStats& stats, double reward);

// Beta(a, b) sample for a, b >= 1 (Marsaglia-Tsang gamma pairs).
double beta_sample(double a, double b, sim::RngStream& rng);

struct SyntheticCheckResult {
    double best_arm_rate = 0.0;   // over the final 10% of steps
    std::vector<int> choices;     // one per step
};

// Runs the policy against independent Bernoulli arms with the given means.
SyntheticCheckResult synthetic_bandit_check(const PolicyConfig& policy,
                                            std::span<const double> arm_means,
                                            int steps, std::uint64_t seed);

}  // namespace wlansim::mab
