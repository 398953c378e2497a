#include "wlansim/mab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wlansim::mab {

std::string policy_kind_name(PolicyKind k) {
    switch (k) {
        case PolicyKind::EpsilonGreedy: return "eps-greedy";
        case PolicyKind::Ucb1: return "ucb1";
        case PolicyKind::Thompson: return "thompson";
    }
    return "unknown";
}

PolicyKind policy_kind_from_name(const std::string& name) {
    if (name == "eps-greedy") return PolicyKind::EpsilonGreedy;
    if (name == "ucb1") return PolicyKind::Ucb1;
    if (name == "thompson") return PolicyKind::Thompson;
    throw std::invalid_argument("unknown policy '" + name +
                                "' (expected eps-greedy, ucb1 or thompson)");
}

PolicyConfig PolicyConfig::eps_greedy(double eps0, double decay) {
    PolicyConfig c;
    c.kind = PolicyKind::EpsilonGreedy;
    c.eps0 = eps0;
    c.decay = decay;
    return c;
}

PolicyConfig PolicyConfig::ucb1(double c_param) {
    PolicyConfig c;
    c.kind = PolicyKind::Ucb1;
    c.ucb_c = c_param;
    return c;
}

PolicyConfig PolicyConfig::thompson() {
    PolicyConfig c;
    c.kind = PolicyKind::Thompson;
    return c;
}

void PolicyConfig::validate() const {
    if (eps0 < 0.0 || eps0 > 1.0) {
        throw std::invalid_argument("policy: eps0 must be in [0,1]");
    }
    if (decay <= 0.0 || decay > 1.0) {
        throw std::invalid_argument("policy: decay must be in (0,1]");
    }
    if (ucb_c <= 0.0) {
        throw std::invalid_argument("policy: ucb c must be > 0");
    }
}

double normalize_reward(double throughput_mbps, double bound_mbps) {
    if (bound_mbps <= 0.0) {
        throw std::invalid_argument("normalize_reward: bound must be > 0");
    }
    const double r = throughput_mbps / bound_mbps;
    return r > 1.0 ? 1.0 : (r < 0.0 ? 0.0 : r);
}

namespace {

int argmax_mean(std::span<const ArmStats> stats) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(stats.size()); ++i) {
        if (stats[static_cast<std::size_t>(i)].mean_reward >
            stats[static_cast<std::size_t>(best)].mean_reward) {
            best = i;
        }
    }
    return best;
}

// Marsaglia-Tsang, valid for shape >= 1.
double gamma_sample(double shape, sim::RngStream& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

double beta_sample(double a, double b, sim::RngStream& rng) {
    const double ga = gamma_sample(a, rng);
    const double gb = gamma_sample(b, rng);
    return ga / (ga + gb);
}

int select_arm(const PolicyConfig& policy, std::span<const ArmStats> stats,
               std::int64_t t, sim::RngStream& rng) {
    if (stats.empty()) {
        throw std::invalid_argument("select_arm: at least one arm required");
    }
    const int n = static_cast<int>(stats.size());
    switch (policy.kind) {
        case PolicyKind::EpsilonGreedy: {
            const double eps =
                policy.eps0 * std::pow(policy.decay, static_cast<double>(t));
            if (rng.uniform() < eps) {
                return static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
            }
            return argmax_mean(stats);
        }
        case PolicyKind::Ucb1: {
            for (int i = 0; i < n; ++i) {
                if (stats[static_cast<std::size_t>(i)].pulls == 0) return i;
            }
            const double log_t = std::log(static_cast<double>(t < 1 ? 1 : t));
            int best = 0;
            double best_score = -1.0;
            for (int i = 0; i < n; ++i) {
                const ArmStats& a = stats[static_cast<std::size_t>(i)];
                const double score =
                    a.mean_reward +
                    policy.ucb_c * std::sqrt(log_t / static_cast<double>(a.pulls));
                if (score > best_score) {
                    best_score = score;
                    best = i;
                }
            }
            return best;
        }
        case PolicyKind::Thompson: {
            int best = 0;
            double best_sample = -1.0;
            for (int i = 0; i < n; ++i) {
                const ArmStats& a = stats[static_cast<std::size_t>(i)];
                const double s = beta_sample(a.alpha, a.beta, rng);
                if (s > best_sample) {
                    best_sample = s;
                    best = i;
                }
            }
            return best;
        }
    }
    throw std::logic_error("select_arm: unreachable");
}

void update(ArmStats& stats, double reward) {
    if (reward < 0.0 || reward > 1.0) {
        throw std::invalid_argument("update: reward must be in [0,1]");
    }
    ++stats.pulls;
    stats.mean_reward += (reward - stats.mean_reward) / static_cast<double>(stats.pulls);
    stats.alpha += reward;
    stats.beta += 1.0 - reward;
}

SyntheticCheckResult synthetic_bandit_check(const PolicyConfig& policy,
                                            std::span<const double> arm_means,
                                            int steps, std::uint64_t seed) {
    for (double m : arm_means) {
        if (m < 0.0 || m > 1.0) {
            throw std::invalid_argument("synthetic_bandit_check: means must be in [0,1]");
        }
    }
    if (arm_means.empty()) {
        throw std::invalid_argument("synthetic_bandit_check: at least one arm required");
    }
    sim::RngStream select_rng(seed, "bandit.synthetic.policy");
    sim::RngStream reward_rng(seed, "bandit.synthetic.reward");
    std::vector<ArmStats> stats(arm_means.size());

    SyntheticCheckResult result;
    result.choices.reserve(static_cast<std::size_t>(steps));
    const int best_arm = static_cast<int>(
        std::max_element(arm_means.begin(), arm_means.end()) - arm_means.begin());
    const int window_start = steps - steps / 10;
    int best_picks = 0;
    for (int t = 0; t < steps; ++t) {
        const int arm = select_arm(policy, stats, t, select_rng);
        const double reward =
            reward_rng.uniform() < arm_means[static_cast<std::size_t>(arm)] ? 1.0 : 0.0;
        update(stats[static_cast<std::size_t>(arm)], reward);
        result.choices.push_back(arm);
        if (t >= window_start && arm == best_arm) ++best_picks;
    }
    const int window = steps - window_start;
    result.best_arm_rate =
        window > 0 ? static_cast<double>(best_picks) / static_cast<double>(window) : 0.0;
    return result;
}

}  // namespace wlansim::mab
