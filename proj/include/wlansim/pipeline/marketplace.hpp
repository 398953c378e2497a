#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wlansim/mab/episode.hpp"

#include <json.hpp>

namespace wlansim::pipeline {

// Registry record for one candidate ML model: the algorithm, how it has
// fared so far, and what it is for.
struct ModelDescriptor {
    std::string id;
    std::string algorithm;            // eps-greedy | ucb1 | thompson
    nlohmann::json hyperparameters;   // eps0, decay, c, reward_mode, arms_dbm
    std::vector<std::string> use_case;
    std::string maturity;             // mature | beta | experimental
    int eval_count = 0;
    std::vector<double> observed_improvement;  // percent, append-only

    double mean_improvement() const;
    bool matches(const std::vector<std::string>& tags) const;

    // Materializes the agent configuration this descriptor describes.
    mab::AgentConfig agent_config() const;

    nlohmann::json to_json() const;
    static ModelDescriptor from_json(const nlohmann::json& j);
};

int maturity_rank(const std::string& maturity);

// Directory-backed registry: one `<id>.json` per model. Loading after
// saving returns the identical record.
class Marketplace {
public:
    explicit Marketplace(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }

    std::vector<ModelDescriptor> load_all() const;
    std::optional<ModelDescriptor> load(const std::string& id) const;
    void save(const ModelDescriptor& model) const;

    // Appends one improvement observation and bumps eval_count, in place.
    void record_result(const std::string& id, double improvement_pct) const;

    // Tag-matching models best first: evaluated models by mean improvement,
    // then unevaluated by maturity, then id. Deterministic.
    std::vector<ModelDescriptor> ranked_for(const std::vector<std::string>& tags) const;

private:
    std::filesystem::path dir_;
};

// Writes the stock model set (eps-greedy, ucb1, thompson with default
// hyperparameters) into the registry directory.
void write_default_marketplace(const Marketplace& m);

}  // namespace wlansim::pipeline
