#include "wlansim/pipeline/marketplace.hpp"

#include <algorithm>

#include "wlansim/wlan/scenario_io.hpp"

namespace wlansim::pipeline {

using nlohmann::json;

double ModelDescriptor::mean_improvement() const {
    if (observed_improvement.empty()) return 0.0;
    double sum = 0.0;
    for (double v : observed_improvement) sum += v;
    return sum / static_cast<double>(observed_improvement.size());
}

bool ModelDescriptor::matches(const std::vector<std::string>& tags) const {
    for (const std::string& t : tags) {
        if (std::find(use_case.begin(), use_case.end(), t) != use_case.end()) {
            return true;
        }
    }
    return false;
}

mab::AgentConfig ModelDescriptor::agent_config() const {
    mab::AgentConfig cfg;
    mab::PolicyConfig& p = cfg.policy;
    p.kind = mab::policy_kind_from_name(algorithm);
    if (hyperparameters.contains("eps0")) p.eps0 = hyperparameters.at("eps0").get<double>();
    if (hyperparameters.contains("decay"))
        p.decay = hyperparameters.at("decay").get<double>();
    if (hyperparameters.contains("c")) p.ucb_c = hyperparameters.at("c").get<double>();
    p.validate();
    if (hyperparameters.contains("reward_mode")) {
        cfg.reward_mode = mab::reward_mode_from_name(
            hyperparameters.at("reward_mode").get<std::string>());
    }
    if (hyperparameters.contains("arms_dbm")) {
        cfg.arms_dbm = hyperparameters.at("arms_dbm").get<std::vector<double>>();
    }
    return cfg;
}

json ModelDescriptor::to_json() const {
    json j;
    j["id"] = id;
    j["algorithm"] = algorithm;
    j["hyperparameters"] = hyperparameters;
    j["use_case"] = use_case;
    j["maturity"] = maturity;
    j["eval_count"] = eval_count;
    j["observed_improvement"] = observed_improvement;
    return j;
}

ModelDescriptor ModelDescriptor::from_json(const json& j) {
    ModelDescriptor m;
    try {
        m.id = j.at("id").get<std::string>();
        m.algorithm = j.at("algorithm").get<std::string>();
        m.hyperparameters = j.value("hyperparameters", json::object());
        m.use_case = j.value("use_case", std::vector<std::string>{});
        m.maturity = j.value("maturity", std::string("experimental"));
        m.eval_count = j.value("eval_count", 0);
        m.observed_improvement = j.value("observed_improvement", std::vector<double>{});
    } catch (const json::exception& e) {
        throw wlan::ConfigError(std::string("model descriptor: ") + e.what());
    }
    return m;
}

int maturity_rank(const std::string& maturity) {
    if (maturity == "mature") return 2;
    if (maturity == "beta") return 1;
    return 0;  // experimental or unknown
}

Marketplace::Marketplace(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::vector<ModelDescriptor> Marketplace::load_all() const {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<ModelDescriptor> models;
    models.reserve(files.size());
    for (const auto& f : files) {
        models.push_back(ModelDescriptor::from_json(wlan::load_json_file(f)));
    }
    return models;
}

std::optional<ModelDescriptor> Marketplace::load(const std::string& id) const {
    const std::filesystem::path path = dir_ / (id + ".json");
    if (!std::filesystem::exists(path)) return std::nullopt;
    return ModelDescriptor::from_json(wlan::load_json_file(path));
}

void Marketplace::save(const ModelDescriptor& model) const {
    wlan::save_json_file(model.to_json(), dir_ / (model.id + ".json"));
}

void Marketplace::record_result(const std::string& id, double improvement_pct) const {
    std::optional<ModelDescriptor> model = load(id);
    if (!model.has_value()) {
        throw wlan::ConfigError("marketplace: no model '" + id + "'");
    }
    model->observed_improvement.push_back(improvement_pct);
    model->eval_count += 1;
    save(*model);
}

std::vector<ModelDescriptor> Marketplace::ranked_for(
    const std::vector<std::string>& tags) const {
    std::vector<ModelDescriptor> models = load_all();
    std::erase_if(models, [&](const ModelDescriptor& m) { return !m.matches(tags); });
    std::sort(models.begin(), models.end(),
              [](const ModelDescriptor& a, const ModelDescriptor& b) {
                  const bool a_eval = !a.observed_improvement.empty();
                  const bool b_eval = !b.observed_improvement.empty();
                  if (a_eval != b_eval) return a_eval;  // evaluated first
                  if (a_eval && a.mean_improvement() != b.mean_improvement()) {
                      return a.mean_improvement() > b.mean_improvement();
                  }
                  if (maturity_rank(a.maturity) != maturity_rank(b.maturity)) {
                      return maturity_rank(a.maturity) > maturity_rank(b.maturity);
                  }
                  return a.id < b.id;
              });
    return models;
}

void write_default_marketplace(const Marketplace& m) {
    ModelDescriptor eg;
    eg.id = "tpc-eps-greedy";
    eg.algorithm = "eps-greedy";
    eg.hyperparameters = {{"eps0", 1.0}, {"decay", 0.995}, {"reward_mode", "team"}};
    eg.use_case = {"tpc-obss"};
    eg.maturity = "mature";
    m.save(eg);

    ModelDescriptor ucb;
    ucb.id = "tpc-ucb1";
    ucb.algorithm = "ucb1";
    ucb.hyperparameters = {{"c", 1.4142135623730951}, {"reward_mode", "team"}};
    ucb.use_case = {"tpc-obss"};
    ucb.maturity = "beta";
    m.save(ucb);

    ModelDescriptor ts;
    ts.id = "tpc-thompson";
    ts.algorithm = "thompson";
    ts.hyperparameters = {{"reward_mode", "team"}};
    ts.use_case = {"tpc-obss"};
    ts.maturity = "beta";
    m.save(ts);
}

}  // namespace wlansim::pipeline
