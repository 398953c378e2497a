#pragma once

#include <filesystem>
#include <string>

#include "wlansim/wlan/dcf.hpp"
#include "wlansim/wlan/scenario.hpp"

#include <json.hpp>

namespace wlansim::wlan {

// Raised for malformed scenario/config files; the message names the
// offending key (and the file when loaded from disk).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario file schema (JSON): sections `nodes`, `bss`, `channel`,
// `mcs_table`, `mac`, `power_levels`, plus optional `walls` and
// `default_power`. Everything except `nodes` and `bss` has defaults.
nlohmann::json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario_file(const std::filesystem::path& path);
void save_scenario_file(const Scenario& s, const std::filesystem::path& path);

// ThroughputReport CSV: header + `bss_id,thr_mbps,airtime,collisions,mean_sinr`.
std::string throughput_report_csv(const ThroughputReport& r);

nlohmann::json throughput_report_to_json(const ThroughputReport& r);

// Parses a JSON document, mapping parse errors to ConfigError with the
// 1-based line of the failure.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);
nlohmann::json load_json_file(const std::filesystem::path& path);
void save_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace wlansim::wlan
