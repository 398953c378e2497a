#include "wlansim/wlan/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include "wlansim/util/text.hpp"

namespace wlansim::wlan {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError(where + ": missing key '" + std::string(key) + "'");
    }
    return *it;
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    return v.get<double>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw ConfigError(where + ": expected a string");
    return v.get<std::string>();
}

}  // namespace

json scenario_to_json(const Scenario& s) {
    json j;
    json nodes = json::array();
    for (const Bss& b : s.bss_list) {
        nodes.push_back({{"id", b.ap.id},
                         {"role", "ap"},
                         {"x", b.ap.position.x},
                         {"y", b.ap.position.y},
                         {"bss", b.id}});
        for (const Node& sta : b.stations) {
            nodes.push_back({{"id", sta.id},
                             {"role", "sta"},
                             {"x", sta.position.x},
                             {"y", sta.position.y},
                             {"bss", b.id}});
        }
    }
    j["nodes"] = nodes;

    json bss = json::array();
    for (const Bss& b : s.bss_list) {
        json jb;
        jb["id"] = b.id;
        if (b.traffic_load.saturated) {
            jb["traffic_load"] = "saturated";
        } else {
            jb["traffic_load"] = b.traffic_load.mbps;
        }
        jb["tx_power"] = b.tx_power_dbm;
        bss.push_back(jb);
    }
    j["bss"] = bss;

    if (!s.walls.empty()) {
        json walls = json::array();
        for (const WallCount& w : s.walls) {
            walls.push_back({{"a", w.node_a}, {"b", w.node_b}, {"count", w.count}});
        }
        j["walls"] = walls;
    }

    j["channel"] = {{"pl0", s.channel.pl0_db},
                    {"exponent", s.channel.exponent},
                    {"wall_loss", s.channel.wall_loss_db},
                    {"noise_floor", s.channel.noise_floor_dbm},
                    {"cca_threshold", s.channel.cca_threshold_dbm}};

    json mcs = json::array();
    for (const McsEntry& e : s.mcs) {
        mcs.push_back({{"min_sinr", e.min_sinr_db}, {"rate_mbps", e.phy_rate_mbps}});
    }
    j["mcs_table"] = mcs;

    j["mac"] = {{"slot_us", s.mac.slot_us},
                {"difs_us", s.mac.difs_us},
                {"cw_min", s.mac.cw_min},
                {"cw_max", s.mac.cw_max},
                {"payload_bits", s.mac.payload_bits},
                {"overhead_us", s.mac.overhead_us}};

    j["power_levels"] = s.power_levels_dbm;
    j["default_power"] = s.default_power_dbm;
    return j;
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
    reject_unknown_keys(j,
                        {"nodes", "bss", "walls", "channel", "mcs_table", "mac",
                         "power_levels", "default_power"},
                        "scenario");

    Scenario s;
    s.channel = default_channel();
    s.mcs = default_mcs_table();
    s.mac = default_mac();
    s.power_levels_dbm = default_power_levels();

    if (j.contains("channel")) {
        const json& c = j.at("channel");
        reject_unknown_keys(c, {"pl0", "exponent", "wall_loss", "noise_floor",
                                "cca_threshold"},
                            "channel");
        if (c.contains("pl0")) s.channel.pl0_db = as_number(c["pl0"], "channel.pl0");
        if (c.contains("exponent"))
            s.channel.exponent = as_number(c["exponent"], "channel.exponent");
        if (c.contains("wall_loss"))
            s.channel.wall_loss_db = as_number(c["wall_loss"], "channel.wall_loss");
        if (c.contains("noise_floor"))
            s.channel.noise_floor_dbm = as_number(c["noise_floor"], "channel.noise_floor");
        if (c.contains("cca_threshold"))
            s.channel.cca_threshold_dbm =
                as_number(c["cca_threshold"], "channel.cca_threshold");
    }

    if (j.contains("mcs_table")) {
        const json& table = j.at("mcs_table");
        if (!table.is_array() || table.empty()) {
            throw ConfigError("mcs_table: expected a non-empty array");
        }
        s.mcs.clear();
        for (const json& row : table) {
            reject_unknown_keys(row, {"min_sinr", "rate_mbps"}, "mcs_table entry");
            s.mcs.push_back({as_number(require(row, "min_sinr", "mcs_table"), "mcs_table.min_sinr"),
                             as_number(require(row, "rate_mbps", "mcs_table"), "mcs_table.rate_mbps")});
        }
    }

    if (j.contains("mac")) {
        const json& m = j.at("mac");
        reject_unknown_keys(m, {"slot_us", "difs_us", "cw_min", "cw_max", "payload_bits",
                                "overhead_us"},
                            "mac");
        if (m.contains("slot_us"))
            s.mac.slot_us = static_cast<sim::SimTime>(as_number(m["slot_us"], "mac.slot_us"));
        if (m.contains("difs_us"))
            s.mac.difs_us = static_cast<sim::SimTime>(as_number(m["difs_us"], "mac.difs_us"));
        if (m.contains("cw_min"))
            s.mac.cw_min = static_cast<int>(as_number(m["cw_min"], "mac.cw_min"));
        if (m.contains("cw_max"))
            s.mac.cw_max = static_cast<int>(as_number(m["cw_max"], "mac.cw_max"));
        if (m.contains("payload_bits"))
            s.mac.payload_bits =
                static_cast<std::int64_t>(as_number(m["payload_bits"], "mac.payload_bits"));
        if (m.contains("overhead_us"))
            s.mac.overhead_us =
                static_cast<sim::SimTime>(as_number(m["overhead_us"], "mac.overhead_us"));
    }

    if (j.contains("power_levels")) {
        const json& p = j.at("power_levels");
        if (!p.is_array() || p.empty()) {
            throw ConfigError("power_levels: expected a non-empty array");
        }
        s.power_levels_dbm.clear();
        for (const json& v : p) s.power_levels_dbm.push_back(as_number(v, "power_levels"));
    }
    s.default_power_dbm =
        j.contains("default_power")
            ? as_number(j.at("default_power"), "default_power")
            : s.power_levels_dbm.back();

    struct ParsedNode {
        Node node;
        bool used = false;
    };
    std::vector<ParsedNode> nodes;
    const json& jnodes = require(j, "nodes", "scenario");
    if (!jnodes.is_array() || jnodes.empty()) {
        throw ConfigError("nodes: expected a non-empty array");
    }
    for (const json& n : jnodes) {
        reject_unknown_keys(n, {"id", "role", "x", "y", "bss"}, "node");
        Node node;
        node.id = as_string(require(n, "id", "node"), "node.id");
        const std::string role = as_string(require(n, "role", "node"), "node.role");
        if (role == "ap") node.role = NodeRole::Ap;
        else if (role == "sta") node.role = NodeRole::Sta;
        else throw ConfigError("node '" + node.id + "': role must be 'ap' or 'sta'");
        node.position.x = as_number(require(n, "x", "node"), "node.x");
        node.position.y = as_number(require(n, "y", "node"), "node.y");
        node.bss_id = as_string(require(n, "bss", "node"), "node.bss");
        nodes.push_back({node, false});
    }

    const json& jbss = require(j, "bss", "scenario");
    if (!jbss.is_array() || jbss.empty()) {
        throw ConfigError("bss: expected a non-empty array");
    }
    for (const json& b : jbss) {
        reject_unknown_keys(b, {"id", "traffic_load", "tx_power"}, "bss entry");
        Bss bss;
        bss.id = as_string(require(b, "id", "bss"), "bss.id");
        const json& load = require(b, "traffic_load", "bss '" + bss.id + "'");
        if (load.is_string()) {
            if (load.get<std::string>() != "saturated") {
                throw ConfigError("bss '" + bss.id +
                                  "': traffic_load must be a number or \"saturated\"");
            }
            bss.traffic_load = TrafficLoad::saturated_load();
        } else {
            bss.traffic_load =
                TrafficLoad::finite(as_number(load, "bss '" + bss.id + "'.traffic_load"));
        }
        bss.tx_power_dbm =
            b.contains("tx_power")
                ? as_number(b.at("tx_power"), "bss '" + bss.id + "'.tx_power")
                : s.default_power_dbm;

        bool found_ap = false;
        for (ParsedNode& pn : nodes) {
            if (pn.node.bss_id != bss.id) continue;
            pn.used = true;
            if (pn.node.role == NodeRole::Ap) {
                if (found_ap) {
                    throw ConfigError("bss '" + bss.id + "': more than one AP node");
                }
                bss.ap = pn.node;
                found_ap = true;
            } else {
                bss.stations.push_back(pn.node);
            }
        }
        if (!found_ap) {
            throw ConfigError("bss '" + bss.id + "': no AP node declared for it");
        }
        s.bss_list.push_back(std::move(bss));
    }
    for (const ParsedNode& pn : nodes) {
        if (!pn.used) {
            throw ConfigError("node '" + pn.node.id + "': bss '" + pn.node.bss_id +
                              "' is not declared in the bss section");
        }
    }

    if (j.contains("walls")) {
        const json& w = j.at("walls");
        if (!w.is_array()) throw ConfigError("walls: expected an array");
        for (const json& entry : w) {
            reject_unknown_keys(entry, {"a", "b", "count"}, "walls entry");
            WallCount wc;
            wc.node_a = as_string(require(entry, "a", "walls"), "walls.a");
            wc.node_b = as_string(require(entry, "b", "walls"), "walls.b");
            wc.count = static_cast<int>(as_number(require(entry, "count", "walls"),
                                                  "walls.count"));
            if (wc.count < 0) throw ConfigError("walls: count must be >= 0");
            s.walls.push_back(std::move(wc));
        }
    }

    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    try {
        return scenario_from_json(load_json_file(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void save_scenario_file(const Scenario& s, const std::filesystem::path& path) {
    save_json_file(scenario_to_json(s), path);
}

std::string throughput_report_csv(const ThroughputReport& r) {
    std::string out = "bss_id,thr_mbps,airtime,collisions,mean_sinr\n";
    for (const BssThroughput& b : r.per_bss) {
        out += util::csv_escape(b.bss_id);
        out += ',';
        out += util::format_double(b.delivered_mbps);
        out += ',';
        out += util::format_double(b.airtime_fraction);
        out += ',';
        out += std::to_string(b.collisions);
        out += ',';
        out += util::format_double(b.mean_sinr_db);
        out += '\n';
    }
    return out;
}

json throughput_report_to_json(const ThroughputReport& r) {
    json j;
    j["window_start_us"] = r.window_start_us;
    j["window_end_us"] = r.window_end_us;
    json rows = json::array();
    for (const BssThroughput& b : r.per_bss) {
        rows.push_back({{"bss_id", b.bss_id},
                        {"thr_mbps", b.delivered_mbps},
                        {"airtime", b.airtime_fraction},
                        {"collisions", b.collisions},
                        {"mean_sinr", b.mean_sinr_db},
                        {"zero_rate_link", b.zero_rate_link}});
    }
    j["per_bss"] = rows;
    j["aggregate_mbps"] = r.aggregate_mbps();
    return j;
}

json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        const std::size_t limit = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ConfigError(origin + ": JSON parse error at line " + std::to_string(line) +
                          ": " + e.what());
    }
}

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path.string());
}

void save_json_file(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError(path.string() + ": cannot open for writing");
    }
    out << j.dump(2) << '\n';
}

}  // namespace wlansim::wlan
