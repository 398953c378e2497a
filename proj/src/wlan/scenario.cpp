#include "wlansim/wlan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace wlansim::wlan {

double Position::distance_to(const Position& other) const {
    const double dx = x - other.x;
    const double dy = y - other.y;
    return std::sqrt(dx * dx + dy * dy);
}

int Scenario::walls_between(const std::string& node_a, const std::string& node_b) const {
    for (const WallCount& w : walls) {
        if ((w.node_a == node_a && w.node_b == node_b) ||
            (w.node_a == node_b && w.node_b == node_a)) {
            return w.count;
        }
    }
    return 0;
}

void Scenario::validate() const {
    if (bss_list.empty()) {
        throw std::invalid_argument("scenario: needs at least one BSS");
    }
    if (power_levels_dbm.empty()) {
        throw std::invalid_argument("scenario: power_levels must be non-empty");
    }
    if (!std::is_sorted(power_levels_dbm.begin(), power_levels_dbm.end())) {
        throw std::invalid_argument("scenario: power_levels must be sorted ascending");
    }
    if (std::find(power_levels_dbm.begin(), power_levels_dbm.end(), default_power_dbm) ==
        power_levels_dbm.end()) {
        throw std::invalid_argument("scenario: default_power must be one of power_levels");
    }
    if (channel.exponent <= 0.0) {
        throw std::invalid_argument("scenario: channel.exponent must be > 0");
    }
    if (channel.cca_threshold_dbm <= channel.noise_floor_dbm) {
        throw std::invalid_argument("scenario: cca_threshold must exceed noise_floor");
    }
    if (mcs.empty()) {
        throw std::invalid_argument("scenario: mcs_table must be non-empty");
    }
    for (std::size_t i = 1; i < mcs.size(); ++i) {
        if (mcs[i].min_sinr_db <= mcs[i - 1].min_sinr_db ||
            mcs[i].phy_rate_mbps <= mcs[i - 1].phy_rate_mbps) {
            throw std::invalid_argument(
                "scenario: mcs_table must be strictly increasing in both fields");
        }
    }
    if (mac.slot_us <= 0 || mac.difs_us < 0 || mac.cw_min < 1 || mac.cw_max < mac.cw_min ||
        mac.payload_bits <= 0 || mac.overhead_us < 0) {
        throw std::invalid_argument("scenario: invalid mac constants");
    }
    std::unordered_set<std::string> node_ids;
    std::unordered_set<std::string> bss_ids;
    for (const Bss& b : bss_list) {
        if (!bss_ids.insert(b.id).second) {
            throw std::invalid_argument("scenario: duplicate bss id '" + b.id + "'");
        }
        if (b.ap.role != NodeRole::Ap || b.ap.bss_id != b.id) {
            throw std::invalid_argument("scenario: bss '" + b.id + "' has a malformed AP");
        }
        if (!node_ids.insert(b.ap.id).second) {
            throw std::invalid_argument("scenario: duplicate node id '" + b.ap.id + "'");
        }
        for (const Node& sta : b.stations) {
            if (sta.role != NodeRole::Sta || sta.bss_id != b.id) {
                throw std::invalid_argument("scenario: station '" + sta.id +
                                            "' not associated to bss '" + b.id + "'");
            }
            if (!node_ids.insert(sta.id).second) {
                throw std::invalid_argument("scenario: duplicate node id '" + sta.id + "'");
            }
        }
        if (!b.traffic_load.saturated && b.traffic_load.mbps < 0.0) {
            throw std::invalid_argument("scenario: traffic_load must be >= 0");
        }
        if (std::find(power_levels_dbm.begin(), power_levels_dbm.end(), b.tx_power_dbm) ==
            power_levels_dbm.end()) {
            throw std::invalid_argument("scenario: bss '" + b.id +
                                        "' tx_power not in power_levels");
        }
    }
}

ChannelParams default_channel() { return ChannelParams{}; }

McsTable default_mcs_table() {
    // 20 MHz single-stream 802.11ax-like ladder, MCS0..MCS10.
    return {
        {2.0, 8.6},   {5.0, 17.2},  {9.0, 25.8},   {11.0, 34.4},
        {15.0, 51.6}, {18.0, 68.8}, {20.0, 77.4},  {25.0, 86.0},
        {29.0, 103.2}, {31.0, 114.7}, {34.0, 129.0},
    };
}

MacParams default_mac() { return MacParams{}; }

std::vector<double> default_power_levels() { return {3.0, 7.0, 11.0, 15.0, 19.0, 23.0}; }

double max_phy_rate(const McsTable& table) {
    return table.empty() ? 0.0 : table.back().phy_rate_mbps;
}

Scenario canonical_scenario() {
    constexpr double kApSpacing = 30.0;    // AP1 -> AP2
    constexpr double kApStaDist = 3.0;     // AP -> own station
    constexpr double kCrossDist = 29.25;   // interfering AP -> station

    // Station coordinates fixing both the own-AP and cross-AP distances.
    const double sx = (kApStaDist * kApStaDist - kCrossDist * kCrossDist +
                       kApSpacing * kApSpacing) /
                      (2.0 * kApSpacing);
    const double sy = std::sqrt(kApStaDist * kApStaDist - sx * sx);

    Scenario s;
    s.channel = default_channel();
    s.mcs = default_mcs_table();
    s.mac = default_mac();
    s.power_levels_dbm = default_power_levels();
    s.default_power_dbm = 23.0;

    Bss b1;
    b1.id = "bss1";
    b1.ap = Node{"ap1", NodeRole::Ap, {0.0, 0.0}, "bss1"};
    b1.stations = {Node{"sta1", NodeRole::Sta, {sx, sy}, "bss1"}};
    b1.traffic_load = TrafficLoad::saturated_load();
    b1.tx_power_dbm = s.default_power_dbm;

    Bss b2;
    b2.id = "bss2";
    b2.ap = Node{"ap2", NodeRole::Ap, {kApSpacing, 0.0}, "bss2"};
    b2.stations = {Node{"sta2", NodeRole::Sta, {kApSpacing - sx, sy}, "bss2"}};
    b2.traffic_load = TrafficLoad::saturated_load();
    b2.tx_power_dbm = s.default_power_dbm;

    s.bss_list = {b1, b2};
    return s;
}

}  // namespace wlansim::wlan
