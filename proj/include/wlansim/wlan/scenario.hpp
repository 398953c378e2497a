#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wlansim/sim/time.hpp"

namespace wlansim::wlan {

struct Position {
    double x = 0.0;  // meters
    double y = 0.0;

    double distance_to(const Position& other) const;
};

enum class NodeRole : std::uint8_t { Ap, Sta };

struct Node {
    std::string id;
    NodeRole role = NodeRole::Sta;
    Position position;
    std::string bss_id;
};

// Offered downlink load. Saturated BSSs always have a frame pending.
struct TrafficLoad {
    bool saturated = true;
    double mbps = 0.0;  // meaningful when !saturated

    static TrafficLoad saturated_load() { return TrafficLoad{true, 0.0}; }
    static TrafficLoad finite(double mbps) { return TrafficLoad{false, mbps}; }
};

struct Bss {
    std::string id;
    Node ap;
    std::vector<Node> stations;
    TrafficLoad traffic_load;
    double tx_power_dbm = 23.0;
};

struct ChannelParams {
    double pl0_db = 40.0;          // path loss at 1 m
    double exponent = 3.5;         // log-distance exponent
    double wall_loss_db = 5.0;     // per intervening wall
    double noise_floor_dbm = -95.0;
    double cca_threshold_dbm = -82.0;
};

struct McsEntry {
    double min_sinr_db = 0.0;
    double phy_rate_mbps = 0.0;
};

// Ordered lookup table, strictly increasing in both fields. A SINR below the
// first threshold maps to rate 0 (link down).
using McsTable = std::vector<McsEntry>;

struct MacParams {
    sim::SimTime slot_us = 9;
    sim::SimTime difs_us = 34;
    int cw_min = 15;
    int cw_max = 1023;
    std::int64_t payload_bits = 12000;   // 1500-byte frame
    sim::SimTime overhead_us = 100;      // preamble + SIFS + ACK, folded
};

struct WallCount {
    std::string node_a;
    std::string node_b;
    int count = 0;
};

struct Scenario {
    std::vector<Bss> bss_list;
    ChannelParams channel;
    McsTable mcs;
    std::vector<double> power_levels_dbm;  // sorted ascending
    double default_power_dbm = 23.0;
    MacParams mac;
    std::vector<WallCount> walls;  // pairs absent from the list have 0 walls

    int walls_between(const std::string& node_a, const std::string& node_b) const;

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

ChannelParams default_channel();
McsTable default_mcs_table();
MacParams default_mac();
std::vector<double> default_power_levels();

// Two-BSS residential deployment: one station per BSS at 3 m from its AP,
// APs 30 m apart, stations placed 29.25 m from the interfering AP, no walls,
// saturated downlink. At 23 dBm the APs carrier-sense each other and split
// airtime; at 7 dBm they are decoupled and both links sustain the top MCS
// concurrently, while 3 dBm leaves too little SINR margin, so (7,7) is the
// unique best joint configuration.
Scenario canonical_scenario();

// Highest PHY rate in the table (0 for an empty table).
double max_phy_rate(const McsTable& table);

}  // namespace wlansim::wlan
