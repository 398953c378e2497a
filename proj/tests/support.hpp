#pragma once

// Shared fixtures and independent oracles for the test suites. Oracle code
// here deliberately re-derives expected values from first principles instead
// of calling the implementation under test.

#include <cmath>
#include <string>
#include <vector>

#include "wlansim/sim/rng.hpp"
#include "wlansim/wlan/scenario.hpp"

namespace testsupport {

// Closed-form saturated single-link throughput: one frame per
// backoff + overhead + payload/rate cycle, E[backoff] = (cw_min-1)/2 slots.
inline double analytic_single_link_mbps(const wlansim::wlan::Scenario& s,
                                        double phy_rate_mbps) {
    const double e_backoff_us =
        (s.mac.cw_min - 1) / 2.0 * static_cast<double>(s.mac.slot_us);
    const double payload = static_cast<double>(s.mac.payload_bits);
    const double cycle_us =
        e_backoff_us + static_cast<double>(s.mac.overhead_us) + payload / phy_rate_mbps;
    return payload / cycle_us;
}

// Linear-domain SINR oracle, summed in milliwatts step by step.
inline double sinr_oracle_db(double signal_dbm, const std::vector<double>& interferers_dbm,
                             double noise_dbm) {
    long double denom = std::pow(10.0L, static_cast<long double>(noise_dbm) / 10.0L);
    for (double i : interferers_dbm) {
        denom += std::pow(10.0L, static_cast<long double>(i) / 10.0L);
    }
    const long double signal = std::pow(10.0L, static_cast<long double>(signal_dbm) / 10.0L);
    return static_cast<double>(10.0L * std::log10(signal / denom));
}

// One saturated AP-STA link at 3 m, canonical constants.
inline wlansim::wlan::Scenario isolated_scenario() {
    wlansim::wlan::Scenario s = wlansim::wlan::canonical_scenario();
    s.bss_list.pop_back();
    return s;
}

// Two saturated BSSs with APs 1 m apart (strong mutual carrier sense).
inline wlansim::wlan::Scenario co_located_scenario() {
    wlansim::wlan::Scenario s = wlansim::wlan::canonical_scenario();
    s.bss_list[1].ap.position = {1.0, 0.0};
    s.bss_list[1].stations[0].position = {1.0, 3.0};
    s.bss_list[0].stations[0].position = {0.0, 3.0};
    return s;
}

// Randomized small deployment for property and fuzz tests.
inline wlansim::wlan::Scenario random_scenario(wlansim::sim::RngStream& rng) {
    using namespace wlansim::wlan;
    Scenario s;
    s.channel = default_channel();
    s.mcs = default_mcs_table();
    s.mac = default_mac();
    s.power_levels_dbm = default_power_levels();
    s.default_power_dbm = 23.0;
    const int n_bss = 1 + static_cast<int>(rng.uniform_int(3));
    for (int i = 0; i < n_bss; ++i) {
        Bss b;
        b.id = "bss" + std::to_string(i + 1);
        const double ax = rng.uniform_range(0.0, 60.0);
        const double ay = rng.uniform_range(0.0, 60.0);
        b.ap = Node{"ap" + std::to_string(i + 1), NodeRole::Ap, {ax, ay}, b.id};
        const int n_sta = 1 + static_cast<int>(rng.uniform_int(2));
        for (int t = 0; t < n_sta; ++t) {
            const double r = rng.uniform_range(1.0, 12.0);
            const double theta = rng.uniform_range(0.0, 6.283185307179586);
            b.stations.push_back(Node{
                "sta" + std::to_string(i + 1) + "_" + std::to_string(t + 1), NodeRole::Sta,
                {ax + r * std::cos(theta), ay + r * std::sin(theta)}, b.id});
        }
        b.traffic_load = rng.uniform() < 0.5
                             ? TrafficLoad::saturated_load()
                             : TrafficLoad::finite(rng.uniform_range(1.0, 60.0));
        b.tx_power_dbm =
            s.power_levels_dbm[rng.uniform_int(s.power_levels_dbm.size())];
        s.bss_list.push_back(std::move(b));
    }
    return s;
}

}  // namespace testsupport
