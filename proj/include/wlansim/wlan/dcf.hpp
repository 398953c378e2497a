#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "wlansim/sim/time.hpp"
#include "wlansim/wlan/scenario.hpp"

namespace wlansim::wlan {

struct BssThroughput {
    std::string bss_id;
    double delivered_mbps = 0.0;
    double airtime_fraction = 0.0;
    std::int64_t collisions = 0;
    double mean_sinr_db = 0.0;
    bool zero_rate_link = false;  // station(s) out of range; 0 Mbps, not a fault
};

struct ThroughputSample {
    sim::SimTime time_us = 0;
    std::vector<double> mbps_per_bss;
};

struct ThroughputReport {
    std::vector<BssThroughput> per_bss;
    sim::SimTime window_start_us = 0;
    sim::SimTime window_end_us = 0;
    std::uint64_t events_processed = 0;
    std::vector<ThroughputSample> samples;  // filled when sampling is enabled

    double aggregate_mbps() const;
    const BssThroughput& bss(const std::string& id) const;
};

bool operator==(const BssThroughput& a, const BssThroughput& b);
bool operator==(const ThroughputReport& a, const ThroughputReport& b);

struct SimOptions {
    std::ostream* trace = nullptr;        // event trace sink (CSV)
    sim::SimTime sample_every_us = 0;     // 0 disables monitoring samples
};

// Event-driven downlink DCF emulation. Per frame, the AP draws a backoff in
// [0, CW) slots (binary exponential between cw_min and cw_max), freezes its
// countdown while the channel is sensed busy, and transmits for
// overhead + payload/rate microseconds at the MCS implied by the noise-only
// SINR at the receiver. Overlapping transmissions succeed independently iff
// each receiver's worst-case SINR over the frame still supports the chosen
// MCS. A countdown interrupted by carrier sense resumes DIFS after the
// medium clears; the backoff after an AP's own transmission starts
// immediately.
ThroughputReport simulate_scenario(const Scenario& s, sim::SimTime duration,
                                   std::uint64_t seed, const SimOptions& options = {});

// Convenience for sweeping joint power configurations; sizes must match.
void apply_powers(Scenario& s, const std::vector<double>& powers_dbm);
std::vector<double> current_powers(const Scenario& s);

}  // namespace wlansim::wlan
