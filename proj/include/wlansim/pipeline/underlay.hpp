#pragma once

#include <cstdint>
#include <vector>

#include "wlansim/wlan/dcf.hpp"
#include "wlansim/wlan/scenario.hpp"

namespace wlansim::pipeline {

struct ProbeSample {
    double distance_m = 0.0;
    double rx_dbm = 0.0;
};

// Emulated operative network: a scenario with hidden perturbations fixed at
// creation (path-loss exponent jitter within ±0.2, finite traffic jitter
// within ±10%, and a private seed offset). The perturbed truth is reachable
// only through measurements; node positions and offered loads are
// management-plane knowledge.
class UnderlayHandle {
public:
    UnderlayHandle(wlan::Scenario base, std::uint64_t underlay_seed);

    // What the management subsystem can read directly.
    const std::vector<wlan::Bss>& observed_bss() const { return perturbed_.bss_list; }
    const std::vector<wlan::WallCount>& observed_walls() const { return perturbed_.walls; }
    const std::vector<double>& power_levels() const { return perturbed_.power_levels_dbm; }
    double default_power() const { return perturbed_.default_power_dbm; }

    // RSSI probe campaign: rx power versus distance under the perturbed
    // channel, with 0.5 dB gaussian measurement noise. Deterministic per
    // (underlay seed, probe count).
    std::vector<ProbeSample> probe_path_loss(int probe_count) const;

    // Runs the operative network as it currently stands.
    wlan::ThroughputReport measure(sim::SimTime duration, std::uint64_t seed,
                                   sim::SimTime sample_every = 0) const;

    void apply_powers(const std::vector<double>& powers_dbm);
    std::vector<double> current_powers() const;

    // Ground truth accessors for tests and reporting; the orchestration path
    // must not consult them.
    double hidden_exponent() const { return perturbed_.channel.exponent; }
    const wlan::Scenario& hidden_scenario() const { return perturbed_; }

private:
    wlan::Scenario perturbed_;
    std::uint64_t underlay_seed_ = 0;
    std::uint64_t seed_offset_ = 0;
};

}  // namespace wlansim::pipeline
