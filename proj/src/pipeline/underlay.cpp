#include "wlansim/pipeline/underlay.hpp"

#include <cmath>

#include "wlansim/sim/rng.hpp"
#include "wlansim/wlan/radio.hpp"

namespace wlansim::pipeline {

UnderlayHandle::UnderlayHandle(wlan::Scenario base, std::uint64_t underlay_seed)
    : perturbed_(std::move(base)), underlay_seed_(underlay_seed) {
    perturbed_.validate();
    sim::RngStream exp_rng(underlay_seed_, "underlay.exponent");
    perturbed_.channel.exponent += exp_rng.uniform_range(-0.2, 0.2);
    sim::RngStream traffic_rng(underlay_seed_, "underlay.traffic");
    for (wlan::Bss& b : perturbed_.bss_list) {
        if (!b.traffic_load.saturated) {
            b.traffic_load.mbps *= 1.0 + traffic_rng.uniform_range(-0.1, 0.1);
        }
    }
    seed_offset_ = sim::derive_seed(underlay_seed_, "underlay.seed_offset");
}

std::vector<ProbeSample> UnderlayHandle::probe_path_loss(int probe_count) const {
    sim::RngStream rng(underlay_seed_, "underlay.probe");
    std::vector<ProbeSample> samples;
    samples.reserve(static_cast<std::size_t>(probe_count));
    const double ref_tx = perturbed_.default_power_dbm;
    for (int i = 0; i < probe_count; ++i) {
        // Log-spaced distances in [2, 60) m plus jitter; wall-free paths.
        const double d = 2.0 * std::pow(30.0, rng.uniform());
        const double pl = wlan::path_loss_db(d, 0, perturbed_.channel);
        const double noise = 0.5 * rng.gaussian();
        samples.push_back(ProbeSample{d, ref_tx - pl + noise});
    }
    return samples;
}

wlan::ThroughputReport UnderlayHandle::measure(sim::SimTime duration, std::uint64_t seed,
                                               sim::SimTime sample_every) const {
    wlan::SimOptions opt;
    opt.sample_every_us = sample_every;
    return wlan::simulate_scenario(perturbed_, duration, seed ^ seed_offset_, opt);
}

void UnderlayHandle::apply_powers(const std::vector<double>& powers_dbm) {
    wlan::apply_powers(perturbed_, powers_dbm);
}

std::vector<double> UnderlayHandle::current_powers() const {
    return wlan::current_powers(perturbed_);
}

}  // namespace wlansim::pipeline
