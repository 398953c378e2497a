#pragma once

#include <cstdint>

namespace wlansim::sim {

// Simulation time in integer microseconds since run start. Integer ticks keep
// event ordering exact; 802.11 slot/IFS durations are integer microseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kMicrosPerSecond = 1'000'000;

constexpr SimTime seconds(double s) {
    return static_cast<SimTime>(s * static_cast<double>(kMicrosPerSecond) + 0.5);
}

constexpr double to_seconds(SimTime t) {
    return static_cast<double>(t) / static_cast<double>(kMicrosPerSecond);
}

}  // namespace wlansim::sim
