#pragma once

#include <cstdint>
#include <string_view>

#include "wlansim/sim/time.hpp"

namespace wlansim::sim {

enum class EventKind : std::uint8_t {
    TxStart,
    TxEnd,
    BackoffExpiry,
    TrafficArrival,
    IterationBoundary,
    MonitoringSample,
};

inline constexpr int kEventKindCount = 6;

constexpr std::string_view event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::TxStart: return "tx_start";
        case EventKind::TxEnd: return "tx_end";
        case EventKind::BackoffExpiry: return "backoff_expiry";
        case EventKind::TrafficArrival: return "traffic_arrival";
        case EventKind::IterationBoundary: return "iteration_boundary";
        case EventKind::MonitoringSample: return "monitoring_sample";
    }
    return "unknown";
}

struct Event {
    SimTime time = 0;
    std::uint64_t seq = 0;   // insertion counter, unique per run
    EventKind kind = EventKind::TxStart;
    std::int32_t subject = 0;  // kind-specific: typically a BSS index
    std::int64_t tag = 0;      // kind-specific: e.g. a backoff generation
};

}  // namespace wlansim::sim
