#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <vector>

#include "wlansim/sim/event.hpp"
#include "wlansim/sim/time.hpp"

namespace wlansim::sim {

struct RunStats {
    std::uint64_t processed = 0;
};

// Time-ordered event collection keyed by (time, seq). Pop order is
// non-decreasing in time; equal times pop FIFO by insertion sequence, so a
// run is reproducible regardless of heap internals.
class EventQueue {
public:
    // Scheduling strictly in the past indicates an engine bug and faults.
    std::uint64_t schedule(SimTime time, EventKind kind, std::int32_t subject = 0,
                           std::int64_t tag = 0);

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

    // Time of the earliest pending event; queue must be non-empty.
    SimTime peek_time() const { return heap_.top().time; }

    // Removes and returns the earliest event, advancing the clock to it.
    Event pop();

    SimTime now() const { return now_; }

    // Forces the clock forward (run_until uses this to land on t_end).
    void advance_clock(SimTime t);

    // Optional trace sink: one CSV line per popped event,
    // `time_us,seq,kind,detail`.
    void set_trace(std::ostream* sink) { trace_ = sink; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    SimTime now_ = 0;
    std::ostream* trace_ = nullptr;
};

using Handler = std::function<void(const Event&)>;
using HandlerTable = std::array<Handler, kEventKindCount>;

// Processes every event with time <= t_end in (time, seq) order and leaves
// the clock at t_end. Handlers must be defined for every event kind; a
// handler that schedules into the past faults.
RunStats run_until(EventQueue& queue, const HandlerTable& handlers, SimTime t_end);

}  // namespace wlansim::sim
