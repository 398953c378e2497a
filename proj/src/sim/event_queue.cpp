#include "wlansim/sim/event_queue.hpp"

#include <stdexcept>
#include <string>

namespace wlansim::sim {

std::uint64_t EventQueue::schedule(SimTime time, EventKind kind, std::int32_t subject,
                                   std::int64_t tag) {
    if (time < now_) {
        throw std::logic_error("EventQueue::schedule: event at t=" + std::to_string(time) +
                               "us is in the past (clock=" + std::to_string(now_) + "us)");
    }
    const std::uint64_t seq = next_seq_++;
    heap_.push(Event{time, seq, kind, subject, tag});
    return seq;
}

Event EventQueue::pop() {
    if (heap_.empty()) {
        throw std::logic_error("EventQueue::pop: queue empty");
    }
    Event e = heap_.top();
    heap_.pop();
    now_ = e.time;
    if (trace_ != nullptr) {
        *trace_ << e.time << ',' << e.seq << ',' << event_kind_name(e.kind) << ','
                << e.subject << '\n';
    }
    return e;
}

void EventQueue::advance_clock(SimTime t) {
    if (t < now_) {
        throw std::logic_error("EventQueue::advance_clock: clock cannot move backward");
    }
    now_ = t;
}

RunStats run_until(EventQueue& queue, const HandlerTable& handlers, SimTime t_end) {
    for (int k = 0; k < kEventKindCount; ++k) {
        if (!handlers[static_cast<std::size_t>(k)]) {
            throw std::logic_error(std::string("run_until: no handler for event kind '") +
                                   std::string(event_kind_name(static_cast<EventKind>(k))) +
                                   "'");
        }
    }
    RunStats stats;
    while (!queue.empty() && queue.peek_time() <= t_end) {
        const Event e = queue.pop();
        handlers[static_cast<std::size_t>(e.kind)](e);
        ++stats.processed;
    }
    queue.advance_clock(t_end);
    return stats;
}

}  // namespace wlansim::sim
