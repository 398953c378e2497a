#include "wlansim/wlan/dcf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wlansim/sim/event_queue.hpp"
#include "wlansim/sim/rng.hpp"
#include "wlansim/wlan/radio.hpp"

namespace wlansim::wlan {

double ThroughputReport::aggregate_mbps() const {
    double sum = 0.0;
    for (const BssThroughput& b : per_bss) sum += b.delivered_mbps;
    return sum;
}

const BssThroughput& ThroughputReport::bss(const std::string& id) const {
    for (const BssThroughput& b : per_bss) {
        if (b.bss_id == id) return b;
    }
    throw std::out_of_range("ThroughputReport: no bss '" + id + "'");
}

bool operator==(const BssThroughput& a, const BssThroughput& b) {
    return a.bss_id == b.bss_id && a.delivered_mbps == b.delivered_mbps &&
           a.airtime_fraction == b.airtime_fraction && a.collisions == b.collisions &&
           a.mean_sinr_db == b.mean_sinr_db && a.zero_rate_link == b.zero_rate_link;
}

bool operator==(const ThroughputReport& a, const ThroughputReport& b) {
    if (!(a.per_bss == b.per_bss) || a.window_start_us != b.window_start_us ||
        a.window_end_us != b.window_end_us) {
        return false;
    }
    if (a.samples.size() != b.samples.size()) return false;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        if (a.samples[i].time_us != b.samples[i].time_us ||
            a.samples[i].mbps_per_bss != b.samples[i].mbps_per_bss) {
            return false;
        }
    }
    return true;
}

void apply_powers(Scenario& s, const std::vector<double>& powers_dbm) {
    if (powers_dbm.size() != s.bss_list.size()) {
        throw std::invalid_argument("apply_powers: one power per BSS required");
    }
    for (std::size_t i = 0; i < powers_dbm.size(); ++i) {
        s.bss_list[i].tx_power_dbm = powers_dbm[i];
    }
}

std::vector<double> current_powers(const Scenario& s) {
    std::vector<double> p;
    p.reserve(s.bss_list.size());
    for (const Bss& b : s.bss_list) p.push_back(b.tx_power_dbm);
    return p;
}

namespace {

using sim::EventKind;
using sim::SimTime;

struct Dcf {
    enum class Access : std::uint8_t { Idle, Counting, Frozen, Transmitting };

    struct BssRuntime {
        // link configuration fixed for the run
        double tx_power_dbm = 0.0;
        bool saturated = false;
        double load_mbps = 0.0;
        double arrival_interval_us = 0.0;  // exact, scheduled cumulatively
        std::int64_t arrival_count = 0;
        std::vector<double> rate_to_sta;      // per station, 0 = out of range
        std::vector<double> threshold_to_sta; // MCS threshold of the chosen rate
        std::vector<double> signal_to_sta;    // rx power at station, dBm
        std::vector<int> usable_stas;
        bool zero_rate = false;

        // channel access state
        Access access = Access::Idle;
        int cw = 0;
        int remaining_slots = 0;
        SimTime counting_since = 0;
        std::int64_t backoff_gen = 0;

        // traffic queue (finite load only; saturated is always backlogged)
        std::int64_t queued = 0;

        // in-flight frame
        int rr_next = 0;
        int target_sta = -1;
        SimTime tx_start = 0;
        SimTime tx_end = 0;
        double frame_rate = 0.0;
        double frame_threshold = 0.0;
        double frame_signal = 0.0;
        double frame_worst_sinr = 0.0;

        // accumulators
        std::int64_t delivered_bits = 0;
        std::int64_t collisions = 0;
        std::int64_t completed_frames = 0;
        double sinr_sum_db = 0.0;
        SimTime airtime_us = 0;
        std::int64_t sampled_bits_mark = 0;

        bool backlogged() const { return saturated || queued > 0; }
    };

    const Scenario& scenario;
    SimTime duration;
    sim::EventQueue queue;
    std::vector<sim::RngStream> mac_rng;
    std::vector<BssRuntime> bss;
    std::vector<int> active;  // indices of transmitting BSSs

    // rx_mw_ap_ap[j][i]: received power (mW) at AP i from AP j transmitting.
    std::vector<std::vector<double>> rx_mw_ap_ap;
    // rx_mw_ap_sta[j][i][t]: received power (mW) at station t of BSS i from AP j.
    std::vector<std::vector<std::vector<double>>> rx_mw_ap_sta;
    double noise_mw = 0.0;
    double cca_mw = 0.0;

    ThroughputReport report;
    SimTime sample_every = 0;

    Dcf(const Scenario& s, SimTime dur, std::uint64_t seed, const SimOptions& opt)
        : scenario(s), duration(dur) {
        s.validate();
        if (dur < 0) throw std::invalid_argument("simulate_scenario: negative duration");
        queue.set_trace(opt.trace);
        sample_every = opt.sample_every_us;
        noise_mw = dbm_to_mw(s.channel.noise_floor_dbm);
        cca_mw = dbm_to_mw(s.channel.cca_threshold_dbm);

        const std::size_t n = s.bss_list.size();
        bss.resize(n);
        rx_mw_ap_ap.assign(n, std::vector<double>(n, 0.0));
        rx_mw_ap_sta.assign(n, std::vector<std::vector<double>>(n));
        mac_rng.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            mac_rng.emplace_back(seed, "mac." + s.bss_list[i].id);
        }

        for (std::size_t j = 0; j < n; ++j) {
            const Bss& src = s.bss_list[j];
            for (std::size_t i = 0; i < n; ++i) {
                const Bss& dst = s.bss_list[i];
                if (i != j) {
                    const double pl = path_loss_db(
                        src.ap.position.distance_to(dst.ap.position),
                        s.walls_between(src.ap.id, dst.ap.id), s.channel);
                    rx_mw_ap_ap[j][i] = dbm_to_mw(src.tx_power_dbm - pl);
                }
                rx_mw_ap_sta[j][i].resize(dst.stations.size());
                for (std::size_t t = 0; t < dst.stations.size(); ++t) {
                    const Node& sta = dst.stations[t];
                    const double pl = path_loss_db(
                        src.ap.position.distance_to(sta.position),
                        s.walls_between(src.ap.id, sta.id), s.channel);
                    rx_mw_ap_sta[j][i][t] = dbm_to_mw(src.tx_power_dbm - pl);
                }
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            const Bss& b = s.bss_list[i];
            BssRuntime& r = bss[i];
            r.tx_power_dbm = b.tx_power_dbm;
            r.saturated = b.traffic_load.saturated;
            r.load_mbps = b.traffic_load.mbps;
            r.cw = s.mac.cw_min;
            const std::size_t n_sta = b.stations.size();
            r.rate_to_sta.resize(n_sta);
            r.threshold_to_sta.resize(n_sta);
            r.signal_to_sta.resize(n_sta);
            for (std::size_t t = 0; t < n_sta; ++t) {
                const double signal = mw_to_dbm(rx_mw_ap_sta[i][i][t]);
                const double snr = sinr_db(signal, {}, s.channel.noise_floor_dbm);
                double rate = 0.0, threshold = 0.0;
                for (const McsEntry& e : s.mcs) {
                    if (snr >= e.min_sinr_db) {
                        rate = e.phy_rate_mbps;
                        threshold = e.min_sinr_db;
                    } else {
                        break;
                    }
                }
                r.signal_to_sta[t] = signal;
                r.rate_to_sta[t] = rate;
                r.threshold_to_sta[t] = threshold;
                if (rate > 0.0) r.usable_stas.push_back(static_cast<int>(t));
            }
            const bool wants_traffic = r.saturated || r.load_mbps > 0.0;
            r.zero_rate = wants_traffic && r.usable_stas.empty();
            if (wants_traffic && !r.usable_stas.empty()) {
                if (r.saturated) {
                    queue.schedule(0, EventKind::TrafficArrival,
                                   static_cast<std::int32_t>(i));
                } else {
                    // Frame k arrives at ceil(k * payload/load), keeping the
                    // cumulative arrival rate strictly below the offered load.
                    r.arrival_interval_us =
                        static_cast<double>(s.mac.payload_bits) / r.load_mbps;
                    const SimTime first =
                        static_cast<SimTime>(std::ceil(r.arrival_interval_us));
                    if (first <= duration) {
                        r.arrival_count = 1;
                        queue.schedule(first, EventKind::TrafficArrival,
                                       static_cast<std::int32_t>(i));
                    }
                }
            }
        }

        if (sample_every > 0 && sample_every <= duration) {
            queue.schedule(sample_every, EventKind::MonitoringSample);
        }
    }

    bool channel_busy_for(int listener) const {
        double sum_mw = 0.0;
        const SimTime now = queue.now();
        for (int j : active) {
            if (j == listener) continue;
            if (bss[j].tx_end <= now) continue;  // ending this instant
            sum_mw += rx_mw_ap_ap[j][listener];
        }
        return sum_mw >= cca_mw;
    }

    double current_sinr_for(int i) const {
        const BssRuntime& r = bss[i];
        const SimTime now = queue.now();
        double interference_mw = 0.0;
        for (int j : active) {
            if (j == i) continue;
            if (bss[j].tx_end <= now) continue;
            interference_mw += rx_mw_ap_sta[j][i][static_cast<std::size_t>(r.target_sta)];
        }
        return r.frame_signal - mw_to_dbm(interference_mw + noise_mw);
    }

    void begin_access(int i) {
        BssRuntime& r = bss[i];
        r.remaining_slots =
            static_cast<int>(mac_rng[static_cast<std::size_t>(i)].uniform_int(
                static_cast<std::uint64_t>(r.cw)));
        if (channel_busy_for(i)) {
            r.access = Access::Frozen;
        } else {
            start_counting(i, queue.now());
        }
    }

    void start_counting(int i, SimTime since) {
        BssRuntime& r = bss[i];
        r.access = Access::Counting;
        r.counting_since = since;
        ++r.backoff_gen;
        queue.schedule(since + static_cast<SimTime>(r.remaining_slots) * scenario.mac.slot_us,
                       EventKind::BackoffExpiry, static_cast<std::int32_t>(i), r.backoff_gen);
    }

    void freeze(int i) {
        BssRuntime& r = bss[i];
        const SimTime now = queue.now();
        if (now > r.counting_since) {
            const SimTime elapsed = (now - r.counting_since) / scenario.mac.slot_us;
            r.remaining_slots -= static_cast<int>(elapsed);
        }
        r.access = Access::Frozen;
    }

    void on_arrival(const sim::Event& e) {
        const int i = e.subject;
        BssRuntime& r = bss[static_cast<std::size_t>(i)];
        if (!r.saturated) {
            ++r.queued;
            ++r.arrival_count;
            const SimTime next = static_cast<SimTime>(
                std::ceil(static_cast<double>(r.arrival_count) * r.arrival_interval_us));
            if (next <= duration) {
                queue.schedule(next, EventKind::TrafficArrival, e.subject);
            }
        }
        if (r.access == Access::Idle && r.backlogged() && !r.usable_stas.empty()) {
            begin_access(i);
        }
    }

    void on_backoff_expiry(const sim::Event& e) {
        const int i = e.subject;
        BssRuntime& r = bss[static_cast<std::size_t>(i)];
        if (r.access != Access::Counting || e.tag != r.backoff_gen) return;  // stale
        r.access = Access::Transmitting;
        queue.schedule(e.time, EventKind::TxStart, e.subject);
    }

    void on_tx_start(const sim::Event& e) {
        const int i = e.subject;
        BssRuntime& r = bss[static_cast<std::size_t>(i)];
        const SimTime now = e.time;

        r.target_sta = r.usable_stas[static_cast<std::size_t>(r.rr_next) %
                                     r.usable_stas.size()];
        r.rr_next = (r.rr_next + 1) % static_cast<int>(r.usable_stas.size());
        const std::size_t t = static_cast<std::size_t>(r.target_sta);
        r.frame_rate = r.rate_to_sta[t];
        r.frame_threshold = r.threshold_to_sta[t];
        r.frame_signal = r.signal_to_sta[t];
        const SimTime air = static_cast<SimTime>(
            std::ceil(static_cast<double>(scenario.mac.payload_bits) / r.frame_rate));
        r.tx_start = now;
        r.tx_end = now + scenario.mac.overhead_us + air;

        active.push_back(i);
        r.frame_worst_sinr = current_sinr_for(i);
        for (int j : active) {
            if (j == i || bss[j].tx_end <= now) continue;
            BssRuntime& other = bss[static_cast<std::size_t>(j)];
            other.frame_worst_sinr = std::min(other.frame_worst_sinr, current_sinr_for(j));
        }
        queue.schedule(r.tx_end, EventKind::TxEnd, e.subject);

        // Carrier sense: counting neighbours that hear this transmission
        // freeze, except an expiry landing at this exact instant, which is a
        // genuine collision.
        for (std::size_t j = 0; j < bss.size(); ++j) {
            if (static_cast<int>(j) == i) continue;
            BssRuntime& other = bss[j];
            if (other.access != Access::Counting) continue;
            const SimTime expiry = other.counting_since +
                                   static_cast<SimTime>(other.remaining_slots) *
                                       scenario.mac.slot_us;
            if (expiry <= now) continue;
            if (channel_busy_for(static_cast<int>(j))) freeze(static_cast<int>(j));
        }
    }

    void on_tx_end(const sim::Event& e) {
        const int i = e.subject;
        BssRuntime& r = bss[static_cast<std::size_t>(i)];
        active.erase(std::find(active.begin(), active.end(), i));

        r.airtime_us += r.tx_end - r.tx_start;
        ++r.completed_frames;
        r.sinr_sum_db += r.frame_worst_sinr;
        const bool success = r.frame_worst_sinr >= r.frame_threshold;
        if (success) {
            r.delivered_bits += scenario.mac.payload_bits;
            r.cw = scenario.mac.cw_min;
            if (!r.saturated && r.queued > 0) --r.queued;
        } else {
            ++r.collisions;
            r.cw = std::min(2 * r.cw + 1, scenario.mac.cw_max);
        }

        r.access = Access::Idle;
        if (r.backlogged() && !r.usable_stas.empty()) {
            begin_access(i);
        }

        for (std::size_t j = 0; j < bss.size(); ++j) {
            if (static_cast<int>(j) == i) continue;
            BssRuntime& other = bss[j];
            if (other.access == Access::Frozen &&
                !channel_busy_for(static_cast<int>(j))) {
                start_counting(static_cast<int>(j), e.time + scenario.mac.difs_us);
            }
        }
    }

    void on_sample(const sim::Event& e) {
        ThroughputSample sample;
        sample.time_us = e.time;
        sample.mbps_per_bss.reserve(bss.size());
        for (BssRuntime& r : bss) {
            const std::int64_t delta = r.delivered_bits - r.sampled_bits_mark;
            r.sampled_bits_mark = r.delivered_bits;
            sample.mbps_per_bss.push_back(static_cast<double>(delta) /
                                          static_cast<double>(sample_every));
        }
        report.samples.push_back(std::move(sample));
        if (e.time + sample_every <= duration) {
            queue.schedule(e.time + sample_every, EventKind::MonitoringSample);
        }
    }

    ThroughputReport run() {
        sim::HandlerTable handlers;
        handlers[static_cast<std::size_t>(EventKind::TxStart)] =
            [this](const sim::Event& e) { on_tx_start(e); };
        handlers[static_cast<std::size_t>(EventKind::TxEnd)] =
            [this](const sim::Event& e) { on_tx_end(e); };
        handlers[static_cast<std::size_t>(EventKind::BackoffExpiry)] =
            [this](const sim::Event& e) { on_backoff_expiry(e); };
        handlers[static_cast<std::size_t>(EventKind::TrafficArrival)] =
            [this](const sim::Event& e) { on_arrival(e); };
        handlers[static_cast<std::size_t>(EventKind::IterationBoundary)] =
            [](const sim::Event&) {};
        handlers[static_cast<std::size_t>(EventKind::MonitoringSample)] =
            [this](const sim::Event& e) { on_sample(e); };

        const sim::RunStats stats = run_until(queue, handlers, duration);

        report.window_start_us = 0;
        report.window_end_us = duration;
        report.events_processed = stats.processed;
        report.per_bss.reserve(bss.size());
        const double dur_us = static_cast<double>(duration);
        for (std::size_t i = 0; i < bss.size(); ++i) {
            const BssRuntime& r = bss[i];
            BssThroughput row;
            row.bss_id = scenario.bss_list[i].id;
            row.delivered_mbps =
                duration > 0 ? static_cast<double>(r.delivered_bits) / dur_us : 0.0;
            row.airtime_fraction =
                duration > 0 ? static_cast<double>(r.airtime_us) / dur_us : 0.0;
            row.collisions = r.collisions;
            row.mean_sinr_db =
                r.completed_frames > 0
                    ? r.sinr_sum_db / static_cast<double>(r.completed_frames)
                    : 0.0;
            row.zero_rate_link = r.zero_rate;
            report.per_bss.push_back(std::move(row));
        }
        return std::move(report);
    }
};

}  // namespace

ThroughputReport simulate_scenario(const Scenario& s, sim::SimTime duration,
                                   std::uint64_t seed, const SimOptions& options) {
    Dcf sim(s, duration, seed, options);
    return sim.run();
}

}  // namespace wlansim::wlan
