#include "wlansim/adapter/backend.hpp"

#include <charconv>
#include <stdexcept>
#include <thread>

#include "wlansim/util/text.hpp"
#include "wlansim/wlan/scenario_io.hpp"

namespace wlansim::adapter {

using nlohmann::json;

std::string command_kind_name(CommandKind k) {
    switch (k) {
        case CommandKind::Start: return "start";
        case CommandKind::Stop: return "stop";
        case CommandKind::Configure: return "configure";
        case CommandKind::Status: return "status";
        case CommandKind::Collect: return "collect";
    }
    return "unknown";
}

std::string backend_phase_name(BackendPhase p) {
    switch (p) {
        case BackendPhase::Idle: return "idle";
        case BackendPhase::Running: return "running";
        case BackendPhase::Finished: return "finished";
    }
    return "unknown";
}

std::string response_code_name(ResponseCode c) {
    switch (c) {
        case ResponseCode::Ok: return "ok";
        case ResponseCode::IllegalState: return "illegal_state";
        case ResponseCode::UnsupportedParameter: return "unsupported_parameter";
        case ResponseCode::InvalidArgument: return "invalid_argument";
    }
    return "unknown";
}

AdapterCommand AdapterCommand::start(wlan::Scenario s, sim::SimTime duration,
                                     std::uint64_t seed) {
    AdapterCommand c;
    c.kind = CommandKind::Start;
    c.scenario = std::move(s);
    c.duration_us = duration;
    c.seed = seed;
    return c;
}

AdapterCommand AdapterCommand::stop() {
    AdapterCommand c;
    c.kind = CommandKind::Stop;
    return c;
}

AdapterCommand AdapterCommand::configure(std::map<std::string, std::string> params) {
    AdapterCommand c;
    c.kind = CommandKind::Configure;
    c.params = std::move(params);
    return c;
}

AdapterCommand AdapterCommand::status() {
    AdapterCommand c;
    c.kind = CommandKind::Status;
    return c;
}

AdapterCommand AdapterCommand::collect() {
    AdapterCommand c;
    c.kind = CommandKind::Collect;
    return c;
}

namespace {

bool whitelisted_key(const std::string& key) {
    const auto has_prefix = [&](const std::string& prefix) {
        return key.size() > prefix.size() && key.compare(0, prefix.size(), prefix) == 0;
    };
    return key == "sim.duration" || has_prefix("tx_power.") ||
           has_prefix("traffic_load.");
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc{} && res.ptr == end;
}

// Applies pending Configure overrides onto a Start payload. Throws
// std::invalid_argument naming the parameter on bad values or targets.
void apply_overrides(const std::map<std::string, std::string>& params,
                     wlan::Scenario& scenario, sim::SimTime& duration_us) {
    for (const auto& [key, value] : params) {
        if (key == "sim.duration") {
            double secs = 0.0;
            if (!parse_double(value, secs) || secs < 0.0) {
                throw std::invalid_argument("sim.duration: expected seconds >= 0");
            }
            duration_us = sim::seconds(secs);
            continue;
        }
        const std::size_t dot = key.find('.');
        const std::string field = key.substr(0, dot);
        const std::string bss_id = key.substr(dot + 1);
        wlan::Bss* target = nullptr;
        for (wlan::Bss& b : scenario.bss_list) {
            if (b.id == bss_id) {
                target = &b;
                break;
            }
        }
        if (target == nullptr) {
            throw std::invalid_argument(key + ": no such BSS '" + bss_id + "'");
        }
        if (field == "tx_power") {
            double dbm = 0.0;
            if (!parse_double(value, dbm)) {
                throw std::invalid_argument(key + ": expected a dBm value");
            }
            target->tx_power_dbm = dbm;
        } else {
            if (value == "saturated") {
                target->traffic_load = wlan::TrafficLoad::saturated_load();
            } else {
                double mbps = 0.0;
                if (!parse_double(value, mbps) || mbps < 0.0) {
                    throw std::invalid_argument(key +
                                                ": expected Mbps >= 0 or \"saturated\"");
                }
                target->traffic_load = wlan::TrafficLoad::finite(mbps);
            }
        }
    }
}

std::string encode_configure_args(const std::map<std::string, std::string>& params) {
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty()) out += ';';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

}  // namespace

bool key_allowed(const BackendCapabilities& caps, const std::string& key) {
    for (const std::string& pattern : caps.config_keys) {
        if (pattern.size() >= 2 && pattern.compare(pattern.size() - 2, 2, ".*") == 0) {
            const std::string prefix = pattern.substr(0, pattern.size() - 1);
            if (key.size() > prefix.size() &&
                key.compare(0, prefix.size(), prefix) == 0) {
                return true;
            }
        } else if (key == pattern) {
            return true;
        }
    }
    return false;
}

BackendCapabilities ReferenceBackend::capabilities() {
    BackendCapabilities caps;
    caps.technologies = {"ieee80211-dcf-downlink"};
    caps.monitoring_mode = "batch";
    const unsigned hw = std::thread::hardware_concurrency();
    caps.max_parallel_instances = hw == 0 ? 1 : static_cast<int>(hw);
    caps.config_keys = {"tx_power.*", "traffic_load.*", "sim.duration"};
    return caps;
}

Response ReferenceBackend::accept(const AdapterCommand& cmd, Response r,
                                  const std::string& args) {
    transcript_.push_back(TranscriptEntry{next_seq_++, command_kind_name(cmd.kind), args,
                                          response_code_name(r.code)});
    return r;
}

Response ReferenceBackend::dispatch(const AdapterCommand& cmd) {
    Response r;
    switch (cmd.kind) {
        case CommandKind::Status: {
            r.phase = phase_;
            return accept(cmd, r, "");
        }
        case CommandKind::Stop: {
            // Idempotent: a finished or idle backend stays put.
            if (phase_ == BackendPhase::Running) phase_ = BackendPhase::Finished;
            r.phase = phase_;
            return accept(cmd, r, "");
        }
        case CommandKind::Configure: {
            r.phase = phase_;
            if (phase_ != BackendPhase::Idle) {
                r.code = ResponseCode::IllegalState;
                r.message = "configure requires an idle backend";
                return r;
            }
            for (const auto& [key, value] : cmd.params) {
                (void)value;
                if (!whitelisted_key(key)) {
                    r.code = ResponseCode::UnsupportedParameter;
                    r.message = "parameter '" + key + "' is not in the whitelist";
                    return r;
                }
            }
            for (const auto& [key, value] : cmd.params) {
                pending_params_[key] = value;
            }
            return accept(cmd, r, encode_configure_args(cmd.params));
        }
        case CommandKind::Start: {
            r.phase = phase_;
            if (phase_ != BackendPhase::Idle) {
                r.code = ResponseCode::IllegalState;
                r.message = "start requires an idle backend (reset it first)";
                return r;
            }
            wlan::Scenario scenario = cmd.scenario;
            sim::SimTime duration = cmd.duration_us;
            try {
                apply_overrides(pending_params_, scenario, duration);
                scenario.validate();
                phase_ = BackendPhase::Running;
                report_ = wlan::simulate_scenario(scenario, duration, cmd.seed);
            } catch (const std::exception& e) {
                phase_ = BackendPhase::Idle;
                report_.reset();
                r.code = ResponseCode::InvalidArgument;
                r.message = e.what();
                r.phase = phase_;
                return r;
            }
            phase_ = BackendPhase::Finished;
            pending_params_.clear();
            r.phase = phase_;
            json args;
            args["scenario"] = wlan::scenario_to_json(cmd.scenario);
            args["duration_us"] = cmd.duration_us;
            args["seed"] = cmd.seed;
            return accept(cmd, r, args.dump());
        }
        case CommandKind::Collect: {
            r.phase = phase_;
            if (phase_ != BackendPhase::Finished || !report_.has_value()) {
                r.code = ResponseCode::IllegalState;
                r.message = "collect requires a finished run";
                return r;
            }
            r.report = report_;
            return accept(cmd, r, "");
        }
    }
    r.code = ResponseCode::InvalidArgument;
    r.message = "unknown command";
    return r;
}

void ReferenceBackend::reset() {
    phase_ = BackendPhase::Idle;
    report_.reset();
    pending_params_.clear();
    transcript_.push_back(TranscriptEntry{next_seq_++, "reset", "", "ok"});
}

std::string ReferenceBackend::transcript_csv() const {
    std::string out = "seq,command,args,result\n";
    for (const TranscriptEntry& e : transcript_) {
        out += std::to_string(e.seq);
        out += ',';
        out += util::csv_escape(e.command);
        out += ',';
        out += util::csv_escape(e.args);
        out += ',';
        out += util::csv_escape(e.result);
        out += '\n';
    }
    return out;
}

ReferenceBackend replay_transcript(const std::string& transcript_csv) {
    ReferenceBackend backend;
    const std::vector<std::string> lines = util::split(transcript_csv, '\n');
    for (std::size_t n = 1; n < lines.size(); ++n) {  // skip header
        if (lines[n].empty()) continue;
        const std::vector<std::string> fields = util::csv_split(lines[n]);
        if (fields.size() != 4) {
            throw std::invalid_argument("transcript: malformed line " +
                                        std::to_string(n + 1));
        }
        const std::string& command = fields[1];
        const std::string& args = fields[2];
        if (command == "reset") {
            backend.reset();
        } else if (command == "start") {
            const json j = wlan::parse_json_text(args, "transcript start args");
            backend.dispatch(AdapterCommand::start(
                wlan::scenario_from_json(j.at("scenario")),
                j.at("duration_us").get<sim::SimTime>(),
                j.at("seed").get<std::uint64_t>()));
        } else if (command == "configure") {
            std::map<std::string, std::string> params;
            if (!args.empty()) {
                for (const std::string& kv : util::split(args, ';')) {
                    const std::size_t eq = kv.find('=');
                    params[kv.substr(0, eq)] = kv.substr(eq + 1);
                }
            }
            backend.dispatch(AdapterCommand::configure(std::move(params)));
        } else if (command == "stop") {
            backend.dispatch(AdapterCommand::stop());
        } else if (command == "status") {
            backend.dispatch(AdapterCommand::status());
        } else if (command == "collect") {
            backend.dispatch(AdapterCommand::collect());
        } else {
            throw std::invalid_argument("transcript: unknown command '" + command + "'");
        }
    }
    return backend;
}

}  // namespace wlansim::adapter
