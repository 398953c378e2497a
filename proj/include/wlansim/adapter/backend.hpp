#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wlansim/sim/time.hpp"
#include "wlansim/wlan/dcf.hpp"
#include "wlansim/wlan/scenario.hpp"

namespace wlansim::adapter {

enum class CommandKind : std::uint8_t { Start, Stop, Configure, Status, Collect };

std::string command_kind_name(CommandKind k);

// Standardized backend command. Configure keys are restricted to the
// documented whitelist: tx_power.<bss_id>, traffic_load.<bss_id>,
// sim.duration.
struct AdapterCommand {
    CommandKind kind = CommandKind::Status;

    // Start payload
    wlan::Scenario scenario;
    sim::SimTime duration_us = 0;
    std::uint64_t seed = 0;

    // Configure payload
    std::map<std::string, std::string> params;

    static AdapterCommand start(wlan::Scenario s, sim::SimTime duration,
                                std::uint64_t seed);
    static AdapterCommand stop();
    static AdapterCommand configure(std::map<std::string, std::string> params);
    static AdapterCommand status();
    static AdapterCommand collect();
};

enum class BackendPhase : std::uint8_t { Idle, Running, Finished };

std::string backend_phase_name(BackendPhase p);

enum class ResponseCode : std::uint8_t {
    Ok,
    IllegalState,
    UnsupportedParameter,
    InvalidArgument,
};

std::string response_code_name(ResponseCode c);

struct Response {
    ResponseCode code = ResponseCode::Ok;
    std::string message;
    BackendPhase phase = BackendPhase::Idle;   // phase after the command
    std::optional<wlan::ThroughputReport> report;  // Collect only

    bool ok() const { return code == ResponseCode::Ok; }
};

struct TranscriptEntry {
    std::uint64_t seq = 0;
    std::string command;  // command name, or "reset"
    std::string args;     // canonical argument encoding
    std::string result;
};

struct BackendCapabilities {
    std::vector<std::string> technologies;
    std::string monitoring_mode;            // "batch"
    int max_parallel_instances = 0;
    std::vector<std::string> config_keys;   // whitelist patterns
};

// True iff the key matches the advertised whitelist; the orchestrator gates
// Configure commands on this before dispatching.
bool key_allowed(const BackendCapabilities& caps, const std::string& key);

// In-process reference backend. Lifecycle: Idle -> (Start) -> Running ->
// Finished, back to Idle via reset(). Start runs the simulation to
// completion (batch monitoring), Collect returns the finished report, Stop
// is idempotent, Status is side-effect free. Every accepted command is
// appended to the transcript.
class ReferenceBackend {
public:
    Response dispatch(const AdapterCommand& cmd);

    void reset();  // Finished/Idle -> Idle; recorded in the transcript

    BackendPhase phase() const { return phase_; }
    const std::vector<TranscriptEntry>& transcript() const { return transcript_; }

    // `seq,command,args,result`
    std::string transcript_csv() const;

    static BackendCapabilities capabilities();

private:
    Response accept(const AdapterCommand& cmd, Response r, const std::string& args);

    BackendPhase phase_ = BackendPhase::Idle;
    std::map<std::string, std::string> pending_params_;
    std::optional<wlan::ThroughputReport> report_;
    std::vector<TranscriptEntry> transcript_;
    std::uint64_t next_seq_ = 0;
};

// Replays a transcript (as produced by transcript_csv) on a fresh backend;
// returns the backend in its reproduced final state.
ReferenceBackend replay_transcript(const std::string& transcript_csv);

}  // namespace wlansim::adapter
