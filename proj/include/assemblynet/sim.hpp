#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assemblynet/assembly.hpp"
#include "assemblynet/bytes.hpp"
#include "assemblynet/gossip.hpp"
#include "assemblynet/rational.hpp"
#include "assemblynet/throttle.hpp"

namespace assemblynet {

struct AdversarySpec {
    enum class Kind { sybil, botnet, amplifier, disruptor };

    Kind kind = Kind::sybil;
    std::string label;
    Ratio rate{1};              // attempts per second
    Ratio ratio{1};             // expected response ratio (amplifier)
    int forged_count = 5;       // distinct forged credentials (sybil)
    int shares_scripted = 0;    // cooperating share holders (disruptor)
    std::optional<Tick> start_tick;  // defaults to commencement
};

std::string to_string(AdversarySpec::Kind kind);
AdversarySpec::Kind adversary_kind_from_string(const std::string& text);

struct InjunctionScriptEntry {
    Tick time = 0;
    Injunction injunction;
};

/// Everything a run needs. Node layout: 0 organizer (issuer, sequencer),
/// 1 supervisor (read-only observer), 2..2+N-1 participants, adversaries
/// after. Zeroed manifest identity fields are derived from the seed.
struct ScenarioConfig {
    std::optional<std::uint64_t> seed;
    Tick duration = 0;
    std::int64_t participants = 0;

    AssemblyManifest manifest;  // manifest.target is authoritative
    Tick injunction_window = kDefaultInjunctionWindow;

    Ratio queue_max{1};
    bool target_reachable = true;

    Ratio burst{5};
    Ratio r_human_max{1};
    Ratio amplification_threshold{1};

    int abuse_threshold = 3;
    std::string revocation_initiator = "participants";

    int fanout = 1;
    std::optional<std::size_t> extra_edges;  // default: one per node
    std::optional<Topology> topology;        // overrides the random graph

    std::vector<AdversarySpec> adversaries;
    std::vector<InjunctionScriptEntry> injunctions;
};

/// Scenario text uses the manifest dialect with [manifest], [target],
/// [throttle], [gossip], [injunction*], and [adversary.*] sections. A
/// `topology` path under [gossip] is returned for the caller to resolve.
struct ParsedScenario {
    ScenarioConfig config;
    std::optional<std::string> topology_path;
};

ParsedScenario parse_scenario(std::string_view text);

/// One event log record: `tick,kind,key=value,...`. Keys and values never
/// contain commas, equals signs, or newlines.
struct Event {
    Tick tick = 0;
    std::string kind;
    std::vector<std::pair<std::string, std::string>> fields;

    const std::string* field(const std::string& key) const;
};

std::string serialize_event(const Event& event);
std::vector<Event> parse_event_log(std::string_view text);

struct RevocationRecord {
    Digest32 pseudonym{};
    Tick tick = 0;
    Digest32 identity_digest{};

    bool operator==(const RevocationRecord&) const = default;
};

struct Metrics {
    Ratio availability{1};
    Ratio visibility{1};
    std::uint64_t offered = 0;
    std::uint64_t admitted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::map<Digest32, std::uint64_t> admitted_by_pseudonym;
    std::map<std::string, std::uint64_t> rejects_by_reason;
    std::vector<RevocationRecord> revocations;
    std::optional<int> gossip_convergence_round;

    bool operator==(const Metrics&) const = default;
};

struct RunResult {
    Metrics metrics;
    std::string event_log;
    std::string board_export;
    std::string timeline_csv;  // tick,queue,state over the monitored window
    std::string summary_text;
    Tick commence_tick = 0;    // first tick the assembly was live, 0 if never
    bool commenced = false;
};

/// Deterministic under config.seed. Throws Errc::invalid_scenario on a
/// config that cannot be simulated and Errc::not_compliant when the
/// manifest fails its compliance check.
RunResult run(const ScenarioConfig& config);

/// Re-derives the metrics from the event log, verifies the board chain
/// and the announcement gate, and checks the per-credential window bound.
/// Throws Errc::audit_mismatch naming the first divergence.
void replay_audit(const RunResult& result, const ScenarioConfig& config);

/// Trace check for the token-bucket guarantee: for ascending admission
/// times, every window of length T holds at most b + r*T admissions.
bool window_bound_satisfied(const std::vector<Tick>& admit_times, Ratio r, Ratio b);

}  // namespace assemblynet
