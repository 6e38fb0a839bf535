#include "assemblynet/sim.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "assemblynet/config.hpp"
#include "assemblynet/errors.hpp"
#include "assemblynet/identity.hpp"
#include "assemblynet/revocation.hpp"
#include "assemblynet/rng.hpp"
#include "assemblynet/visibility.hpp"

namespace assemblynet {

std::string to_string(AdversarySpec::Kind kind) {
    switch (kind) {
        case AdversarySpec::Kind::sybil: return "sybil";
        case AdversarySpec::Kind::botnet: return "botnet";
        case AdversarySpec::Kind::amplifier: return "amplifier";
        case AdversarySpec::Kind::disruptor: return "disruptor";
    }
    return "sybil";
}

AdversarySpec::Kind adversary_kind_from_string(const std::string& text) {
    if (text == "sybil") return AdversarySpec::Kind::sybil;
    if (text == "botnet") return AdversarySpec::Kind::botnet;
    if (text == "amplifier") return AdversarySpec::Kind::amplifier;
    if (text == "disruptor") return AdversarySpec::Kind::disruptor;
    throw Error(Errc::invalid_scenario, "unknown adversary kind: " + text);
}

// ---------------------------------------------------------------------------
// Scenario parsing

namespace {

Injunction parse_decision(const std::string& text) {
    if (text == "forbid") return Injunction{Injunction::Kind::forbid, 0};
    if (text == "allow") return Injunction{Injunction::Kind::allow, 0};
    if (text.starts_with("delay ")) {
        std::string amount = text.substr(6);
        std::uint64_t ticks = 0;
        auto [ptr, ec] = std::from_chars(amount.data(), amount.data() + amount.size(), ticks);
        if (ec != std::errc() || ptr != amount.data() + amount.size())
            throw Error(Errc::invalid_scenario, "bad delay amount: " + amount);
        return Injunction{Injunction::Kind::delay, ticks};
    }
    throw Error(Errc::invalid_scenario, "decision must be allow, forbid, or delay <ticks>");
}

Attestation default_attestation(const ConfigFile& file, const std::string& key,
                                const std::string& fallback) {
    Attestation a;
    a.text = file.get_string_or("manifest", key, fallback);
    return a;
}

}  // namespace

ParsedScenario parse_scenario(std::string_view text) {
    ConfigFile file = parse_config(text);
    file.require_known_keys("", {"seed", "duration", "participants", "abuse_threshold",
                                 "revocation_initiator", "injunction_window"});
    file.require_known_keys(
        "manifest",
        {"assembly_id", "opinion_statement", "start_time", "end_time",
         "per_credential_rate", "critical_mass_min", "revocation_k", "revocation_n",
         "board_mirroring", "supervisor_channel", "subsidiarity", "proportionality",
         "no_coercion", "no_coercion_declared"});
    file.require_known_keys("target", {"address", "capacity", "queue_max",
                                       "is_general_interest", "size_class", "reachable"});
    file.require_known_keys("throttle", {"burst", "r_human_max", "amplification_threshold"});
    file.require_known_keys("gossip", {"fanout", "extra_edges", "topology"});

    ParsedScenario out;
    ScenarioConfig& cfg = out.config;

    if (file.has("", "seed"))
        cfg.seed = static_cast<std::uint64_t>(file.get_int("", "seed"));
    cfg.duration = static_cast<Tick>(file.get_int("", "duration"));
    cfg.participants = file.get_int_or("", "participants", 0);
    cfg.abuse_threshold = static_cast<int>(file.get_int_or("", "abuse_threshold", 3));
    cfg.revocation_initiator =
        file.get_string_or("", "revocation_initiator", "participants");
    cfg.injunction_window = static_cast<Tick>(
        file.get_int_or("", "injunction_window",
                        static_cast<std::int64_t>(kDefaultInjunctionWindow)));

    AssemblyManifest& m = cfg.manifest;
    if (file.has("manifest", "assembly_id")) {
        Bytes id = from_hex(file.get_string("manifest", "assembly_id"));
        if (id.size() != m.assembly_id.size())
            throw Error(Errc::invalid_scenario, "assembly_id must be 16 bytes of hex");
        std::copy(id.begin(), id.end(), m.assembly_id.begin());
    }
    m.opinion_statement = file.get_string_or(
        "manifest", "opinion_statement",
        "we assemble to express our collective objection to the target's conduct");
    m.start_time = static_cast<Tick>(file.get_int_or(
        "manifest", "start_time", static_cast<std::int64_t>(cfg.injunction_window)));
    m.end_time = static_cast<Tick>(file.get_int_or(
        "manifest", "end_time", static_cast<std::int64_t>(m.start_time + 2592000)));
    m.per_credential_rate = file.get_ratio_or("manifest", "per_credential_rate", Ratio(1));
    m.critical_mass_min = file.get_int_or("manifest", "critical_mass_min", 2);
    m.revocation_threshold_k =
        static_cast<int>(file.get_int_or("manifest", "revocation_k", 2));
    m.revocation_share_count_n =
        static_cast<int>(file.get_int_or("manifest", "revocation_n", 3));
    m.board_mirroring = file.get_bool_or("manifest", "board_mirroring", true);
    m.supervisor_channel = file.get_bool_or("manifest", "supervisor_channel", true);
    m.attestations.subsidiarity = default_attestation(
        file, "subsidiarity", "negotiation and public petition were pursued first");
    m.attestations.proportionality = default_attestation(
        file, "proportionality", "impact is limited to the announced window and rate");
    m.attestations.no_coercion = default_attestation(
        file, "no_coercion", "participation is voluntary and individually chosen");
    m.attestations.no_coercion_declared =
        file.get_bool_or("manifest", "no_coercion_declared", true);

    m.target.address = file.get_string_or("target", "address", "target.example");
    m.target.declared_capacity = file.get_ratio("target", "capacity");
    m.target.is_general_interest = file.get_bool_or("target", "is_general_interest", false);
    m.target.size_class =
        parse_size_class(file.get_string_or("target", "size_class", "medium"));
    cfg.queue_max = file.get_ratio_or("target", "queue_max", Ratio(1000));
    cfg.target_reachable = file.get_bool_or("target", "reachable", true);

    cfg.burst = file.get_ratio_or("throttle", "burst", Ratio(5));
    cfg.r_human_max = file.get_ratio_or("throttle", "r_human_max", Ratio(1));
    cfg.amplification_threshold =
        file.get_ratio_or("throttle", "amplification_threshold", Ratio(1));

    cfg.fanout = static_cast<int>(file.get_int_or("gossip", "fanout", 1));
    if (file.has("gossip", "extra_edges"))
        cfg.extra_edges = static_cast<std::size_t>(file.get_int("gossip", "extra_edges"));
    if (file.has("gossip", "topology"))
        out.topology_path = file.get_string("gossip", "topology");

    for (const std::string& section : file.sections_with_prefix("injunction")) {
        if (section != "injunction" && !section.starts_with("injunction."))
            throw Error(Errc::invalid_scenario, "unknown section [" + section + "]");
        file.require_known_keys(section, {"time", "decision"});
        InjunctionScriptEntry entry;
        entry.time = static_cast<Tick>(file.get_int(section, "time"));
        entry.injunction = parse_decision(file.get_string(section, "decision"));
        cfg.injunctions.push_back(entry);
    }
    std::stable_sort(cfg.injunctions.begin(), cfg.injunctions.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });

    for (const std::string& section : file.sections_with_prefix("adversary.")) {
        file.require_known_keys(section,
                                {"kind", "rate", "ratio", "count", "shares", "start"});
        AdversarySpec spec;
        spec.label = section.substr(std::string("adversary.").size());
        spec.kind = adversary_kind_from_string(file.get_string(section, "kind"));
        spec.rate = file.get_ratio_or(section, "rate", Ratio(1));
        spec.ratio = file.get_ratio_or(
            section, "ratio",
            spec.kind == AdversarySpec::Kind::amplifier ? parse_ratio("8.5") : Ratio(1));
        spec.forged_count = static_cast<int>(file.get_int_or(section, "count", 5));
        spec.shares_scripted = static_cast<int>(file.get_int_or(section, "shares", 0));
        if (file.has(section, "start"))
            spec.start_tick = static_cast<Tick>(file.get_int(section, "start"));
        cfg.adversaries.push_back(std::move(spec));
    }

    for (const auto& [name, entries] : file.sections)
        if (!name.empty() && name != "manifest" && name != "target" &&
            name != "throttle" && name != "gossip" && name != "injunction" &&
            !name.starts_with("injunction.") && !name.starts_with("adversary."))
            throw Error(Errc::invalid_scenario, "unknown section [" + name + "]");

    return out;
}

// ---------------------------------------------------------------------------
// Event log

const std::string* Event::field(const std::string& key) const {
    for (const auto& [k, v] : fields)
        if (k == key) return &v;
    return nullptr;
}

namespace {

bool valid_log_token(std::string_view s, bool allow_equals) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c == ',' || c == '\n' || c < 0x20 || c > 0x7e) return false;
        if (!allow_equals && c == '=') return false;
    }
    return true;
}

}  // namespace

std::string serialize_event(const Event& event) {
    if (!valid_log_token(event.kind, false))
        throw Error(Errc::parse_error, "bad event kind");
    std::string out = std::to_string(event.tick);
    out += ',';
    out += event.kind;
    for (const auto& [k, v] : event.fields) {
        if (!valid_log_token(k, false) || !valid_log_token(v, false))
            throw Error(Errc::parse_error, "bad event field in " + event.kind);
        out += ',';
        out += k;
        out += '=';
        out += v;
    }
    out += '\n';
    return out;
}

std::vector<Event> parse_event_log(std::string_view text) {
    std::vector<Event> events;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            throw ParseError("missing trailing newline", line_no + 1);
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        Event event;
        std::size_t field_index = 0;
        std::size_t cursor = 0;
        while (cursor <= line.size()) {
            std::size_t comma = line.find(',', cursor);
            std::string_view part = line.substr(
                cursor, comma == std::string_view::npos ? line.size() - cursor
                                                        : comma - cursor);
            cursor = comma == std::string_view::npos ? line.size() + 1 : comma + 1;

            if (field_index == 0) {
                auto [ptr, ec] =
                    std::from_chars(part.data(), part.data() + part.size(), event.tick);
                if (ec != std::errc() || ptr != part.data() + part.size() || part.empty() ||
                    (part.size() > 1 && part.front() == '0'))
                    throw ParseError("bad tick", line_no, 1);
            } else if (field_index == 1) {
                if (!valid_log_token(part, false))
                    throw ParseError("bad event kind", line_no, 1);
                event.kind = std::string(part);
            } else {
                std::size_t eq = part.find('=');
                if (eq == std::string_view::npos || eq == 0 || eq == part.size() - 1)
                    throw ParseError("expected key=value", line_no, 1);
                std::string_view k = part.substr(0, eq);
                std::string_view v = part.substr(eq + 1);
                if (!valid_log_token(k, false) || !valid_log_token(v, false))
                    throw ParseError("bad field token", line_no, 1);
                event.fields.emplace_back(std::string(k), std::string(v));
            }
            ++field_index;
        }
        if (field_index < 2) throw ParseError("missing event kind", line_no, 1);
        events.push_back(std::move(event));
    }
    return events;
}

// ---------------------------------------------------------------------------
// Window bound

bool window_bound_satisfied(const std::vector<Tick>& admit_times, Ratio r, Ratio b) {
    // count(i..j) <= b + r*(t_j - t_i) for all i <= j is equivalent to
    // max over i<=j of h(i) <= h(j) + b - 1 with h(x) = r*t_x - x,
    // checkable with a prefix maximum in one pass.
    Ratio prefix_max;
    for (std::size_t j = 0; j < admit_times.size(); ++j) {
        if (j > 0 && admit_times[j] < admit_times[j - 1]) return false;
        Ratio h = r * Ratio(static_cast<std::int64_t>(admit_times[j])) -
                  Ratio(static_cast<std::int64_t>(j));
        if (j == 0 || h > prefix_max) prefix_max = h;
        if (prefix_max > h + b - Ratio(1)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// The simulation

namespace {

constexpr std::uint64_t kStreamIssuer = 1;
constexpr std::uint64_t kStreamSplit = 2;
constexpr std::uint64_t kStreamHolders = 3;
constexpr std::uint64_t kStreamTopology = 4;
constexpr std::uint64_t kStreamGossip = 5;

constexpr std::size_t kOrganizerNode = 0;
constexpr std::size_t kSupervisorNode = 1;
constexpr std::size_t kFirstParticipantNode = 2;

Digest32 bytes_digest(const PrimitiveProvider& provider, std::string_view s) {
    return provider.digest(to_bytes(s));
}

struct Sender {
    std::size_t node = 0;
    Credential credential;
    Identity identity;
    bool law_abiding = true;            // waits for commencement, stops at end
    Ratio rate{1};
    Ratio ratio{1};
    Digest32 opinion{};                 // digest the sender puts on its requests
    std::optional<Tick> start_tick;
    // sybil only
    bool forged = false;
    std::vector<Credential> forged_credentials;
    std::size_t next_forged = 0;
    // disruptor only
    int shares_scripted = 0;
    Ratio accumulator{0};
};

struct EscrowRecord {
    RevocationEscrow escrow;
    std::map<std::size_t, Share> shares_by_node;  // holder node -> share
};

struct OpenCase {
    RevocationCase rcase;
    Digest32 notice_item{};
    int shares_limit = 0;  // holders willing to cooperate in this scenario
    int submitted = 0;
};

class Simulation {
public:
    explicit Simulation(const ScenarioConfig& config)
        : cfg_(config), provider_(default_provider()) {}

    RunResult execute();

private:
    void validate();
    void derive_identities();
    void announce_phase();
    void apply_injunction(const InjunctionScriptEntry& entry);
    void enrollment_phase();
    void distribute_shares();
    void gossip_phase();
    void traffic_phase();
    void gossip_round_at(Tick tick);
    bool all_items_known() const;
    Credential issue_to(Sender& sender, Tick now);
    void send_attempt(Sender& sender, Tick tick);
    void process_cases(Tick tick);
    void settle_queue(Tick tick, bool monitored);
    void emit(Tick tick, std::string kind,
              std::vector<std::pair<std::string, std::string>> fields);
    RunResult finish();

    const ScenarioConfig& cfg_;
    const PrimitiveProvider& provider_;

    std::mt19937_64 rng_split_, rng_holders_, rng_topology_, rng_gossip_;
    AssemblyManifest manifest_;
    Digest32 opinion_digest_{};
    Digest32 manifest_item_{};
    std::optional<IssuerState> issuer_;
    std::optional<AnnouncementReceipt> receipt_;
    AssemblyStatus status_;
    std::optional<RateState> rate_state_;
    std::optional<Board> board_;
    std::optional<GossipState> gossip_;
    Topology topology_;
    std::vector<Digest32> gossip_items_;

    std::size_t node_count_ = 0;
    std::vector<Sender> senders_;  // participants then adversaries
    Credential organizer_credential_;
    std::map<Digest32, EscrowRecord> escrows_;         // by pseudonym
    std::map<Digest32, Identity> identities_;          // by pseudonym
    std::map<Digest32, OpenCase> cases_;               // by pseudonym
    std::map<Digest32, int> mismatch_counts_;          // disruptor abuse tally
    std::set<Digest32> revoked_;
    std::vector<std::size_t> replica_len_;             // board prefix per node

    Tick commence_tick_ = 0;
    bool commenced_ = false;
    Tick gossip_next_tick_ = 0;

    Ratio queue_{0};
    std::string target_state_ = "up";
    std::uint64_t up_ticks_ = 0;
    std::uint64_t monitored_ticks_ = 0;

    std::vector<Event> events_;
    std::vector<ProtestMessage> delivered_;
    Metrics metrics_;
    std::string timeline_;
};

void Simulation::validate() {
    if (!cfg_.seed)
        throw Error(Errc::invalid_scenario, "no seed given");
    if (cfg_.duration == 0)
        throw Error(Errc::invalid_scenario, "duration must be positive");
    if (cfg_.participants < 0)
        throw Error(Errc::invalid_scenario, "participants must be >= 0");
    if (cfg_.queue_max < Ratio(1))
        throw Error(Errc::invalid_scenario, "queue_max must be >= 1");
    if (cfg_.injunction_window < 2)
        throw Error(Errc::invalid_scenario, "injunction window too short to enroll in");
    if (cfg_.burst < Ratio(1))
        throw Error(Errc::invalid_scenario, "burst must be >= 1");
    if (cfg_.abuse_threshold < 1)
        throw Error(Errc::invalid_scenario, "abuse_threshold must be >= 1");
    if (cfg_.fanout < 1)
        throw Error(Errc::invalid_scenario, "fanout must be >= 1");
    if (cfg_.revocation_initiator != "participants" &&
        cfg_.revocation_initiator != "supervisor")
        throw Error(Errc::invalid_scenario,
                    "revocation_initiator must be participants or supervisor");
    validate_manifest(cfg_.manifest);
    // Share holders are drawn from the participants plus the organizer.
    if (cfg_.manifest.revocation_share_count_n > cfg_.participants + 1)
        throw Error(Errc::invalid_scenario,
                    "revocation_n exceeds the available share holders");
    for (const AdversarySpec& spec : cfg_.adversaries) {
        if (spec.rate <= Ratio(0))
            throw Error(Errc::invalid_scenario, "adversary rate must be positive");
        if (spec.ratio <= Ratio(0))
            throw Error(Errc::invalid_scenario, "adversary ratio must be positive");
        if (spec.kind == AdversarySpec::Kind::sybil && spec.forged_count < 1)
            throw Error(Errc::invalid_scenario, "sybil needs at least one forged credential");
        if (spec.shares_scripted < 0 ||
            spec.shares_scripted > cfg_.manifest.revocation_share_count_n)
            throw Error(Errc::invalid_scenario, "scripted shares exceed the share count");
        if (spec.label.empty())
            throw Error(Errc::invalid_scenario, "adversary label must be non-empty");
    }
    node_count_ = kFirstParticipantNode + static_cast<std::size_t>(cfg_.participants) +
                  cfg_.adversaries.size();
    if (cfg_.topology && cfg_.topology->node_count != node_count_)
        throw Error(Errc::invalid_scenario,
                    "topology has " + std::to_string(cfg_.topology->node_count) +
                        " nodes, scenario needs " + std::to_string(node_count_));
}

void Simulation::derive_identities() {
    std::uint64_t seed = *cfg_.seed;
    rng_split_.seed(derive_stream_seed(seed, kStreamSplit));
    rng_holders_.seed(derive_stream_seed(seed, kStreamHolders));
    rng_topology_.seed(derive_stream_seed(seed, kStreamTopology));
    rng_gossip_.seed(derive_stream_seed(seed, kStreamGossip));

    std::uint64_t state = derive_stream_seed(seed, kStreamIssuer);
    Bytes secret_bytes;
    for (int i = 0; i < 4; ++i) put_be64(secret_bytes, splitmix64(state));
    Digest32 secret{};
    std::copy(secret_bytes.begin(), secret_bytes.end(), secret.begin());
    issuer_.emplace(secret, provider_);

    manifest_ = cfg_.manifest;
    if (manifest_.assembly_id == AssemblyId{}) {
        Bytes material = to_bytes("assembly-id");
        put_be64(material, seed);
        Digest32 d = provider_.digest(material);
        std::copy_n(d.begin(), manifest_.assembly_id.size(),
                    manifest_.assembly_id.begin());
    }
    opinion_digest_ = bytes_digest(provider_, manifest_.opinion_statement);
}

Credential Simulation::issue_to(Sender& sender, Tick now) {
    auto shares = split_secret(sender.identity.id, manifest_.revocation_threshold_k,
                               manifest_.revocation_share_count_n, rng_split_);
    ShareCommitment commitment = commit_shares(shares, provider_);
    Credential cred = issue_credential(*issuer_, sender.identity, manifest_.assembly_id,
                                       now, commitment.commitment);

    EscrowRecord record;
    record.escrow.assembly_id = manifest_.assembly_id;
    record.escrow.pseudonym = cred.pseudonym;
    record.escrow.threshold_k = manifest_.revocation_threshold_k;
    record.escrow.share_count_n = manifest_.revocation_share_count_n;
    record.escrow.commitment = commitment.commitment;
    record.escrow.share_digests = commitment.share_digests;
    // Holder nodes are assigned after enrollment; park shares by slot.
    for (Share& share : shares)
        record.shares_by_node[share.holder_index - 1u] = std::move(share);
    escrows_.emplace(cred.pseudonym, std::move(record));
    identities_.emplace(cred.pseudonym, sender.identity);
    return cred;
}

void Simulation::announce_phase() {
    // The organizer's own credential exists before the announcement so the
    // manifest can name it.
    Sender organizer;
    organizer.node = kOrganizerNode;
    organizer.identity = Identity::from_string("organizer");
    organizer_credential_ = issue_to(organizer, 0);
    if (manifest_.organizer_pseudonyms.empty())
        manifest_.organizer_pseudonyms.push_back(organizer_credential_.pseudonym);

    ComplianceReport report = check_manifest(manifest_, cfg_.r_human_max);
    if (!report.compliant())
        throw Error(Errc::not_compliant, "scenario manifest fails compliance:\n" +
                                             report.to_text());

    DeliveryFn deliver = [this](const TargetDescriptor&, int) {
        return cfg_.target_reachable;
    };
    AnnounceOptions options;
    options.injunction_window = cfg_.injunction_window;
    receipt_ = announce(manifest_, deliver, 0, provider_, options);
    status_ = status_of(manifest_);

    manifest_item_ = manifest_digest(manifest_, provider_);
    emit(0, "announce",
         {{"manifest", to_hex(manifest_item_)},
          {"window", std::to_string(receipt_->window_ends)},
          {"proof", receipt_->proof == DeliveryProof::board ? "board" : "ack"}});

    board_.emplace(manifest_.assembly_id, opinion_digest_, provider_);
}

void Simulation::apply_injunction(const InjunctionScriptEntry& entry) {
    std::string decision;
    switch (entry.injunction.kind) {
        case Injunction::Kind::delay:
            decision = "delay";
            break;
        case Injunction::Kind::forbid:
            decision = "forbid";
            break;
        case Injunction::Kind::allow:
            decision = "allow";
            break;
    }
    std::vector<std::pair<std::string, std::string>> fields{{"decision", decision}};
    if (entry.injunction.kind == Injunction::Kind::delay)
        fields.emplace_back("amount", std::to_string(entry.injunction.delay_ticks));
    try {
        status_ = file_injunction(status_, *receipt_, entry.injunction, entry.time);
        fields.emplace_back("outcome", "applied");
        fields.emplace_back("start", std::to_string(status_.start_time));
    } catch (const Error& e) {
        if (e.code() != Errc::window_closed) throw;
        fields.emplace_back("outcome", "window_closed");
    }
    emit(entry.time, "injunction", std::move(fields));
}

void Simulation::enrollment_phase() {
    const Tick enroll_tick = 1;
    rate_state_.emplace(manifest_.per_credential_rate, cfg_.burst,
                        cfg_.amplification_threshold);
    rate_state_->enroll(organizer_credential_.pseudonym, enroll_tick);
    emit(enroll_tick, "enroll",
         {{"node", std::to_string(kOrganizerNode)},
          {"pseudonym", to_hex(organizer_credential_.pseudonym)}});

    for (std::int64_t i = 0; i < cfg_.participants; ++i) {
        Sender s;
        s.node = kFirstParticipantNode + static_cast<std::size_t>(i);
        s.identity = Identity::from_string("participant-" + std::to_string(i));
        s.law_abiding = true;
        s.rate = manifest_.per_credential_rate;
        s.ratio = Ratio(1);
        s.opinion = opinion_digest_;
        s.credential = issue_to(s, enroll_tick);
        rate_state_->enroll(s.credential.pseudonym, enroll_tick);
        emit(enroll_tick, "enroll",
             {{"node", std::to_string(s.node)},
              {"pseudonym", to_hex(s.credential.pseudonym)}});
        senders_.push_back(std::move(s));
    }

    std::size_t adversary_node = kFirstParticipantNode +
                                 static_cast<std::size_t>(cfg_.participants);
    for (const AdversarySpec& spec : cfg_.adversaries) {
        Sender s;
        s.node = adversary_node++;
        s.law_abiding = false;
        s.rate = spec.rate;
        s.ratio = spec.kind == AdversarySpec::Kind::amplifier ? spec.ratio : Ratio(1);
        s.opinion = opinion_digest_;
        s.start_tick = spec.start_tick;
        s.shares_scripted = spec.shares_scripted;
        if (spec.kind == AdversarySpec::Kind::sybil) {
            s.forged = true;
            for (int i = 0; i < spec.forged_count; ++i) {
                Credential forged;
                forged.pseudonym = bytes_digest(
                    provider_, "forged-" + spec.label + "-" + std::to_string(i));
                forged.assembly_id = manifest_.assembly_id;
                forged.issue_time = enroll_tick;
                s.forged_credentials.push_back(forged);
            }
        } else {
            s.identity = Identity::from_string(to_string(spec.kind) + "-" + spec.label);
            if (spec.kind == AdversarySpec::Kind::disruptor)
                s.opinion = bytes_digest(provider_, "a different opinion entirely");
            s.credential = issue_to(s, enroll_tick);
            rate_state_->enroll(s.credential.pseudonym, enroll_tick);
            emit(enroll_tick, "enroll",
                 {{"node", std::to_string(s.node)},
                  {"pseudonym", to_hex(s.credential.pseudonym)}});
        }
        senders_.push_back(std::move(s));
    }
    distribute_shares();
}

void Simulation::distribute_shares() {
    // Custody of each credential's shares goes to n distinct nodes drawn
    // from the participants plus the organizer, so a critical mass of
    // protesters (not the issuer alone) controls de-anonymization.
    std::vector<std::size_t> pool;
    pool.push_back(kOrganizerNode);
    for (std::int64_t i = 0; i < cfg_.participants; ++i)
        pool.push_back(kFirstParticipantNode + static_cast<std::size_t>(i));

    for (auto& [pseudonym, record] : escrows_) {
        std::vector<std::size_t> candidates = pool;
        std::map<std::size_t, Share> by_node;
        std::size_t n = record.shares_by_node.size();
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t pick = j + static_cast<std::size_t>(
                                      uniform_below(rng_holders_, candidates.size() - j));
            std::swap(candidates[j], candidates[pick]);
            by_node.emplace(candidates[j], std::move(record.shares_by_node[j]));
        }
        record.shares_by_node = std::move(by_node);
    }
}

void Simulation::gossip_phase() {
    topology_ = cfg_.topology ? *cfg_.topology
                              : random_connected_topology(
                                    node_count_,
                                    cfg_.extra_edges.value_or(node_count_),
                                    cfg_.fanout, rng_topology_);
    gossip_.emplace(node_count_);
    replica_len_.assign(node_count_, 0);
    replica_len_[kOrganizerNode] = board_->size();

    gossip_->seed_item(kOrganizerNode, manifest_item_);
    gossip_items_.push_back(manifest_item_);

    // One round per tick inside the announcement window, stopping once
    // everything has spread; a disconnected custom topology stops at a cap
    // instead of spinning.
    Tick tick = 2;
    std::size_t cap = 0;
    for (std::size_t n = node_count_; n > 1; n /= 2) cap += 10;
    cap += 50;
    while (!all_items_known() && tick < commence_tick_ &&
           static_cast<std::size_t>(gossip_->rounds_run()) < cap) {
        gossip_round_at(tick);
        ++tick;
    }
    gossip_next_tick_ = tick;
}

bool Simulation::all_items_known() const {
    return std::all_of(gossip_items_.begin(), gossip_items_.end(),
                       [&](const Digest32& item) { return gossip_->converged(item); });
}

void Simulation::gossip_round_at(Tick tick) {
    bool manifest_was_converged = gossip_->converged(manifest_item_);
    gossip_->round(topology_, rng_gossip_, [this](std::size_t a, std::size_t b) {
        std::size_t longer = std::max(replica_len_[a], replica_len_[b]);
        replica_len_[a] = longer;
        replica_len_[b] = longer;
    });
    if (!manifest_was_converged && gossip_->converged(manifest_item_)) {
        metrics_.gossip_convergence_round = gossip_->rounds_run();
        emit(tick, "gossip_converged",
             {{"round", std::to_string(gossip_->rounds_run())}});
    }
}

void Simulation::send_attempt(Sender& sender, Tick tick) {
    const Credential& cred =
        sender.forged
            ? sender.forged_credentials[sender.next_forged++ %
                                        sender.forged_credentials.size()]
            : sender.credential;

    metrics_.offered += 1;
    auto reject = [&](RejectReason reason) {
        metrics_.rejected += 1;
        metrics_.rejects_by_reason[to_string(reason)] += 1;
        emit(tick, "reject",
             {{"pseudonym", to_hex(cred.pseudonym)}, {"reason", to_string(reason)}});
        if (reason == RejectReason::missing_opinion && !sender.forged &&
            !cases_.contains(cred.pseudonym)) {
            int count = ++mismatch_counts_[cred.pseudonym];
            if (count >= cfg_.abuse_threshold) {
                OpenCase oc;
                oc.rcase.pseudonym = cred.pseudonym;
                oc.rcase.opened_at = tick;
                oc.shares_limit = sender.shares_scripted;
                Bytes notice = to_bytes("revocation-case");
                notice.insert(notice.end(), cred.pseudonym.begin(), cred.pseudonym.end());
                oc.notice_item = provider_.digest(notice);
                std::size_t origin = cfg_.revocation_initiator == "supervisor"
                                         ? kSupervisorNode
                                         : kOrganizerNode;
                gossip_->seed_item(origin, oc.notice_item);
                gossip_items_.push_back(oc.notice_item);
                cases_.emplace(cred.pseudonym, std::move(oc));
                emit(tick, "case_open",
                     {{"pseudonym", to_hex(cred.pseudonym)},
                      {"initiator", cfg_.revocation_initiator}});
            }
        }
    };

    if (revoked_.contains(cred.pseudonym))
        return reject(RejectReason::revoked_credential);
    if (!may_commence(status_, receipt_ ? &*receipt_ : nullptr, tick))
        return reject(RejectReason::assembly_inactive);
    if (!verify_credential(cred, *issuer_) || !rate_state_->enrolled(cred.pseudonym))
        return reject(RejectReason::unknown_credential);

    std::uint64_t seq = 0;
    if (auto it = metrics_.admitted_by_pseudonym.find(cred.pseudonym);
        it != metrics_.admitted_by_pseudonym.end())
        seq = it->second;
    std::string body = "expression " + std::to_string(seq) + " from " +
                       to_hex(cred.pseudonym).substr(0, 8);
    Request request;
    request.pseudonym = cred.pseudonym;
    request.timestamp = tick;
    request.payload_size = body.size();
    request.expected_response_ratio = sender.ratio;
    request.opinion_digest = sender.opinion;

    AdmitOutcome outcome = rate_state_->admit(request, tick, opinion_digest_);
    if (!outcome.admitted) return reject(outcome.reason);

    metrics_.admitted += 1;
    metrics_.admitted_by_pseudonym[cred.pseudonym] = seq + 1;
    emit(tick, "admit",
         {{"pseudonym", to_hex(cred.pseudonym)}, {"seq", std::to_string(seq)}});

    // Mirror first; an unmirrored message is never delivered.
    ProtestMessage message{cred.pseudonym, manifest_.assembly_id, seq,
                           opinion_digest_, body, tick};
    const BoardEntry& entry = board_->append(message);
    replica_len_[kOrganizerNode] = board_->size();
    emit(tick, "board",
         {{"index", std::to_string(entry.index)},
          {"pseudonym", to_hex(cred.pseudonym)},
          {"seq", std::to_string(seq)},
          {"digest", to_hex(entry.entry_digest)}});

    if (queue_ + Ratio(1) > cfg_.queue_max) {
        metrics_.dropped += 1;
        if (target_state_ != "down") {
            target_state_ = "down";
            emit(tick, "target_state", {{"state", "down"}});
        }
    } else {
        queue_ += Ratio(1);
        metrics_.delivered += 1;
        delivered_.push_back(message);
        emit(tick, "deliver",
             {{"pseudonym", to_hex(cred.pseudonym)}, {"seq", std::to_string(seq)}});
    }
}

void Simulation::process_cases(Tick tick) {
    for (auto& [pseudonym, oc] : cases_) {
        if (oc.rcase.status != CaseStatus::open) continue;
        EscrowRecord& record = escrows_.at(pseudonym);
        for (const auto& [node, share] : record.shares_by_node) {
            if (oc.submitted >= oc.shares_limit) break;
            if (oc.rcase.submitted_shares.contains(share.holder_index)) continue;
            if (!gossip_->knows(node, oc.notice_item)) continue;
            submit_share(oc.rcase, share, record.escrow, provider_);
            oc.submitted += 1;
            emit(tick, "share_submit",
                 {{"pseudonym", to_hex(pseudonym)},
                  {"holder", std::to_string(share.holder_index)},
                  {"node", std::to_string(node)}});
            if (oc.rcase.status == CaseStatus::revealed) break;
        }
        if (oc.rcase.status == CaseStatus::revealed) {
            Digest32 identity_digest = provider_.digest(*oc.rcase.revealed_identity);
            emit(tick, "reveal",
                 {{"pseudonym", to_hex(pseudonym)},
                  {"identity", to_hex(identity_digest)}});
            metrics_.revocations.push_back({pseudonym, tick, identity_digest});
            revoked_.insert(pseudonym);
            rate_state_->remove(pseudonym, tick);
            emit(tick, "revoke", {{"pseudonym", to_hex(pseudonym)}});
        }
    }
}

void Simulation::settle_queue(Tick tick, bool monitored) {
    queue_ = std::max(Ratio(0), queue_ - manifest_.target.declared_capacity);

    // Hysteresis: a drop latches "down" (in send_attempt) until the backlog
    // falls below half the queue bound; otherwise degraded above that line.
    Ratio half = cfg_.queue_max / Ratio(2);
    std::string next = target_state_;
    if (target_state_ == "down") {
        if (queue_ < half) next = "up";
    } else {
        next = queue_ >= half ? "degraded" : "up";
    }
    if (next != target_state_) {
        target_state_ = next;
        emit(tick, "target_state", {{"state", next}});
    }
    if (monitored) {
        monitored_ticks_ += 1;
        if (target_state_ == "up") up_ticks_ += 1;
        timeline_ += std::to_string(tick);
        timeline_ += ',';
        timeline_ += format_ratio(queue_);
        timeline_ += ',';
        timeline_ += target_state_;
        timeline_ += '\n';
    }
}

void Simulation::traffic_phase() {
    commenced_ = status_.state != ScheduleState::forbidden &&
                 commence_tick_ < std::min<Tick>(cfg_.duration, status_.end_time);

    // Dead time between the gossip phase and the first sender is skipped;
    // nothing in the model changes across it.
    Tick loop_start = cfg_.duration;
    if (commenced_) loop_start = std::min(loop_start, commence_tick_);
    for (const Sender& s : senders_)
        if (!s.law_abiding)
            loop_start = std::min(loop_start, s.start_tick.value_or(commence_tick_));

    for (Tick tick = loop_start; tick < cfg_.duration; ++tick) {
        if (!all_items_known() && tick >= gossip_next_tick_) gossip_round_at(tick);
        if (commenced_ && tick == commence_tick_) emit(tick, "commence", {});

        for (Sender& sender : senders_) {
            bool active;
            if (sender.law_abiding) {
                active = may_commence(status_, receipt_ ? &*receipt_ : nullptr, tick) &&
                         gossip_->knows(sender.node, manifest_item_);
            } else {
                Tick start = sender.start_tick.value_or(commence_tick_);
                active = tick >= start;
            }
            if (!active) continue;
            sender.accumulator += sender.rate;
            while (sender.accumulator >= Ratio(1)) {
                sender.accumulator -= Ratio(1);
                send_attempt(sender, tick);
            }
        }

        process_cases(tick);
        settle_queue(tick, commenced_ && tick >= commence_tick_);
    }
}

void Simulation::emit(Tick tick, std::string kind,
                      std::vector<std::pair<std::string, std::string>> fields) {
    events_.push_back(Event{tick, std::move(kind), std::move(fields)});
}

RunResult Simulation::finish() {
    if (metrics_.admitted + metrics_.rejected != metrics_.offered)
        throw Error(Errc::audit_mismatch, "internal: offered count does not reconcile");

    metrics_.availability =
        monitored_ticks_ == 0
            ? Ratio(1)
            : Ratio(static_cast<std::int64_t>(up_ticks_),
                    static_cast<std::int64_t>(monitored_ticks_));
    metrics_.visibility = visibility_fraction(delivered_, *board_);

    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.tick < b.tick; });

    RunResult result;
    result.metrics = metrics_;
    for (const Event& event : events_) result.event_log += serialize_event(event);
    result.board_export = export_board(board_->entries());
    result.timeline_csv = "tick,queue,state\n" + timeline_;
    result.commence_tick = commenced_ ? commence_tick_ : 0;
    result.commenced = commenced_;

    std::ostringstream summary;
    summary << "availability = " << format_ratio(metrics_.availability) << '\n';
    summary << "visibility = " << format_ratio(metrics_.visibility) << '\n';
    summary << "offered = " << metrics_.offered << '\n';
    summary << "admitted = " << metrics_.admitted << '\n';
    summary << "rejected = " << metrics_.rejected << '\n';
    summary << "delivered = " << metrics_.delivered << '\n';
    summary << "dropped = " << metrics_.dropped << '\n';
    for (const auto& [reason, count] : metrics_.rejects_by_reason)
        summary << "rejected." << reason << " = " << count << '\n';
    summary << "board_entries = " << board_->size() << '\n';
    if (metrics_.gossip_convergence_round)
        summary << "gossip_convergence_round = " << *metrics_.gossip_convergence_round
                << '\n';
    for (const RevocationRecord& r : metrics_.revocations)
        summary << "revoked " << to_hex(r.pseudonym) << " at " << r.tick << '\n';
    summary << (commenced_ ? "commenced at " + std::to_string(commence_tick_)
                           : std::string("never commenced"))
            << '\n';
    result.summary_text = summary.str();
    return result;
}

RunResult Simulation::execute() {
    validate();
    derive_identities();
    announce_phase();
    for (const InjunctionScriptEntry& entry : cfg_.injunctions) apply_injunction(entry);
    enrollment_phase();
    commence_tick_ = std::max(receipt_->window_ends, status_.start_time);
    gossip_phase();
    traffic_phase();
    return finish();
}

}  // namespace

RunResult run(const ScenarioConfig& config) {
    Simulation sim(config);
    return sim.execute();
}

// ---------------------------------------------------------------------------
// Replay audit

namespace {

[[noreturn]] void audit_fail(std::size_t line, const std::string& what) {
    throw Error(Errc::audit_mismatch,
                line ? "audit mismatch at event " + std::to_string(line) + ": " + what
                     : "audit mismatch: " + what);
}

std::uint64_t field_u64(const Event& event, const std::string& key, std::size_t line) {
    const std::string* value = event.field(key);
    if (!value) audit_fail(line, event.kind + " event missing field " + key);
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value->data(), value->data() + value->size(), out);
    if (ec != std::errc() || ptr != value->data() + value->size())
        audit_fail(line, event.kind + " field " + key + " is not a number");
    return out;
}

std::string field_str(const Event& event, const std::string& key, std::size_t line) {
    const std::string* value = event.field(key);
    if (!value) audit_fail(line, event.kind + " event missing field " + key);
    return *value;
}

}  // namespace

void replay_audit(const RunResult& result, const ScenarioConfig& config) {
    std::vector<Event> events = parse_event_log(result.event_log);

    Metrics derived;
    derived.availability = Ratio(1);
    std::map<Digest32, std::vector<Tick>> admit_times;
    std::set<std::pair<Digest32, std::uint64_t>> mirrored;
    std::set<Digest32> revoked;
    std::optional<Tick> window_ends;
    Tick legal_start = config.manifest.start_time;
    std::optional<Tick> commence_tick;
    std::vector<std::pair<Tick, std::string>> state_changes;
    std::size_t board_events = 0;
    Digest32 last_board_digest{};

    Tick previous_tick = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& event = events[i];
        std::size_t line = i + 1;
        if (event.tick < previous_tick) audit_fail(line, "event log not in tick order");
        previous_tick = event.tick;

        if (event.kind == "announce") {
            if (window_ends) audit_fail(line, "second announcement");
            window_ends = field_u64(event, "window", line);
        } else if (event.kind == "injunction") {
            if (field_str(event, "outcome", line) == "applied" &&
                field_str(event, "decision", line) == "delay")
                legal_start += field_u64(event, "amount", line);
        } else if (event.kind == "commence") {
            if (commence_tick) audit_fail(line, "second commencement");
            commence_tick = event.tick;
        } else if (event.kind == "gossip_converged") {
            derived.gossip_convergence_round =
                static_cast<int>(field_u64(event, "round", line));
        } else if (event.kind == "admit") {
            if (!window_ends) audit_fail(line, "admission before any announcement");
            if (event.tick < *window_ends)
                audit_fail(line, "admission inside the objection window");
            if (event.tick < legal_start)
                audit_fail(line, "admission before the injunction-adjusted start");
            Digest32 pseudonym = digest_from_hex(field_str(event, "pseudonym", line));
            if (revoked.contains(pseudonym))
                audit_fail(line, "admission for a revoked credential");
            std::uint64_t seq = field_u64(event, "seq", line);
            if (seq != admit_times[pseudonym].size())
                audit_fail(line, "admission sequence number out of order");
            admit_times[pseudonym].push_back(event.tick);
            derived.admitted += 1;
            derived.admitted_by_pseudonym[pseudonym] += 1;
            derived.offered += 1;
        } else if (event.kind == "reject") {
            derived.rejected += 1;
            derived.offered += 1;
            derived.rejects_by_reason[field_str(event, "reason", line)] += 1;
        } else if (event.kind == "board") {
            Digest32 pseudonym = digest_from_hex(field_str(event, "pseudonym", line));
            std::uint64_t index = field_u64(event, "index", line);
            if (index != board_events) audit_fail(line, "board index not dense");
            board_events += 1;
            last_board_digest = digest_from_hex(field_str(event, "digest", line));
            mirrored.insert({pseudonym, field_u64(event, "seq", line)});
        } else if (event.kind == "deliver") {
            Digest32 pseudonym = digest_from_hex(field_str(event, "pseudonym", line));
            if (!mirrored.contains({pseudonym, field_u64(event, "seq", line)}))
                audit_fail(line, "delivery without a board mirror");
            derived.delivered += 1;
        } else if (event.kind == "target_state") {
            state_changes.emplace_back(event.tick, field_str(event, "state", line));
        } else if (event.kind == "reveal") {
            Digest32 pseudonym = digest_from_hex(field_str(event, "pseudonym", line));
            derived.revocations.push_back(
                {pseudonym, event.tick,
                 digest_from_hex(field_str(event, "identity", line))});
        } else if (event.kind == "revoke") {
            revoked.insert(digest_from_hex(field_str(event, "pseudonym", line)));
        } else if (event.kind != "enroll" && event.kind != "share_submit" &&
                   event.kind != "case_open") {
            audit_fail(line, "unknown event kind " + event.kind);
        }
    }

    derived.dropped = derived.admitted - derived.delivered;

    // Availability: integrate the state timeline over the monitored window.
    if (commence_tick) {
        Tick window_start = *commence_tick;
        Tick window_end = config.duration;
        std::uint64_t up = 0;
        std::string state = "up";
        Tick cursor = window_start;
        for (const auto& [tick, next_state] : state_changes) {
            Tick boundary = std::clamp(tick, window_start, window_end);
            if (state == "up" && boundary > cursor) up += boundary - cursor;
            cursor = std::max(cursor, boundary);
            state = next_state;
        }
        if (state == "up" && window_end > cursor) up += window_end - cursor;
        derived.availability =
            window_end > window_start
                ? Ratio(static_cast<std::int64_t>(up),
                        static_cast<std::int64_t>(window_end - window_start))
                : Ratio(1);
    }

    // Every deliver event was checked against a board mirror above, so the
    // re-derived mirrored fraction is exactly 1.
    derived.visibility = Ratio(1);

    if (!verify_board_export(result.board_export, default_provider()))
        audit_fail(0, "board export fails chain verification");
    std::vector<BoardEntry> entries = import_board(result.board_export);
    if (entries.size() != board_events)
        audit_fail(0, "board export and board events disagree on length");
    if (!entries.empty() && entries.back().entry_digest != last_board_digest)
        audit_fail(0, "board export head does not match the last board event");

    for (const auto& [pseudonym, times] : admit_times)
        if (!window_bound_satisfied(times, config.manifest.per_credential_rate,
                                    config.burst))
            audit_fail(0, "per-credential window bound violated for " + to_hex(pseudonym));

    const Metrics& reported = result.metrics;
    if (derived.offered != reported.offered) audit_fail(0, "offered count differs");
    if (derived.admitted != reported.admitted) audit_fail(0, "admitted count differs");
    if (derived.rejected != reported.rejected) audit_fail(0, "rejected count differs");
    if (derived.delivered != reported.delivered) audit_fail(0, "delivered count differs");
    if (derived.dropped != reported.dropped) audit_fail(0, "dropped count differs");
    if (derived.admitted_by_pseudonym != reported.admitted_by_pseudonym)
        audit_fail(0, "per-credential admitted counts differ");
    if (derived.rejects_by_reason != reported.rejects_by_reason)
        audit_fail(0, "reject reasons differ");
    if (derived.revocations != reported.revocations) audit_fail(0, "revocations differ");
    if (derived.gossip_convergence_round != reported.gossip_convergence_round)
        audit_fail(0, "gossip convergence round differs");
    if (derived.availability != reported.availability)
        audit_fail(0, "availability differs: derived " +
                          format_ratio(derived.availability) + ", reported " +
                          format_ratio(reported.availability));
    if (derived.visibility != reported.visibility) audit_fail(0, "visibility differs");
}

}  // namespace assemblynet
