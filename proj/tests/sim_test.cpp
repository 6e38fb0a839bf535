#include <doctest.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "assemblynet/errors.hpp"
#include "assemblynet/sim.hpp"

using namespace assemblynet;

namespace {

/// Small, fast scenario: tiny objection window, modest capacity.
ScenarioConfig base_config(std::uint64_t seed, std::int64_t participants) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.duration = 40;
    cfg.participants = participants;
    cfg.injunction_window = 10;
    cfg.queue_max = Ratio(50);

    AssemblyManifest& m = cfg.manifest;
    m.opinion_statement = "objection to the operator's data retention";
    m.start_time = 10;
    m.end_time = 1000000;
    m.per_credential_rate = Ratio(1);
    m.critical_mass_min = 2;
    m.revocation_threshold_k = 2;
    m.revocation_share_count_n = 3;
    m.board_mirroring = true;
    m.supervisor_channel = true;
    m.target.address = "target.example";
    m.target.declared_capacity = Ratio(5);
    m.attestations.subsidiarity.text = "talks first";
    m.attestations.proportionality.text = "rate capped";
    m.attestations.no_coercion.text = "voluntary";
    m.attestations.no_coercion_declared = true;
    return cfg;
}

std::optional<Tick> first_admit_tick(const std::string& log) {
    for (const Event& e : parse_event_log(log))
        if (e.kind == "admit") return e.tick;
    return std::nullopt;
}

std::size_t count_kind(const std::string& log, const std::string& kind) {
    std::size_t n = 0;
    for (const Event& e : parse_event_log(log)) n += e.kind == kind;
    return n;
}

Errc run_code(const ScenarioConfig& cfg) {
    try {
        run(cfg);
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::parse_error;
}

/// Erases the whole line around the first occurrence of `needle`.
std::string drop_line(std::string text, const std::string& needle) {
    std::size_t pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    std::size_t start = text.rfind('\n', pos);
    start = start == std::string::npos ? 0 : start + 1;
    std::size_t end = text.find('\n', pos);
    text.erase(start, end - start + 1);
    return text;
}

}  // namespace

TEST_CASE("a bare scenario file fills in a lawful default assembly") {
    ParsedScenario parsed = parse_scenario(
        "seed = 5\n"
        "duration = 20\n"
        "[target]\n"
        "capacity = 5\n");
    const ScenarioConfig& cfg = parsed.config;

    CHECK(cfg.seed == 5);
    CHECK(cfg.duration == 20);
    CHECK(cfg.participants == 0);
    CHECK(cfg.abuse_threshold == 3);
    CHECK(cfg.revocation_initiator == "participants");
    CHECK(cfg.injunction_window == kDefaultInjunctionWindow);

    CHECK_FALSE(cfg.manifest.opinion_statement.empty());
    CHECK(cfg.manifest.start_time == kDefaultInjunctionWindow);
    CHECK(cfg.manifest.end_time == cfg.manifest.start_time + 2592000);
    CHECK(cfg.manifest.per_credential_rate == Ratio(1));
    CHECK(cfg.manifest.critical_mass_min == 2);
    CHECK(cfg.manifest.revocation_threshold_k == 2);
    CHECK(cfg.manifest.revocation_share_count_n == 3);
    CHECK(cfg.manifest.board_mirroring);
    CHECK(cfg.manifest.supervisor_channel);
    CHECK_FALSE(cfg.manifest.attestations.subsidiarity.text.empty());
    CHECK(cfg.manifest.attestations.no_coercion_declared);
    CHECK(cfg.manifest.assembly_id == AssemblyId{});  // derived from the seed later

    CHECK(cfg.manifest.target.address == "target.example");
    CHECK(cfg.manifest.target.declared_capacity == Ratio(5));
    CHECK(cfg.queue_max == Ratio(1000));
    CHECK(cfg.target_reachable);
    CHECK(cfg.burst == Ratio(5));
    CHECK(cfg.amplification_threshold == Ratio(1));
    CHECK(cfg.fanout == 1);
    CHECK_FALSE(cfg.extra_edges.has_value());
    CHECK_FALSE(parsed.topology_path.has_value());
    CHECK(cfg.adversaries.empty());
    CHECK(cfg.injunctions.empty());
}

TEST_CASE("a full scenario file lands in the config field for field") {
    ParsedScenario parsed = parse_scenario(
        "seed = 9\n"
        "duration = 50\n"
        "participants = 4\n"
        "abuse_threshold = 2\n"
        "revocation_initiator = supervisor\n"
        "injunction_window = 10\n"
        "[manifest]\n"
        "opinion_statement = hands off the archive\n"
        "start_time = 12\n"
        "end_time = 500\n"
        "per_credential_rate = 1/2\n"
        "revocation_n = 4\n"
        "[target]\n"
        "address = archive.example\n"
        "capacity = 8\n"
        "queue_max = 64\n"
        "size_class = small\n"
        "reachable = false\n"
        "[throttle]\n"
        "burst = 2\n"
        "r_human_max = 1/2\n"
        "amplification_threshold = 2\n"
        "[gossip]\n"
        "fanout = 2\n"
        "extra_edges = 3\n"
        "topology = ring.edges\n"
        "[injunction.second]\n"
        "time = 9\n"
        "decision = delay 30\n"
        "[injunction.first]\n"
        "time = 3\n"
        "decision = forbid\n"
        "[adversary.flood]\n"
        "kind = botnet\n"
        "rate = 7/2\n"
        "[adversary.forge]\n"
        "kind = sybil\n"
        "count = 9\n"
        "start = 13\n"
        "[adversary.mirror]\n"
        "kind = amplifier\n"
        "rate = 2\n"
        "[adversary.noise]\n"
        "kind = disruptor\n"
        "shares = 2\n");
    const ScenarioConfig& cfg = parsed.config;

    CHECK(cfg.revocation_initiator == "supervisor");
    CHECK(cfg.manifest.opinion_statement == "hands off the archive");
    CHECK(cfg.manifest.start_time == 12);
    CHECK(cfg.manifest.per_credential_rate == Ratio(1, 2));
    CHECK(cfg.manifest.revocation_share_count_n == 4);
    CHECK(cfg.manifest.target.address == "archive.example");
    CHECK(cfg.manifest.target.size_class == SizeClass::small);
    CHECK(cfg.queue_max == Ratio(64));
    CHECK_FALSE(cfg.target_reachable);
    CHECK(cfg.burst == Ratio(2));
    CHECK(cfg.r_human_max == Ratio(1, 2));
    CHECK(cfg.amplification_threshold == Ratio(2));
    CHECK(cfg.fanout == 2);
    CHECK(cfg.extra_edges == std::size_t{3});
    CHECK(parsed.topology_path == "ring.edges");

    // Scripted injunctions arrive in time order regardless of file order.
    REQUIRE(cfg.injunctions.size() == 2);
    CHECK(cfg.injunctions[0].time == 3);
    CHECK(cfg.injunctions[0].injunction.kind == Injunction::Kind::forbid);
    CHECK(cfg.injunctions[1].time == 9);
    CHECK(cfg.injunctions[1].injunction.kind == Injunction::Kind::delay);
    CHECK(cfg.injunctions[1].injunction.delay_ticks == 30);

    REQUIRE(cfg.adversaries.size() == 4);
    CHECK(cfg.adversaries[0].label == "flood");
    CHECK(cfg.adversaries[0].kind == AdversarySpec::Kind::botnet);
    CHECK(cfg.adversaries[0].rate == Ratio(7, 2));
    CHECK(cfg.adversaries[1].label == "forge");
    CHECK(cfg.adversaries[1].forged_count == 9);
    CHECK(cfg.adversaries[1].start_tick == Tick{13});
    CHECK(cfg.adversaries[2].label == "mirror");
    CHECK(cfg.adversaries[2].ratio == Ratio(17, 2));  // amplifier default
    CHECK(cfg.adversaries[3].label == "noise");
    CHECK(cfg.adversaries[3].shares_scripted == 2);
    CHECK_FALSE(cfg.adversaries[3].start_tick.has_value());
}

TEST_CASE("scenario files reject what they do not understand") {
    CHECK_THROWS_AS(parse_scenario("seed = 1\nduration = 5\nwhat = 6\n"
                                   "[target]\ncapacity = 1\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_scenario("seed = 1\nduration = 5\n[target]\ncapacity = 1\n"
                                   "[extra]\nx = 1\n"),
                    Error);
    CHECK_THROWS_AS(parse_scenario("seed = 1\nduration = 5\n[target]\ncapacity = 1\n"
                                   "[injunction_typo]\ntime = 1\ndecision = allow\n"),
                    Error);
    CHECK_THROWS_AS(parse_scenario("seed = 1\nduration = 5\n[target]\ncapacity = 1\n"
                                   "[injunction.a]\ntime = 1\ndecision = delay\n"),
                    Error);
    CHECK_THROWS_AS(parse_scenario("seed = 1\nduration = 5\n[target]\ncapacity = 1\n"
                                   "[injunction.a]\ntime = 1\ndecision = postpone\n"),
                    Error);
    CHECK_THROWS_AS(parse_scenario("seed = 1\nduration = 5\n[target]\ncapacity = 1\n"
                                   "[adversary.x]\nkind = pirate\n"),
                    Error);
    CHECK_THROWS_AS(parse_scenario("seed = 1\nduration = 5\n"), ParseError);  // no capacity
    CHECK_THROWS_AS(parse_scenario("seed = 1\nduration = 5\n[target]\ncapacity = 1\n"
                                   "[manifest]\nassembly_id = 00ff\n"),
                    Error);
}

TEST_CASE("event records survive the wire and the parser stays strict") {
    Event e{12, "admit", {{"pseudonym", "ab12"}, {"seq", "0"}}};
    std::string wire = serialize_event(e);
    CHECK(wire == "12,admit,pseudonym=ab12,seq=0\n");

    std::vector<Event> back = parse_event_log(wire + "13,commence\n");
    REQUIRE(back.size() == 2);
    CHECK(back[0].tick == 12);
    CHECK(back[0].kind == "admit");
    REQUIRE(back[0].field("seq") != nullptr);
    CHECK(*back[0].field("seq") == "0");
    CHECK(back[0].field("absent") == nullptr);
    CHECK(back[1].kind == "commence");
    CHECK(back[1].fields.empty());

    CHECK(parse_event_log("").empty());
    CHECK_THROWS_AS(parse_event_log("12,admit"), ParseError);       // no newline
    CHECK_THROWS_AS(parse_event_log("07,admit\n"), ParseError);     // leading zero
    CHECK_THROWS_AS(parse_event_log("x,admit\n"), ParseError);
    CHECK_THROWS_AS(parse_event_log(",admit\n"), ParseError);
    CHECK_THROWS_AS(parse_event_log("5\n"), ParseError);            // no kind
    CHECK_THROWS_AS(parse_event_log("5,admit,seq\n"), ParseError);  // no '='
    CHECK_THROWS_AS(parse_event_log("5,admit,=v\n"), ParseError);
    CHECK_THROWS_AS(parse_event_log("5,admit,k=\n"), ParseError);

    CHECK_THROWS_AS(serialize_event(Event{1, "two,words", {}}), Error);
    CHECK_THROWS_AS(serialize_event(Event{1, "kind", {{"k", "a=b"}}}), Error);
    CHECK_THROWS_AS(serialize_event(Event{1, "kind", {{"k", "line\nbreak"}}}), Error);
}

TEST_CASE("the window bound test accepts leaky-bucket traces and nothing else") {
    SUBCASE("steady traffic at the rate limit is fine") {
        CHECK(window_bound_satisfied({}, Ratio(1), Ratio(1)));
        CHECK(window_bound_satisfied({7}, Ratio(1), Ratio(1)));
        CHECK(window_bound_satisfied({0, 1, 2, 3, 4}, Ratio(1), Ratio(1)));
        CHECK(window_bound_satisfied({0, 2, 4}, Ratio(1, 2), Ratio(1)));
    }
    SUBCASE("bursts are allowed exactly up to the burst allowance") {
        CHECK(window_bound_satisfied({5, 5}, Ratio(1), Ratio(2)));
        CHECK_FALSE(window_bound_satisfied({5, 5}, Ratio(1), Ratio(1)));
        CHECK_FALSE(window_bound_satisfied({5, 5, 5}, Ratio(1), Ratio(2)));
        // After a full burst the drip must be respected over every window,
        // not just adjacent pairs.
        CHECK_FALSE(window_bound_satisfied({0, 0, 1, 2}, Ratio(1, 2), Ratio(2)));
        CHECK(window_bound_satisfied({0, 0, 2, 4}, Ratio(1, 2), Ratio(2)));
    }
    SUBCASE("fractional rates bind between ticks") {
        CHECK_FALSE(window_bound_satisfied({0, 1}, Ratio(1, 2), Ratio(1)));
    }
    SUBCASE("a non-ascending trace is already a violation") {
        CHECK_FALSE(window_bound_satisfied({3, 2}, Ratio(1), Ratio(5)));
    }
}

TEST_CASE("a small lawful assembly runs deterministically and audits clean") {
    ScenarioConfig cfg = base_config(77, 3);
    RunResult a = run(cfg);
    RunResult b = run(cfg);

    CHECK(a.event_log == b.event_log);
    CHECK(a.board_export == b.board_export);
    CHECK(a.timeline_csv == b.timeline_csv);
    CHECK(a.summary_text == b.summary_text);
    CHECK(a.metrics == b.metrics);

    ScenarioConfig other = cfg;
    other.seed = 78;
    CHECK(run(other).event_log != a.event_log);

    CHECK(a.commenced);
    CHECK(a.commence_tick == 10);
    CHECK(first_admit_tick(a.event_log) == Tick{10});
    CHECK(a.metrics.visibility == Ratio(1));
    CHECK(a.metrics.availability == Ratio(1));  // 3 senders, capacity 5
    CHECK(a.metrics.dropped == 0);
    CHECK(a.metrics.rejected == 0);
    CHECK(a.metrics.admitted == a.metrics.offered);
    CHECK(a.metrics.admitted_by_pseudonym.size() == 3);
    CHECK(count_kind(a.event_log, "enroll") == 4);  // organizer plus three
    CHECK(count_kind(a.event_log, "board") == a.metrics.admitted);
    CHECK(a.timeline_csv.substr(0, 17) == "tick,queue,state\n");
    CHECK_NOTHROW(replay_audit(a, cfg));
}

TEST_CASE("an overloaded target degrades, drops, and the audit still reconciles") {
    ScenarioConfig cfg = base_config(101, 20);  // 20 arrivals/s vs capacity 5
    RunResult r = run(cfg);

    CHECK(r.metrics.dropped > 0);
    CHECK(r.metrics.availability < Ratio(1));
    CHECK(r.metrics.delivered + r.metrics.dropped == r.metrics.admitted);
    CHECK(r.event_log.find("target_state,state=down") != std::string::npos);
    CHECK(r.timeline_csv.find("down") != std::string::npos);
    CHECK(r.metrics.visibility == Ratio(1));  // drops still reached the board
    CHECK_NOTHROW(replay_audit(r, cfg));
}

TEST_CASE("an empty assembly still announces, commences, and stays up") {
    ScenarioConfig cfg = base_config(5, 0);
    cfg.manifest.revocation_threshold_k = 1;
    cfg.manifest.revocation_share_count_n = 1;
    RunResult r = run(cfg);

    CHECK(r.commenced);
    CHECK(r.metrics.offered == 0);
    CHECK(r.metrics.availability == Ratio(1));
    CHECK(r.metrics.visibility == Ratio(1));
    CHECK(r.board_export.empty());
    CHECK_NOTHROW(replay_audit(r, cfg));
}

TEST_CASE("an unreachable target moves the announcement onto the board") {
    ScenarioConfig cfg = base_config(6, 2);
    cfg.target_reachable = false;
    RunResult r = run(cfg);

    std::vector<Event> events = parse_event_log(r.event_log);
    REQUIRE(!events.empty());
    CHECK(events[0].kind == "announce");
    REQUIRE(events[0].field("proof") != nullptr);
    CHECK(*events[0].field("proof") == "board");
    CHECK(r.commenced);
    CHECK_NOTHROW(replay_audit(r, cfg));
}

TEST_CASE("a delay injunction shifts the earliest admission by exactly its amount") {
    ScenarioConfig cfg = base_config(31, 2);
    RunResult baseline = run(cfg);
    CHECK(first_admit_tick(baseline.event_log) == Tick{10});

    ScenarioConfig delayed = cfg;
    delayed.injunctions.push_back({5, {Injunction::Kind::delay, 4}});
    RunResult r = run(delayed);
    CHECK(first_admit_tick(r.event_log) == Tick{14});
    CHECK(r.commence_tick == 14);
    CHECK(r.event_log.find("injunction,decision=delay,amount=4,outcome=applied,start=14") !=
          std::string::npos);
    CHECK_NOTHROW(replay_audit(r, delayed));

    // Filed at the window boundary, the same objection is void.
    ScenarioConfig late = cfg;
    late.injunctions.push_back({10, {Injunction::Kind::delay, 4}});
    RunResult l = run(late);
    CHECK(first_admit_tick(l.event_log) == Tick{10});
    CHECK(l.event_log.find("outcome=window_closed") != std::string::npos);
    CHECK_NOTHROW(replay_audit(l, late));
}

TEST_CASE("a prohibition stops the assembly before a single admission") {
    ScenarioConfig cfg = base_config(32, 2);
    cfg.injunctions.push_back({3, {Injunction::Kind::forbid, 0}});
    RunResult r = run(cfg);

    CHECK_FALSE(r.commenced);
    CHECK(r.commence_tick == 0);
    CHECK(r.metrics.admitted == 0);
    CHECK(r.board_export.empty());
    CHECK(count_kind(r.event_log, "commence") == 0);
    CHECK(r.metrics.availability == Ratio(1));  // nothing was monitored
    CHECK_NOTHROW(replay_audit(r, cfg));
}

TEST_CASE("forged credentials are refused and leave no trace on the board") {
    ScenarioConfig cfg = base_config(41, 2);
    cfg.duration = 20;
    AdversarySpec sybil;
    sybil.kind = AdversarySpec::Kind::sybil;
    sybil.label = "forge";
    sybil.rate = Ratio(2);
    sybil.forged_count = 5;
    cfg.adversaries.push_back(sybil);
    RunResult r = run(cfg);

    CHECK(r.metrics.rejects_by_reason.at("UnknownCredential") == 20);  // 10 ticks * rate 2
    CHECK(r.metrics.admitted_by_pseudonym.size() == 2);  // only the two participants
    CHECK(r.metrics.admitted == 20);
    CHECK_NOTHROW(replay_audit(r, cfg));
}

TEST_CASE("a mirror amplifier never gets a request through") {
    ScenarioConfig cfg = base_config(42, 2);
    cfg.duration = 20;
    AdversarySpec amp;
    amp.kind = AdversarySpec::Kind::amplifier;
    amp.label = "mirror";
    amp.rate = Ratio(1);
    amp.ratio = Ratio(17, 2);
    cfg.adversaries.push_back(amp);
    RunResult r = run(cfg);

    CHECK(r.metrics.rejects_by_reason.at("Amplification") == 10);
    CHECK(r.metrics.admitted_by_pseudonym.size() == 2);
    CHECK_NOTHROW(replay_audit(r, cfg));
}

TEST_CASE("a flooding credential is clipped to its bucket, never beyond") {
    ScenarioConfig cfg = base_config(43, 2);
    cfg.duration = 25;
    AdversarySpec bot;
    bot.kind = AdversarySpec::Kind::botnet;
    bot.label = "flood";
    bot.rate = Ratio(4);
    cfg.adversaries.push_back(bot);
    RunResult r = run(cfg);

    // 15 active ticks at rate 4: burst 5 plus one refill per tick after the
    // first admit the rest bounce off the bucket.
    CHECK(r.metrics.rejects_by_reason.at("RateExceeded") > 0);
    std::uint64_t bot_offered = 15 * 4;
    std::uint64_t participant_admits = 2 * 15;
    std::uint64_t bot_admits = r.metrics.admitted - participant_admits;
    CHECK(bot_admits == 5 + 14);  // full burst, then the drip
    CHECK(r.metrics.rejects_by_reason.at("RateExceeded") == bot_offered - bot_admits);
    CHECK_NOTHROW(replay_audit(r, cfg));
}

TEST_CASE("enough cooperating holders unmask a disruptor; one too few never do") {
    ScenarioConfig cfg = base_config(44, 3);
    cfg.duration = 30;
    AdversarySpec noise;
    noise.kind = AdversarySpec::Kind::disruptor;
    noise.label = "noise";
    noise.rate = Ratio(1);
    noise.shares_scripted = 2;  // threshold k = 2
    cfg.adversaries.push_back(noise);

    RunResult unmasked = run(cfg);
    REQUIRE(unmasked.metrics.revocations.size() == 1);
    CHECK(count_kind(unmasked.event_log, "case_open") == 1);
    CHECK(count_kind(unmasked.event_log, "reveal") == 1);
    CHECK(count_kind(unmasked.event_log, "revoke") == 1);
    CHECK(count_kind(unmasked.event_log, "share_submit") == 2);
    CHECK(unmasked.metrics.rejects_by_reason.at("RevokedCredential") > 0);
    CHECK(unmasked.metrics.rejects_by_reason.at("MissingOpinion") >= 3);
    CHECK(unmasked.metrics.revocations[0].tick >= 12);  // three strikes first
    CHECK_NOTHROW(replay_audit(unmasked, cfg));

    cfg.adversaries[0].shares_scripted = 1;  // one short of the threshold
    cfg.seed = 45;
    RunResult masked = run(cfg);
    CHECK(masked.metrics.revocations.empty());
    CHECK(count_kind(masked.event_log, "case_open") == 1);
    CHECK(count_kind(masked.event_log, "reveal") == 0);
    CHECK(count_kind(masked.event_log, "share_submit") <= 1);
    CHECK(masked.metrics.rejects_by_reason.at("MissingOpinion") == 20);
    CHECK(masked.metrics.rejects_by_reason.count("RevokedCredential") == 0);
    CHECK_NOTHROW(replay_audit(masked, cfg));
}

TEST_CASE("impossible scenarios are refused up front") {
    ScenarioConfig cfg = base_config(1, 2);
    cfg.seed.reset();
    CHECK(run_code(cfg) == Errc::invalid_scenario);

    cfg = base_config(1, 2);
    cfg.duration = 0;
    CHECK(run_code(cfg) == Errc::invalid_scenario);

    cfg = base_config(1, 1);  // n = 3 shares, only 2 possible holders
    CHECK(run_code(cfg) == Errc::invalid_scenario);

    cfg = base_config(1, 2);
    cfg.queue_max = Ratio(0);
    CHECK(run_code(cfg) == Errc::invalid_scenario);

    cfg = base_config(1, 2);
    cfg.injunction_window = 1;
    cfg.manifest.start_time = 1;
    CHECK(run_code(cfg) == Errc::invalid_scenario);

    cfg = base_config(1, 2);
    cfg.revocation_initiator = "court";
    CHECK(run_code(cfg) == Errc::invalid_scenario);

    cfg = base_config(1, 2);
    cfg.topology = make_topology(3, {{0, 1}, {1, 2}});  // needs 4 nodes
    CHECK(run_code(cfg) == Errc::invalid_scenario);

    cfg = base_config(1, 2);
    AdversarySpec bad;
    bad.kind = AdversarySpec::Kind::disruptor;
    bad.label = "noise";
    bad.shares_scripted = 4;  // more than n = 3
    cfg.adversaries.push_back(bad);
    CHECK(run_code(cfg) == Errc::invalid_scenario);

    cfg = base_config(1, 2);
    cfg.manifest.board_mirroring = false;
    CHECK(run_code(cfg) == Errc::not_compliant);

    cfg = base_config(1, 2);
    cfg.manifest.target.is_general_interest = true;
    CHECK(run_code(cfg) == Errc::not_compliant);
}

TEST_CASE("the audit refuses doctored logs, metrics, and boards") {
    ScenarioConfig cfg = base_config(55, 3);
    RunResult good = run(cfg);
    REQUIRE(good.metrics.delivered > 0);

    SUBCASE("a deleted delivery") {
        RunResult bad = good;
        bad.event_log = drop_line(bad.event_log, ",deliver,");
        CHECK_THROWS_AS(replay_audit(bad, cfg), Error);
    }
    SUBCASE("an inflated admission count") {
        RunResult bad = good;
        bad.metrics.admitted += 1;
        CHECK_THROWS_AS(replay_audit(bad, cfg), Error);
    }
    SUBCASE("a corrupted board export") {
        RunResult bad = good;
        REQUIRE(!bad.board_export.empty());
        bad.board_export[10] = bad.board_export[10] == 'a' ? 'b' : 'a';
        CHECK_THROWS_AS(replay_audit(bad, cfg), Error);
    }
    SUBCASE("events shuffled out of tick order") {
        RunResult bad = good;
        std::size_t first_end = bad.event_log.find('\n');
        std::size_t second_end = bad.event_log.find('\n', first_end + 1);
        std::string first = bad.event_log.substr(0, first_end + 1);
        std::string second = bad.event_log.substr(first_end + 1, second_end - first_end);
        bad.event_log = second + first + bad.event_log.substr(second_end + 1);
        CHECK_THROWS_AS(replay_audit(bad, cfg), Error);
    }
    SUBCASE("a rewritten sequence number") {
        RunResult bad = good;
        std::size_t admit = bad.event_log.find(",admit,");
        std::size_t seq = bad.event_log.find("seq=0", admit);
        REQUIRE(seq != std::string::npos);
        bad.event_log.replace(seq, 5, "seq=5");
        CHECK_THROWS_AS(replay_audit(bad, cfg), Error);
    }
    SUBCASE("a false availability claim") {
        RunResult bad = good;
        bad.metrics.availability = Ratio(1, 2);
        CHECK_THROWS_AS(replay_audit(bad, cfg), Error);
    }
}
