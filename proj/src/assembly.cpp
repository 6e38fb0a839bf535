#include "assemblynet/assembly.hpp"

#include <algorithm>
#include <sstream>

#include "assemblynet/config.hpp"
#include "assemblynet/errors.hpp"

namespace assemblynet {

SizeClass parse_size_class(const std::string& text) {
    if (text == "small") return SizeClass::small;
    if (text == "medium") return SizeClass::medium;
    if (text == "large") return SizeClass::large;
    throw Error(Errc::parse_error, "size_class must be small, medium, or large");
}

std::string to_string(SizeClass size_class) {
    switch (size_class) {
        case SizeClass::small: return "small";
        case SizeClass::medium: return "medium";
        case SizeClass::large: return "large";
    }
    return "medium";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::attested: return "attested";
    }
    return "fail";
}

void validate_manifest(const AssemblyManifest& manifest) {
    if (manifest.start_time >= manifest.end_time)
        throw Error(Errc::malformed_manifest, "start_time must precede end_time");
    if (manifest.per_credential_rate <= Ratio(0))
        throw Error(Errc::malformed_manifest, "per_credential_rate must be positive");
    if (manifest.target.declared_capacity <= Ratio(0))
        throw Error(Errc::malformed_manifest, "target capacity must be positive");
    if (manifest.opinion_statement.size() > kMaxOpinionBytes)
        throw Error(Errc::malformed_manifest, "opinion_statement exceeds 4096 bytes");
    if (manifest.revocation_threshold_k < 1)
        throw Error(Errc::malformed_manifest, "revocation threshold k must be >= 1");
    if (manifest.revocation_share_count_n < manifest.revocation_threshold_k ||
        manifest.revocation_share_count_n > 256)
        throw Error(Errc::malformed_manifest, "need k <= n <= 256 revocation shares");
}

bool ComplianceReport::compliant() const {
    return std::none_of(nodes.begin(), nodes.end(), [](const ComplianceNode& n) {
        return n.verdict == Verdict::fail;
    });
}

const ComplianceNode& ComplianceReport::node(const std::string& name) const {
    for (const ComplianceNode& n : nodes)
        if (n.name == name) return n;
    throw Error(Errc::parse_error, "no requirement node named " + name);
}

std::string ComplianceReport::to_text() const {
    std::ostringstream out;
    for (const ComplianceNode& n : nodes) {
        out << n.name << ": " << to_string(n.verdict);
        if (!n.detail.empty()) out << " (" << n.detail << ")";
        out << '\n';
    }
    out << "overall: " << (compliant() ? "compliant" : "non-compliant") << '\n';
    return out.str();
}

ComplianceReport check_manifest(const AssemblyManifest& manifest, Ratio r_human_max) {
    validate_manifest(manifest);

    auto mechanical = [](const std::string& name, bool ok, std::string detail) {
        return ComplianceNode{name, ok ? Verdict::pass : Verdict::fail,
                              ok ? "" : std::move(detail)};
    };
    auto attested = [](const std::string& name, bool ok, std::string detail) {
        return ComplianceNode{name, ok ? Verdict::attested : Verdict::fail,
                              ok ? "" : std::move(detail)};
    };

    bool has_opinion = !manifest.opinion_statement.empty();

    ComplianceReport report{{
        mechanical("visibility", manifest.board_mirroring && has_opinion,
                   "requires board mirroring and a stated opinion"),
        mechanical("expression of opinion", has_opinion, "opinion statement is empty"),
        mechanical("collectivity",
                   manifest.critical_mass_min >= 2 &&
                       manifest.per_credential_rate <= r_human_max,
                   "requires critical_mass_min >= 2 and rate within the human cap"),
        attested("no coercion",
                 manifest.attestations.no_coercion_declared &&
                     !manifest.attestations.no_coercion.text.empty(),
                 "missing declaration that participation stays non-coercive"),
        ComplianceNode{},  // proportionality, filled below
        attested("subsidiarity", !manifest.attestations.subsidiarity.text.empty(),
                 "missing justification that alternatives were pursued"),
        mechanical("supervision", manifest.supervisor_channel,
                   "no supervisor observation channel declared"),
        mechanical("central organisation", !manifest.organizer_pseudonyms.empty(),
                   "no organizer pseudonyms listed"),
        mechanical("announcement", !manifest.target.address.empty(),
                   "no target address to deliver the announcement to"),
    }};

    // Proportionality is attestation-backed but fails outright against
    // infrastructure of general interest, whatever the attestation says.
    if (manifest.target.is_general_interest) {
        report.nodes[4] = ComplianceNode{"proportionality", Verdict::fail,
                                         "target serves the general interest"};
    } else {
        report.nodes[4] =
            attested("proportionality", !manifest.attestations.proportionality.text.empty(),
                     "missing justification balancing goal against impact");
    }
    return report;
}

AnnouncementReceipt announce(const AssemblyManifest& manifest, const DeliveryFn& deliver,
                             Tick now, const PrimitiveProvider& provider,
                             const AnnounceOptions& options) {
    ComplianceReport report = check_manifest(manifest);
    if (!report.compliant())
        throw Error(Errc::not_compliant, "manifest failed compliance check");

    AnnouncementReceipt receipt;
    receipt.manifest_digest = manifest_digest(manifest, provider);
    receipt.delivered_at = now;
    receipt.window_ends = now + options.injunction_window;

    for (int attempt = 1; attempt <= 1 + options.max_retries; ++attempt) {
        if (deliver(manifest.target, attempt)) {
            Bytes ack(receipt.manifest_digest.begin(), receipt.manifest_digest.end());
            put_be64(ack, now);
            receipt.target_ack = provider.digest(ack);
            receipt.proof = DeliveryProof::target_ack;
            return receipt;
        }
    }
    if (!options.board_fallback)
        throw Error(Errc::delivery_failed, "target unreachable and no board fallback");
    receipt.proof = DeliveryProof::board;
    return receipt;
}

AssemblyStatus status_of(const AssemblyManifest& manifest) {
    return AssemblyStatus{manifest.start_time, manifest.end_time,
                          ScheduleState::scheduled};
}

AssemblyStatus file_injunction(AssemblyStatus status, const AnnouncementReceipt& receipt,
                               const Injunction& injunction, Tick now) {
    if (now >= receipt.window_ends)
        throw Error(Errc::window_closed, "objection window has closed");
    switch (injunction.kind) {
        case Injunction::Kind::delay:
            status.start_time += injunction.delay_ticks;
            break;
        case Injunction::Kind::forbid:
            status.state = ScheduleState::forbidden;
            break;
        case Injunction::Kind::allow:
            break;
    }
    return status;
}

bool may_commence(const AssemblyStatus& status, const AnnouncementReceipt* receipt,
                  Tick now) {
    return receipt != nullptr && now >= receipt->window_ends &&
           now >= status.start_time && now < status.end_time &&
           status.state != ScheduleState::forbidden;
}

namespace {

std::vector<Digest32> parse_digest_list(const std::string& text) {
    std::vector<Digest32> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(
            pos, comma == std::string::npos ? text.size() - pos : comma - pos);
        out.push_back(digest_from_hex(item));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string format_digest_list(const std::vector<Digest32>& digests) {
    std::string out;
    for (std::size_t i = 0; i < digests.size(); ++i) {
        if (i) out += ',';
        out += to_hex(digests[i]);
    }
    return out;
}

Attestation parse_attestation(const ConfigFile& file, const std::string& key) {
    Attestation a;
    a.text = file.get_string_or("attestations", key, "");
    if (file.has("attestations", key + "_author"))
        a.author_pseudonym = digest_from_hex(file.get_string("attestations", key + "_author"));
    a.timestamp = static_cast<Tick>(file.get_int_or("attestations", key + "_time", 0));
    return a;
}

}  // namespace

AssemblyManifest parse_manifest(std::string_view text) {
    ConfigFile file = parse_config(text);
    file.require_known_keys(
        "", {"assembly_id", "opinion_statement", "start_time", "end_time",
             "per_credential_rate", "critical_mass_min", "revocation_k", "revocation_n",
             "organizer_pseudonyms", "board_mirroring", "supervisor_channel"});
    file.require_known_keys("target",
                            {"address", "capacity", "is_general_interest", "size_class"});
    file.require_known_keys(
        "attestations",
        {"subsidiarity", "subsidiarity_author", "subsidiarity_time", "proportionality",
         "proportionality_author", "proportionality_time", "no_coercion",
         "no_coercion_author", "no_coercion_time", "no_coercion_declared"});
    for (const auto& [name, entries] : file.sections)
        if (!name.empty() && name != "target" && name != "attestations")
            throw Error(Errc::malformed_manifest, "unknown section [" + name + "]");

    AssemblyManifest m;
    Bytes id = from_hex(file.get_string("", "assembly_id"));
    if (id.size() != m.assembly_id.size())
        throw Error(Errc::malformed_manifest, "assembly_id must be 16 bytes of hex");
    std::copy(id.begin(), id.end(), m.assembly_id.begin());

    m.opinion_statement = file.get_string_or("", "opinion_statement", "");
    m.start_time = static_cast<Tick>(file.get_int("", "start_time"));
    m.end_time = static_cast<Tick>(file.get_int("", "end_time"));
    m.per_credential_rate = file.get_ratio("", "per_credential_rate");
    m.critical_mass_min = file.get_int("", "critical_mass_min");
    m.revocation_threshold_k = static_cast<int>(file.get_int("", "revocation_k"));
    m.revocation_share_count_n = static_cast<int>(file.get_int("", "revocation_n"));
    if (file.has("", "organizer_pseudonyms"))
        m.organizer_pseudonyms = parse_digest_list(file.get_string("", "organizer_pseudonyms"));
    m.board_mirroring = file.get_bool_or("", "board_mirroring", false);
    m.supervisor_channel = file.get_bool_or("", "supervisor_channel", false);

    m.target.address = file.get_string_or("target", "address", "");
    m.target.declared_capacity = file.get_ratio("target", "capacity");
    m.target.is_general_interest = file.get_bool_or("target", "is_general_interest", false);
    m.target.size_class = parse_size_class(file.get_string_or("target", "size_class", "medium"));

    m.attestations.subsidiarity = parse_attestation(file, "subsidiarity");
    m.attestations.proportionality = parse_attestation(file, "proportionality");
    m.attestations.no_coercion = parse_attestation(file, "no_coercion");
    m.attestations.no_coercion_declared =
        file.get_bool_or("attestations", "no_coercion_declared", false);

    validate_manifest(m);
    return m;
}

namespace {

void write_attestation(std::ostringstream& out, const std::string& key,
                       const Attestation& a) {
    if (!a.text.empty()) out << key << " = " << a.text << '\n';
    Digest32 zero{};
    if (a.author_pseudonym != zero)
        out << key << "_author = " << to_hex(a.author_pseudonym) << '\n';
    if (a.timestamp != 0) out << key << "_time = " << a.timestamp << '\n';
}

}  // namespace

std::string serialize_manifest(const AssemblyManifest& m) {
    std::ostringstream out;
    out << "assembly_id = " << to_hex(m.assembly_id) << '\n';
    if (!m.opinion_statement.empty())
        out << "opinion_statement = " << m.opinion_statement << '\n';
    out << "start_time = " << m.start_time << '\n';
    out << "end_time = " << m.end_time << '\n';
    out << "per_credential_rate = " << format_ratio(m.per_credential_rate) << '\n';
    out << "critical_mass_min = " << m.critical_mass_min << '\n';
    out << "revocation_k = " << m.revocation_threshold_k << '\n';
    out << "revocation_n = " << m.revocation_share_count_n << '\n';
    if (!m.organizer_pseudonyms.empty())
        out << "organizer_pseudonyms = " << format_digest_list(m.organizer_pseudonyms)
            << '\n';
    out << "board_mirroring = " << (m.board_mirroring ? "true" : "false") << '\n';
    out << "supervisor_channel = " << (m.supervisor_channel ? "true" : "false") << '\n';

    out << "\n[target]\n";
    if (!m.target.address.empty()) out << "address = " << m.target.address << '\n';
    out << "capacity = " << format_ratio(m.target.declared_capacity) << '\n';
    out << "is_general_interest = " << (m.target.is_general_interest ? "true" : "false")
        << '\n';
    out << "size_class = " << to_string(m.target.size_class) << '\n';

    out << "\n[attestations]\n";
    write_attestation(out, "subsidiarity", m.attestations.subsidiarity);
    write_attestation(out, "proportionality", m.attestations.proportionality);
    write_attestation(out, "no_coercion", m.attestations.no_coercion);
    out << "no_coercion_declared = "
        << (m.attestations.no_coercion_declared ? "true" : "false") << '\n';
    return out.str();
}

Digest32 manifest_digest(const AssemblyManifest& manifest,
                         const PrimitiveProvider& provider) {
    std::string canonical = serialize_manifest(manifest);
    return provider.digest(Bytes(canonical.begin(), canonical.end()));
}

}  // namespace assemblynet
