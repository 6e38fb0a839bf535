#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "assemblynet/bytes.hpp"
#include "assemblynet/primitives.hpp"
#include "assemblynet/rational.hpp"

namespace assemblynet {

/// 4 days of simulated seconds: the default objection window between a
/// provable announcement and the earliest lawful commencement.
constexpr Tick kDefaultInjunctionWindow = 345600;

constexpr std::size_t kMaxOpinionBytes = 4096;

enum class SizeClass { small, medium, large };

SizeClass parse_size_class(const std::string& text);
std::string to_string(SizeClass size_class);

struct TargetDescriptor {
    std::string address;
    Ratio declared_capacity{0};  // requests/second, > 0
    bool is_general_interest = false;
    SizeClass size_class = SizeClass::medium;
};

struct Attestation {
    std::string text;
    Digest32 author_pseudonym{};
    Tick timestamp = 0;
};

/// The three judgments no checker can make mechanically; organizers attest
/// to them and the report carries a distinct verdict level for that.
struct AttestationSet {
    Attestation subsidiarity;
    Attestation proportionality;
    Attestation no_coercion;
    bool no_coercion_declared = false;
};

struct AssemblyManifest {
    AssemblyId assembly_id{};
    TargetDescriptor target;
    std::string opinion_statement;
    Tick start_time = 0;
    Tick end_time = 0;
    Ratio per_credential_rate{0};
    std::int64_t critical_mass_min = 0;
    int revocation_threshold_k = 0;
    int revocation_share_count_n = 0;
    std::vector<Digest32> organizer_pseudonyms;
    bool board_mirroring = false;
    bool supervisor_channel = false;
    AttestationSet attestations;
};

/// Structural validity only; an empty opinion statement or a missing
/// attestation is a compliance failure, not malformedness. Throws
/// Errc::malformed_manifest.
void validate_manifest(const AssemblyManifest& manifest);

enum class Verdict { pass, fail, attested };

std::string to_string(Verdict verdict);

struct ComplianceNode {
    std::string name;
    Verdict verdict = Verdict::fail;
    std::string detail;
};

/// One verdict per requirement node; compliant iff nothing failed.
/// Mechanical nodes never read "attested"; attestation nodes never "pass".
struct ComplianceReport {
    std::array<ComplianceNode, 9> nodes;

    bool compliant() const;
    const ComplianceNode& node(const std::string& name) const;
    std::string to_text() const;
};

ComplianceReport check_manifest(const AssemblyManifest& manifest,
                                Ratio r_human_max = Ratio(1));

enum class DeliveryProof { target_ack, board };

struct AnnouncementReceipt {
    Digest32 manifest_digest{};
    Tick delivered_at = 0;
    DeliveryProof proof = DeliveryProof::target_ack;
    Digest32 target_ack{};
    Tick window_ends = 0;
};

/// Returns true when the target acknowledged this delivery attempt
/// (attempts are numbered from 1).
using DeliveryFn = std::function<bool(const TargetDescriptor&, int attempt)>;

struct AnnounceOptions {
    Tick injunction_window = kDefaultInjunctionWindow;
    int max_retries = 3;         // attempts beyond the first
    bool board_fallback = true;  // public-board announcement when all fail
};

/// Throws Errc::not_compliant before attempting delivery and
/// Errc::delivery_failed when every attempt fails with no fallback.
AnnouncementReceipt announce(const AssemblyManifest& manifest, const DeliveryFn& deliver,
                             Tick now, const PrimitiveProvider& provider,
                             const AnnounceOptions& options = {});

enum class ScheduleState { scheduled, forbidden };

struct AssemblyStatus {
    Tick start_time = 0;
    Tick end_time = 0;
    ScheduleState state = ScheduleState::scheduled;
};

AssemblyStatus status_of(const AssemblyManifest& manifest);

struct Injunction {
    enum class Kind { delay, forbid, allow };
    Kind kind = Kind::allow;
    Tick delay_ticks = 0;
};

/// The objection window is half-open [delivered_at, window_ends); filing at
/// window_ends throws Errc::window_closed.
AssemblyStatus file_injunction(AssemblyStatus status, const AnnouncementReceipt& receipt,
                               const Injunction& injunction, Tick now);

/// True iff announced, the window has elapsed, the schedule has started and
/// not ended, and no injunction forbade the assembly.
bool may_commence(const AssemblyStatus& status, const AnnouncementReceipt* receipt,
                  Tick now);

/// File form: `key = value` lines with [target] and [attestations] sections.
AssemblyManifest parse_manifest(std::string_view text);
std::string serialize_manifest(const AssemblyManifest& manifest);

/// Digest over the canonical serialized form, independent of the formatting
/// of the file the manifest was read from.
Digest32 manifest_digest(const AssemblyManifest& manifest,
                         const PrimitiveProvider& provider);

}  // namespace assemblynet
