#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "assemblynet/bytes.hpp"
#include "assemblynet/rational.hpp"

namespace assemblynet {

struct Request {
    Digest32 pseudonym{};
    Tick timestamp = 0;
    std::uint64_t payload_size = 0;        // bytes, > 0
    Ratio expected_response_ratio{0};      // response bytes per request byte, > 0
    Digest32 opinion_digest{};
};

enum class RejectReason {
    rate_exceeded,
    group_cap_exceeded,
    amplification,
    missing_opinion,
    revoked_credential,
    assembly_inactive,
    unknown_credential,
};

std::string to_string(RejectReason reason);

struct AdmitOutcome {
    bool admitted = false;
    RejectReason reason = RejectReason::rate_exceeded;

    static AdmitOutcome admit() { return {true, RejectReason::rate_exceeded}; }
    static AdmitOutcome reject(RejectReason r) { return {false, r}; }
};

/// Token buckets: one per enrolled credential (capacity b, refill r/s) and a
/// global bucket scaled to the active enrollment (capacity N*b, refill N*r).
/// All token arithmetic is exact rationals; refill is continuous and lazy.
/// Rejected requests consume nothing.
class RateState {
public:
    RateState(Ratio per_credential_rate, Ratio burst,
              Ratio amplification_threshold = Ratio(1));

    /// New credential starts with a full bucket; the global bucket gains the
    /// credential's burst allowance so a steady-state group stays consistent.
    void enroll(const Digest32& pseudonym, Tick now);

    /// Revocation path: bucket dropped, enrollment and global refill shrink.
    void remove(const Digest32& pseudonym, Tick now);

    /// Rescales the global bucket to a given active count without touching
    /// per-credential buckets.
    void set_enrollment(std::int64_t n_active, Tick now);

    bool enrolled(const Digest32& pseudonym) const;
    std::int64_t active_count() const { return n_active_; }
    Ratio global_refill_rate() const;
    Ratio global_tokens(Tick now) const;
    Ratio credential_tokens(const Digest32& pseudonym, Tick now) const;

    /// Check order: amplification, opinion digest, per-credential bucket,
    /// global bucket. Admission consumes one token from each bucket. The
    /// caller is responsible for the revoked / inactive / unknown gates.
    AdmitOutcome admit(const Request& request, Tick now, const Digest32& expected_opinion);

private:
    struct Bucket {
        Ratio tokens{0};
        Tick last_update = 0;
    };

    void refill(Bucket& bucket, Ratio rate, Ratio capacity, Tick now) const;
    Ratio global_capacity() const;

    Ratio rate_;
    Ratio burst_;
    Ratio amplification_threshold_;
    std::map<Digest32, Bucket> buckets_;
    Bucket global_;
    std::int64_t n_active_ = 0;
};

/// Minimum group size whose aggregate admitted rate N*r reaches capacity C:
/// ceil(C / r).
std::int64_t critical_mass(Ratio capacity, Ratio per_credential_rate);

}  // namespace assemblynet
