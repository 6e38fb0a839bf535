#include "assemblynet/throttle.hpp"

#include <algorithm>

#include "assemblynet/errors.hpp"
#include "assemblynet/primitives.hpp"

namespace assemblynet {

std::string to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::rate_exceeded: return "RateExceeded";
        case RejectReason::group_cap_exceeded: return "GroupCapExceeded";
        case RejectReason::amplification: return "Amplification";
        case RejectReason::missing_opinion: return "MissingOpinion";
        case RejectReason::revoked_credential: return "RevokedCredential";
        case RejectReason::assembly_inactive: return "AssemblyInactive";
        case RejectReason::unknown_credential: return "UnknownCredential";
    }
    return "RateExceeded";
}

RateState::RateState(Ratio per_credential_rate, Ratio burst,
                     Ratio amplification_threshold)
    : rate_(per_credential_rate),
      burst_(burst),
      amplification_threshold_(amplification_threshold) {
    if (rate_ <= Ratio(0)) throw Error(Errc::parse_error, "rate must be positive");
    if (burst_ <= Ratio(0)) throw Error(Errc::parse_error, "burst must be positive");
}

Ratio RateState::global_capacity() const { return Ratio(n_active_) * burst_; }

Ratio RateState::global_refill_rate() const { return Ratio(n_active_) * rate_; }

void RateState::refill(Bucket& bucket, Ratio rate, Ratio capacity, Tick now) const {
    if (now > bucket.last_update) {
        Ratio elapsed(static_cast<std::int64_t>(now - bucket.last_update));
        bucket.tokens = std::min(capacity, bucket.tokens + rate * elapsed);
    }
    bucket.last_update = now;
}

void RateState::enroll(const Digest32& pseudonym, Tick now) {
    auto [it, inserted] = buckets_.emplace(pseudonym, Bucket{burst_, now});
    if (!inserted) return;
    refill(global_, global_refill_rate(), global_capacity(), now);
    ++n_active_;
    // The group's allowance grows with the group; the newcomer's burst is
    // added so that an all-full steady state stays all-full.
    global_.tokens = std::min(global_capacity(), global_.tokens + burst_);
}

void RateState::remove(const Digest32& pseudonym, Tick now) {
    if (buckets_.erase(pseudonym) == 0) return;
    refill(global_, global_refill_rate(), global_capacity(), now);
    --n_active_;
    global_.tokens = std::max(Ratio(0), std::min(global_capacity(), global_.tokens - burst_));
}

void RateState::set_enrollment(std::int64_t n_active, Tick now) {
    if (n_active < 0) throw Error(Errc::parse_error, "enrollment cannot be negative");
    refill(global_, global_refill_rate(), global_capacity(), now);
    Ratio delta = Ratio(n_active - n_active_) * burst_;
    n_active_ = n_active;
    global_.tokens = std::max(Ratio(0), std::min(global_capacity(), global_.tokens + delta));
}

bool RateState::enrolled(const Digest32& pseudonym) const {
    return buckets_.contains(pseudonym);
}

Ratio RateState::global_tokens(Tick now) const {
    Bucket copy = global_;
    refill(copy, global_refill_rate(), global_capacity(), now);
    return copy.tokens;
}

Ratio RateState::credential_tokens(const Digest32& pseudonym, Tick now) const {
    auto it = buckets_.find(pseudonym);
    if (it == buckets_.end()) return Ratio(0);
    Bucket copy = it->second;
    refill(copy, rate_, burst_, now);
    return copy.tokens;
}

AdmitOutcome RateState::admit(const Request& request, Tick now,
                              const Digest32& expected_opinion) {
    if (request.payload_size == 0)
        throw Error(Errc::parse_error, "request payload must be non-empty");
    if (request.expected_response_ratio <= Ratio(0))
        throw Error(Errc::parse_error, "response ratio must be positive");

    if (request.expected_response_ratio > amplification_threshold_)
        return AdmitOutcome::reject(RejectReason::amplification);
    if (!constant_time_equal(request.opinion_digest, expected_opinion))
        return AdmitOutcome::reject(RejectReason::missing_opinion);

    auto it = buckets_.find(request.pseudonym);
    if (it == buckets_.end())
        return AdmitOutcome::reject(RejectReason::unknown_credential);

    Bucket& bucket = it->second;
    refill(bucket, rate_, burst_, now);
    if (bucket.tokens < Ratio(1))
        return AdmitOutcome::reject(RejectReason::rate_exceeded);

    refill(global_, global_refill_rate(), global_capacity(), now);
    if (global_.tokens < Ratio(1))
        return AdmitOutcome::reject(RejectReason::group_cap_exceeded);

    bucket.tokens -= Ratio(1);
    global_.tokens -= Ratio(1);
    return AdmitOutcome::admit();
}

std::int64_t critical_mass(Ratio capacity, Ratio per_credential_rate) {
    if (capacity <= Ratio(0) || per_credential_rate <= Ratio(0))
        throw Error(Errc::parse_error, "capacity and rate must be positive");
    return ceil_ratio(capacity / per_credential_rate);
}

}  // namespace assemblynet
