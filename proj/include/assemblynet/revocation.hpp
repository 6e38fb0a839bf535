#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "assemblynet/bytes.hpp"
#include "assemblynet/primitives.hpp"

namespace assemblynet {

/// Arithmetic in GF(257), the smallest prime field holding every byte
/// value. Elements are 0..256.
namespace gf257 {

constexpr std::uint32_t kModulus = 257;

std::uint16_t add(std::uint16_t a, std::uint16_t b);
std::uint16_t sub(std::uint16_t a, std::uint16_t b);
std::uint16_t mul(std::uint16_t a, std::uint16_t b);
std::uint16_t inv(std::uint16_t a);  // a != 0

/// Horner evaluation of sum coeffs[i] * x^i.
std::uint16_t poly_eval(const std::vector<std::uint16_t>& coeffs, std::uint16_t x);

/// Coefficients of the unique degree <= (points-1) polynomial through
/// the given (x, y) pairs; all x distinct.
std::vector<std::uint16_t> interpolate(
    const std::vector<std::pair<std::uint16_t, std::uint16_t>>& points);

}  // namespace gf257

/// One holder's slice of a split secret: f_j(holder_index) for every
/// secret byte j. holder_index is in [1, 256].
struct Share {
    std::uint16_t holder_index = 0;
    std::vector<std::uint16_t> values;

    bool operator==(const Share&) const = default;
};

/// Wire format: index byte (0x00 encodes 256), u32 length, u16 per value,
/// all big-endian.
Bytes serialize_share(const Share& share);
Share deserialize_share(std::span<const std::uint8_t> data);

/// Splits secret into n shares with threshold k: per byte, a random
/// degree-(k-1) polynomial with f(0) = byte. Any k shares reconstruct;
/// k-1 reveal nothing. Throws Errc::bad_threshold, Errc::empty_secret.
std::vector<Share> split_secret(std::span<const std::uint8_t> secret, int k, int n,
                                std::mt19937_64& rng);

/// Lagrange interpolation at x=0 per byte using the first k distinct
/// holders. Throws Errc::insufficient_shares, Errc::inconsistent_shares.
Bytes reconstruct(const std::vector<Share>& shares, int k);

/// List commitment over the ordered shares plus the per-share digests
/// needed to check a single submitted share.
struct ShareCommitment {
    Digest32 commitment{};
    std::vector<Digest32> share_digests;
};

ShareCommitment commit_shares(const std::vector<Share>& shares,
                              const PrimitiveProvider& provider);

struct RevocationEscrow {
    AssemblyId assembly_id{};
    Digest32 pseudonym{};
    int threshold_k = 0;
    int share_count_n = 0;
    Digest32 commitment{};
    std::vector<Digest32> share_digests;
};

enum class CaseStatus { open, revealed, closed };

struct RevocationCase {
    Digest32 pseudonym{};
    Tick opened_at = 0;
    std::map<std::uint16_t, Share> submitted_shares;  // keyed by holder_index
    CaseStatus status = CaseStatus::open;
    std::optional<Bytes> revealed_identity;
};

/// Records a share; reveals once k distinct holders have submitted.
/// Resubmission by the same holder is idempotent. Throws
/// Errc::case_closed, Errc::share_mismatch.
void submit_share(RevocationCase& rcase, const Share& share,
                  const RevocationEscrow& escrow, const PrimitiveProvider& provider);

/// Verifies the information-theoretic secrecy of a (k-1)-subset: every
/// candidate secret byte admits a polynomial consistent with the given
/// shares.
struct SecrecyReport {
    // consistent_candidates[j] counts candidate byte values compatible
    // with byte position j; 256 everywhere means zero leakage.
    std::vector<int> consistent_candidates;
    bool all_consistent() const;
};

SecrecyReport secrecy_check(const std::vector<Share>& shares, int k);

}  // namespace assemblynet
