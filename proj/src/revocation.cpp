#include "assemblynet/revocation.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "assemblynet/errors.hpp"
#include "assemblynet/rng.hpp"

namespace assemblynet {

namespace gf257 {

std::uint16_t add(std::uint16_t a, std::uint16_t b) {
    return static_cast<std::uint16_t>((a + b) % kModulus);
}

std::uint16_t sub(std::uint16_t a, std::uint16_t b) {
    return static_cast<std::uint16_t>((a + kModulus - b) % kModulus);
}

std::uint16_t mul(std::uint16_t a, std::uint16_t b) {
    return static_cast<std::uint16_t>(
        (static_cast<std::uint32_t>(a) * b) % kModulus);
}

namespace {

std::uint16_t pow_inverse(std::uint16_t a) {
    // Fermat: a^(p-2) mod p.
    std::uint16_t result = 1;
    std::uint16_t base = a;
    unsigned exp = kModulus - 2;
    while (exp != 0) {
        if (exp & 1) result = mul(result, base);
        base = mul(base, base);
        exp >>= 1;
    }
    return result;
}

}  // namespace

std::uint16_t inv(std::uint16_t a) {
    // Table lookup; inversion sits on the hot path of the interpolation
    // sweeps in secrecy_check. inv(0) has no meaning and maps to 0.
    static const auto table = [] {
        std::array<std::uint16_t, kModulus> t{};
        for (std::uint16_t v = 1; v < kModulus; ++v) t[v] = pow_inverse(v);
        return t;
    }();
    return table[a % kModulus];
}

std::uint16_t poly_eval(const std::vector<std::uint16_t>& coeffs, std::uint16_t x) {
    std::uint16_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = add(mul(acc, x), *it);
    return acc;
}

std::vector<std::uint16_t> interpolate(
    const std::vector<std::pair<std::uint16_t, std::uint16_t>>& points) {
    // Lagrange basis expansion; fine for the small k used here.
    std::size_t m = points.size();
    std::vector<std::uint16_t> coeffs(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        // numerator polynomial prod_{j != i} (x - x_j)
        std::vector<std::uint16_t> num{1};
        std::uint16_t denom = 1;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            std::vector<std::uint16_t> next(num.size() + 1, 0);
            for (std::size_t d = 0; d < num.size(); ++d) {
                next[d + 1] = add(next[d + 1], num[d]);
                next[d] = add(next[d], mul(num[d], sub(0, points[j].first)));
            }
            num = std::move(next);
            denom = mul(denom, sub(points[i].first, points[j].first));
        }
        std::uint16_t scale = mul(points[i].second, inv(denom));
        for (std::size_t d = 0; d < num.size(); ++d)
            coeffs[d] = add(coeffs[d], mul(num[d], scale));
    }
    return coeffs;
}

}  // namespace gf257

namespace {

constexpr int kMaxShareCount = 256;

std::uint8_t encode_holder_index(std::uint16_t index) {
    // Indices run 1..256; 256 wraps to byte 0x00, which is otherwise unused.
    return static_cast<std::uint8_t>(index == 256 ? 0 : index);
}

std::uint16_t decode_holder_index(std::uint8_t byte) {
    return byte == 0 ? 256 : byte;
}

}  // namespace

Bytes serialize_share(const Share& share) {
    Bytes out;
    out.push_back(encode_holder_index(share.holder_index));
    put_be32(out, static_cast<std::uint32_t>(share.values.size()));
    for (std::uint16_t v : share.values) {
        out.push_back(static_cast<std::uint8_t>(v >> 8));
        out.push_back(static_cast<std::uint8_t>(v & 0xff));
    }
    return out;
}

Share deserialize_share(std::span<const std::uint8_t> data) {
    if (data.size() < 5)
        throw Error(Errc::parse_error, "share too short");
    Share share;
    share.holder_index = decode_holder_index(data[0]);
    std::uint32_t count = get_be32(data, 1);
    if (data.size() != 5 + 2 * static_cast<std::size_t>(count))
        throw Error(Errc::parse_error, "share length mismatch");
    share.values.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        std::uint16_t v = static_cast<std::uint16_t>(
            (static_cast<std::uint16_t>(data[5 + 2 * i]) << 8) | data[6 + 2 * i]);
        if (v >= gf257::kModulus)
            throw Error(Errc::parse_error, "share value outside GF(257)");
        share.values.push_back(v);
    }
    return share;
}

std::vector<Share> split_secret(std::span<const std::uint8_t> secret, int k, int n,
                                std::mt19937_64& rng) {
    if (k < 1 || k > n || n > kMaxShareCount)
        throw Error(Errc::bad_threshold, "need 1 <= k <= n <= 256");
    if (secret.empty())
        throw Error(Errc::empty_secret, "secret must be non-empty");

    std::vector<Share> shares(n);
    for (int i = 0; i < n; ++i) {
        shares[i].holder_index = static_cast<std::uint16_t>(i + 1);
        shares[i].values.resize(secret.size());
    }
    std::vector<std::uint16_t> coeffs(k);
    for (std::size_t j = 0; j < secret.size(); ++j) {
        coeffs[0] = secret[j];
        for (int d = 1; d < k; ++d)
            coeffs[d] = static_cast<std::uint16_t>(uniform_below(rng, gf257::kModulus));
        for (int i = 0; i < n; ++i)
            shares[i].values[j] = gf257::poly_eval(coeffs, shares[i].holder_index);
    }
    return shares;
}

Bytes reconstruct(const std::vector<Share>& shares, int k) {
    if (k < 1) throw Error(Errc::bad_threshold, "threshold must be >= 1");

    // First k distinct holders, in holder order for determinism.
    std::map<std::uint16_t, const Share*> by_index;
    for (const Share& s : shares) by_index.emplace(s.holder_index, &s);
    if (static_cast<int>(by_index.size()) < k)
        throw Error(Errc::insufficient_shares,
                    "need " + std::to_string(k) + " distinct holders, have " +
                        std::to_string(by_index.size()));

    std::vector<const Share*> chosen;
    for (const auto& [idx, share] : by_index) {
        chosen.push_back(share);
        if (static_cast<int>(chosen.size()) == k) break;
    }
    std::size_t length = chosen.front()->values.size();
    for (const Share* s : chosen)
        if (s->values.size() != length)
            throw Error(Errc::inconsistent_shares, "share value lengths differ");

    // Lagrange weights at x = 0 are shared across byte positions.
    std::vector<std::uint16_t> weights(k);
    for (int i = 0; i < k; ++i) {
        std::uint16_t num = 1;
        std::uint16_t den = 1;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            num = gf257::mul(num, chosen[j]->holder_index);
            den = gf257::mul(den,
                             gf257::sub(chosen[j]->holder_index, chosen[i]->holder_index));
        }
        weights[i] = gf257::mul(num, gf257::inv(den));
    }

    Bytes secret(length);
    for (std::size_t b = 0; b < length; ++b) {
        std::uint16_t acc = 0;
        for (int i = 0; i < k; ++i)
            acc = gf257::add(acc, gf257::mul(weights[i], chosen[i]->values[b]));
        if (acc > 255)
            throw Error(Errc::inconsistent_shares,
                        "interpolated value is not a byte; shares do not belong together");
        secret[b] = static_cast<std::uint8_t>(acc);
    }
    return secret;
}

ShareCommitment commit_shares(const std::vector<Share>& shares,
                              const PrimitiveProvider& provider) {
    ShareCommitment out;
    Bytes all;
    for (const Share& s : shares) {
        Digest32 d = provider.digest(serialize_share(s));
        out.share_digests.push_back(d);
        all.insert(all.end(), d.begin(), d.end());
    }
    out.commitment = provider.digest(all);
    return out;
}

void submit_share(RevocationCase& rcase, const Share& share,
                  const RevocationEscrow& escrow, const PrimitiveProvider& provider) {
    if (rcase.status != CaseStatus::open)
        throw Error(Errc::case_closed, "revocation case is not open");
    if (share.holder_index < 1 ||
        share.holder_index > static_cast<std::uint16_t>(escrow.share_count_n))
        throw Error(Errc::share_mismatch, "holder index outside escrow range");

    Digest32 expected = escrow.share_digests.at(share.holder_index - 1);
    Digest32 actual = provider.digest(serialize_share(share));
    if (!constant_time_equal(expected, actual))
        throw Error(Errc::share_mismatch, "share does not match escrow commitment");

    // Duplicate holder: keep the first submission, count once.
    rcase.submitted_shares.emplace(share.holder_index, share);

    if (static_cast<int>(rcase.submitted_shares.size()) >= escrow.threshold_k) {
        std::vector<Share> collected;
        collected.reserve(rcase.submitted_shares.size());
        for (const auto& [idx, s] : rcase.submitted_shares) collected.push_back(s);
        rcase.revealed_identity = reconstruct(collected, escrow.threshold_k);
        rcase.status = CaseStatus::revealed;
    }
}

bool SecrecyReport::all_consistent() const {
    return std::all_of(consistent_candidates.begin(), consistent_candidates.end(),
                       [](int c) { return c == 256; });
}

SecrecyReport secrecy_check(const std::vector<Share>& shares, int k) {
    SecrecyReport report;
    if (shares.empty()) {
        // k = 1, zero shares: any constant polynomial fits any candidate.
        report.consistent_candidates.assign(1, 256);
        return report;
    }

    std::size_t length = shares.front().values.size();
    report.consistent_candidates.assign(length, 0);

    for (std::size_t b = 0; b < length; ++b) {
        for (int candidate = 0; candidate < 256; ++candidate) {
            std::vector<std::pair<std::uint16_t, std::uint16_t>> points;
            points.emplace_back(0, static_cast<std::uint16_t>(candidate));
            for (const Share& s : shares)
                points.emplace_back(s.holder_index, s.values[b]);
            auto coeffs = gf257::interpolate(points);
            while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
            // Consistent iff some polynomial of degree < k passes through the
            // candidate at x = 0 and every known share point.
            if (coeffs.size() <= static_cast<std::size_t>(k))
                report.consistent_candidates[b]++;
        }
    }
    return report;
}

}  // namespace assemblynet
