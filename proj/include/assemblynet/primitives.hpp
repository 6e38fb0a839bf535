#pragma once

#include <span>

#include "assemblynet/bytes.hpp"

namespace assemblynet {

/// Abstract 32-byte digest and authentication primitives. Protocol
/// modules never name a concrete hash; they take a provider so the
/// whole stack can be re-keyed onto a different primitive in one place.
class PrimitiveProvider {
public:
    virtual ~PrimitiveProvider() = default;

    virtual Digest32 digest(std::span<const std::uint8_t> data) const = 0;
    virtual Digest32 mac(std::span<const std::uint8_t> key,
                         std::span<const std::uint8_t> data) const = 0;
};

/// SHA-256 and HMAC-SHA256.
class Sha256Provider final : public PrimitiveProvider {
public:
    Digest32 digest(std::span<const std::uint8_t> data) const override;
    Digest32 mac(std::span<const std::uint8_t> key,
                 std::span<const std::uint8_t> data) const override;
};

const PrimitiveProvider& default_provider();

bool constant_time_equal(const Digest32& a, const Digest32& b);

}  // namespace assemblynet
