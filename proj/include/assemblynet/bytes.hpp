#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace assemblynet {

using Bytes = std::vector<std::uint8_t>;
using Digest32 = std::array<std::uint8_t, 32>;
using AssemblyId = std::array<std::uint8_t, 16>;
using Tick = std::uint64_t;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(std::span<const std::uint8_t> b) {
    return std::string(b.begin(), b.end());
}

/// Lowercase hex. Decoding is strict: even length, lowercase a-f only.
std::string to_hex(std::span<const std::uint8_t> data);
Bytes from_hex(std::string_view hex);  // throws Errc::parse_error
Digest32 digest_from_hex(std::string_view hex);

/// RFC 4648 base64 with padding. Decoding rejects whitespace, bad
/// padding, and non-canonical trailing bits, so distinct valid inputs
/// never decode to the same bytes.
std::string base64_encode(std::span<const std::uint8_t> data);
Bytes base64_decode(std::string_view text);

void put_be32(Bytes& out, std::uint32_t v);
void put_be64(Bytes& out, std::uint64_t v);
std::uint32_t get_be32(std::span<const std::uint8_t> in, std::size_t offset);
std::uint64_t get_be64(std::span<const std::uint8_t> in, std::size_t offset);

}  // namespace assemblynet
