#include "assemblynet/bytes.hpp"

#include "assemblynet/errors.hpp"

namespace assemblynet {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

constexpr char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_index(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw Error(Errc::parse_error, "hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw Error(Errc::parse_error, "invalid hex digit");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Digest32 digest_from_hex(std::string_view hex) {
    Bytes b = from_hex(hex);
    if (b.size() != 32)
        throw Error(Errc::parse_error, "expected 32-byte digest");
    Digest32 d{};
    std::copy(b.begin(), b.end(), d.begin());
    return d;
}

std::string base64_encode(std::span<const std::uint8_t> data) {
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= data.size(); i += 3) {
        std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
    }
    std::size_t rem = data.size() - i;
    if (rem == 1) {
        std::uint32_t v = data[i] << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (rem == 2) {
        std::uint32_t v = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

Bytes base64_decode(std::string_view text) {
    if (text.size() % 4 != 0)
        throw Error(Errc::parse_error, "base64 length not a multiple of 4");
    Bytes out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        bool last = (i + 4 == text.size());
        int pad = 0;
        if (last) {
            if (text[i + 3] == '=') pad = text[i + 2] == '=' ? 2 : 1;
        }
        int idx[4] = {0, 0, 0, 0};
        for (int j = 0; j < 4 - pad; ++j) {
            idx[j] = b64_index(text[i + j]);
            if (idx[j] < 0)
                throw Error(Errc::parse_error, "invalid base64 character");
        }
        if (!last && (text[i + 2] == '=' || text[i + 3] == '='))
            throw Error(Errc::parse_error, "padding inside base64 body");
        if (pad == 2 && text[i + 2] != '=')
            throw Error(Errc::parse_error, "malformed base64 padding");
        std::uint32_t v = (idx[0] << 18) | (idx[1] << 12) | (idx[2] << 6) | idx[3];
        // Reject encodings whose discarded trailing bits are nonzero;
        // otherwise distinct strings decode to identical bytes.
        if (pad == 2 && (idx[1] & 0x0f) != 0)
            throw Error(Errc::parse_error, "non-canonical base64 tail");
        if (pad == 1 && (idx[2] & 0x03) != 0)
            throw Error(Errc::parse_error, "non-canonical base64 tail");
        out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xff));
    }
    return out;
}

void put_be32(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_be64(Bytes& out, std::uint64_t v) {
    put_be32(out, static_cast<std::uint32_t>(v >> 32));
    put_be32(out, static_cast<std::uint32_t>(v & 0xffffffffu));
}

std::uint32_t get_be32(std::span<const std::uint8_t> in, std::size_t offset) {
    if (offset + 4 > in.size())
        throw Error(Errc::parse_error, "truncated big-endian field");
    return (static_cast<std::uint32_t>(in[offset]) << 24) |
           (static_cast<std::uint32_t>(in[offset + 1]) << 16) |
           (static_cast<std::uint32_t>(in[offset + 2]) << 8) |
           static_cast<std::uint32_t>(in[offset + 3]);
}

std::uint64_t get_be64(std::span<const std::uint8_t> in, std::size_t offset) {
    return (static_cast<std::uint64_t>(get_be32(in, offset)) << 32) |
           get_be32(in, offset + 4);
}

}  // namespace assemblynet
