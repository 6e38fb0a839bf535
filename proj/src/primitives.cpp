#include "assemblynet/primitives.hpp"

#include <openssl/hmac.h>
#include <openssl/sha.h>

namespace assemblynet {

Digest32 Sha256Provider::digest(std::span<const std::uint8_t> data) const {
    Digest32 out{};
    SHA256(data.data(), data.size(), out.data());
    return out;
}

Digest32 Sha256Provider::mac(std::span<const std::uint8_t> key,
                             std::span<const std::uint8_t> data) const {
    Digest32 out{};
    unsigned int len = 0;
    HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
         data.size(), out.data(), &len);
    return out;
}

const PrimitiveProvider& default_provider() {
    static const Sha256Provider provider;
    return provider;
}

bool constant_time_equal(const Digest32& a, const Digest32& b) {
    unsigned int diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff |= a[i] ^ b[i];
    return diff == 0;
}

}  // namespace assemblynet
