#pragma once

#include <set>
#include <utility>

#include "assemblynet/bytes.hpp"
#include "assemblynet/primitives.hpp"

namespace assemblynet {

/// Opaque byte string naming a person. 1 to 64 bytes; byte equality is
/// identity equality.
struct Identity {
    Bytes id;

    static Identity from_string(std::string_view s) { return Identity{to_bytes(s)}; }
    bool operator==(const Identity&) const = default;
};

/// One participation token per (person, assembly). The pseudonym is a
/// keyed digest, so the same person always maps to the same pseudonym
/// within one assembly and to an unlinkable one in any other.
struct Credential {
    Digest32 pseudonym{};
    AssemblyId assembly_id{};
    Digest32 escrow_commitment{};
    Tick issue_time = 0;
    Digest32 issuer_tag{};

    bool operator==(const Credential&) const = default;
};

class IssuerState {
public:
    IssuerState(Digest32 issuer_secret, const PrimitiveProvider& provider)
        : secret_(issuer_secret), provider_(&provider) {}

    const Digest32& secret() const { return secret_; }
    const PrimitiveProvider& provider() const { return *provider_; }

    bool already_issued(const Digest32& identity_digest, const AssemblyId& assembly) const {
        return issued_.count({identity_digest, assembly}) != 0;
    }
    void record_issued(const Digest32& identity_digest, const AssemblyId& assembly) {
        issued_.insert({identity_digest, assembly});
    }
    std::size_t issued_count() const { return issued_.size(); }

private:
    Digest32 secret_;
    const PrimitiveProvider* provider_;
    std::set<std::pair<Digest32, AssemblyId>> issued_;
};

/// Throws Errc::empty_identity or Errc::duplicate_issuance. The caller
/// supplies the escrow commitment computed over the holder's revocation
/// shares (see revocation::commit_shares).
Credential issue_credential(IssuerState& state, const Identity& identity,
                            const AssemblyId& assembly, Tick now,
                            const Digest32& escrow_commitment);

/// True iff the issuer tag authenticates (pseudonym, assembly,
/// escrow_commitment) under the issuer secret. Never throws.
bool verify_credential(const Credential& cred, const IssuerState& state);

/// Deterministic pseudonym for (identity, assembly) under the issuer
/// secret. Throws Errc::empty_identity.
Digest32 pseudonym_of(const Identity& identity, const AssemblyId& assembly,
                      const IssuerState& state);

}  // namespace assemblynet
