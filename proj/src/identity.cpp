#include "assemblynet/identity.hpp"

#include "assemblynet/errors.hpp"

namespace assemblynet {

namespace {

constexpr std::size_t kMaxIdentityBytes = 64;

Bytes tag_input(const Credential& cred) {
    // Every field except the tag itself; altering any of them (including
    // the issue time) must invalidate the credential.
    Bytes data;
    data.insert(data.end(), cred.pseudonym.begin(), cred.pseudonym.end());
    data.insert(data.end(), cred.assembly_id.begin(), cred.assembly_id.end());
    data.insert(data.end(), cred.escrow_commitment.begin(), cred.escrow_commitment.end());
    put_be64(data, cred.issue_time);
    return data;
}

void require_identity(const Identity& identity) {
    if (identity.id.empty())
        throw Error(Errc::empty_identity, "identity must be non-empty");
    if (identity.id.size() > kMaxIdentityBytes)
        throw Error(Errc::empty_identity, "identity exceeds 64 bytes");
}

}  // namespace

Digest32 pseudonym_of(const Identity& identity, const AssemblyId& assembly,
                      const IssuerState& state) {
    require_identity(identity);
    // secret (32) || identity (1..64) || assembly (16): fixed-size outer
    // fields make the concatenation unambiguous.
    Bytes data;
    data.insert(data.end(), state.secret().begin(), state.secret().end());
    data.insert(data.end(), identity.id.begin(), identity.id.end());
    data.insert(data.end(), assembly.begin(), assembly.end());
    return state.provider().digest(data);
}

Credential issue_credential(IssuerState& state, const Identity& identity,
                            const AssemblyId& assembly, Tick now,
                            const Digest32& escrow_commitment) {
    require_identity(identity);
    Digest32 identity_digest = state.provider().digest(identity.id);
    if (state.already_issued(identity_digest, assembly))
        throw Error(Errc::duplicate_issuance,
                    "credential already issued for this identity and assembly");

    Credential cred;
    cred.pseudonym = pseudonym_of(identity, assembly, state);
    cred.assembly_id = assembly;
    cred.escrow_commitment = escrow_commitment;
    cred.issue_time = now;
    cred.issuer_tag = state.provider().mac(state.secret(), tag_input(cred));

    state.record_issued(identity_digest, assembly);
    return cred;
}

bool verify_credential(const Credential& cred, const IssuerState& state) {
    Digest32 expected = state.provider().mac(state.secret(), tag_input(cred));
    return constant_time_equal(expected, cred.issuer_tag);
}

}  // namespace assemblynet
