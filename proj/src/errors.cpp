#include "assemblynet/errors.hpp"

namespace assemblynet {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::duplicate_issuance: return "DuplicateIssuance";
        case Errc::empty_identity: return "EmptyIdentity";
        case Errc::bad_threshold: return "BadThreshold";
        case Errc::empty_secret: return "EmptySecret";
        case Errc::insufficient_shares: return "InsufficientShares";
        case Errc::inconsistent_shares: return "InconsistentShares";
        case Errc::case_closed: return "CaseClosed";
        case Errc::share_mismatch: return "ShareMismatch";
        case Errc::malformed_manifest: return "MalformedManifest";
        case Errc::not_compliant: return "NotCompliant";
        case Errc::delivery_failed: return "DeliveryFailed";
        case Errc::window_closed: return "WindowClosed";
        case Errc::opinion_mismatch: return "OpinionMismatch";
        case Errc::invalid_scenario: return "InvalidScenario";
        case Errc::audit_mismatch: return "AuditMismatch";
        case Errc::parse_error: return "ParseError";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

}  // namespace assemblynet
