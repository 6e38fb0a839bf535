#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace assemblynet {

enum class Errc {
    // identity
    duplicate_issuance,
    empty_identity,
    // revocation
    bad_threshold,
    empty_secret,
    insufficient_shares,
    inconsistent_shares,
    case_closed,
    share_mismatch,
    // assembly
    malformed_manifest,
    not_compliant,
    delivery_failed,
    window_closed,
    // visibility
    opinion_mismatch,
    // sim
    invalid_scenario,
    audit_mismatch,
    // generic
    parse_error,
    io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

/// Error from parsing a text format; carries 1-based position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : Error(Errc::parse_error,
                "line " + std::to_string(line) +
                    (column ? ", column " + std::to_string(column) : "") + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace assemblynet
