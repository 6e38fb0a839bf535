#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "assemblynet/rational.hpp"

namespace assemblynet {

/// Line-oriented `key = value` text with optional `[section]` headers and
/// full-line `#` comments. Keys before any header live in section "".
struct ConfigEntry {
    std::string value;
    int line = 0;
};

struct ConfigFile {
    std::map<std::string, std::map<std::string, ConfigEntry>> sections;

    bool has_section(const std::string& section) const;
    bool has(const std::string& section, const std::string& key) const;

    /// Typed accessors throw ParseError naming the line (or the missing key).
    const std::string& get_string(const std::string& section, const std::string& key) const;
    std::string get_string_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;
    Ratio get_ratio(const std::string& section, const std::string& key) const;
    Ratio get_ratio_or(const std::string& section, const std::string& key,
                       Ratio fallback) const;
    bool get_bool(const std::string& section, const std::string& key) const;
    bool get_bool_or(const std::string& section, const std::string& key,
                     bool fallback) const;

    /// Rejects keys outside `allowed`, naming the first stray key's line.
    void require_known_keys(const std::string& section,
                            const std::vector<std::string>& allowed) const;

    /// Section names beginning with `prefix`, in lexical order.
    std::vector<std::string> sections_with_prefix(const std::string& prefix) const;
};

/// Throws ParseError with 1-based line and column on any malformed line,
/// duplicate key, or duplicate section header.
ConfigFile parse_config(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace assemblynet
