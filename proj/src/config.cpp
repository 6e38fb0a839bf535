#include "assemblynet/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "assemblynet/errors.hpp"

namespace assemblynet {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool valid_key_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

bool valid_section_char(char c) {
    return valid_key_char(c) || c == '.';
}

const ConfigEntry* find_entry(const ConfigFile& file, const std::string& section,
                              const std::string& key) {
    auto sit = file.sections.find(section);
    if (sit == file.sections.end()) return nullptr;
    auto kit = sit->second.find(key);
    return kit == sit->second.end() ? nullptr : &kit->second;
}

std::string where(const std::string& section, const std::string& key) {
    return section.empty() ? key : "[" + section + "] " + key;
}

}  // namespace

bool ConfigFile::has_section(const std::string& section) const {
    return sections.contains(section);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return find_entry(*this, section, key) != nullptr;
}

const std::string& ConfigFile::get_string(const std::string& section,
                                          const std::string& key) const {
    const ConfigEntry* e = find_entry(*this, section, key);
    if (!e) throw ParseError("missing key " + where(section, key), 0, 0);
    return e->value;
}

std::string ConfigFile::get_string_or(const std::string& section, const std::string& key,
                                      const std::string& fallback) const {
    const ConfigEntry* e = find_entry(*this, section, key);
    return e ? e->value : fallback;
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const ConfigEntry* e = find_entry(*this, section, key);
    if (!e) throw ParseError("missing key " + where(section, key), 0, 0);
    std::int64_t out = 0;
    const char* first = e->value.data();
    const char* last = first + e->value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        throw ParseError(where(section, key) + " is not an integer", e->line, 1);
    return out;
}

std::int64_t ConfigFile::get_int_or(const std::string& section, const std::string& key,
                                    std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

Ratio ConfigFile::get_ratio(const std::string& section, const std::string& key) const {
    const ConfigEntry* e = find_entry(*this, section, key);
    if (!e) throw ParseError("missing key " + where(section, key), 0, 0);
    try {
        return parse_ratio(e->value);
    } catch (const Error&) {
        throw ParseError(where(section, key) + " is not a number or fraction", e->line, 1);
    }
}

Ratio ConfigFile::get_ratio_or(const std::string& section, const std::string& key,
                               Ratio fallback) const {
    return has(section, key) ? get_ratio(section, key) : fallback;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key) const {
    const ConfigEntry* e = find_entry(*this, section, key);
    if (!e) throw ParseError("missing key " + where(section, key), 0, 0);
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    throw ParseError(where(section, key) + " must be true or false", e->line, 1);
}

bool ConfigFile::get_bool_or(const std::string& section, const std::string& key,
                             bool fallback) const {
    return has(section, key) ? get_bool(section, key) : fallback;
}

void ConfigFile::require_known_keys(const std::string& section,
                                    const std::vector<std::string>& allowed) const {
    auto sit = sections.find(section);
    if (sit == sections.end()) return;
    for (const auto& [key, entry] : sit->second) {
        bool known = false;
        for (const std::string& a : allowed) known = known || a == key;
        if (!known)
            throw ParseError("unknown key " + where(section, key), entry.line, 1);
    }
}

std::vector<std::string> ConfigFile::sections_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [name, entries] : sections)
        if (name.starts_with(prefix)) out.push_back(name);
    return out;
}

ConfigFile parse_config(std::string_view text) {
    ConfigFile file;
    std::string current;  // section name, "" before the first header
    file.sections[current];

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos
                                                    ? text.size() - pos
                                                    : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("section header missing ']'", line_no, static_cast<int>(line.size()));
            std::string_view name = line.substr(1, line.size() - 2);
            if (name.empty())
                throw ParseError("empty section name", line_no, 2);
            for (std::size_t i = 0; i < name.size(); ++i)
                if (!valid_section_char(name[i]))
                    throw ParseError("invalid character in section name", line_no, static_cast<int>(i + 2));
            current = std::string(name);
            if (!file.sections.emplace(current, std::map<std::string, ConfigEntry>{}).second)
                throw ParseError("duplicate section [" + current + "]", line_no, 1);
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", line_no, 1);
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ParseError("empty key", line_no, 1);
        for (std::size_t i = 0; i < key.size(); ++i)
            if (!valid_key_char(key[i]))
                throw ParseError("invalid character in key", line_no, static_cast<int>(i + 1));
        if (value.empty())
            throw ParseError("empty value", line_no, static_cast<int>(eq + 2));
        auto [it, inserted] = file.sections[current].emplace(
            key, ConfigEntry{value, line_no});
        if (!inserted)
            throw ParseError("duplicate key " + where(current, key) + " (first at line " +
                                 std::to_string(it->second.line) + ")",
                             line_no, 1);
    }
    return file;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot open " + path + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::io_error, "write failed for " + path);
}

}  // namespace assemblynet
