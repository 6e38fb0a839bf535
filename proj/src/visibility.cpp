#include "assemblynet/visibility.hpp"

#include <algorithm>
#include <charconv>

#include "assemblynet/errors.hpp"

namespace assemblynet {

Bytes canonical_message_bytes(const ProtestMessage& message) {
    if (message.body.size() > kMaxBodyBytes)
        throw Error(Errc::parse_error, "message body exceeds 16 KiB");
    Bytes out;
    out.reserve(100 + message.body.size());
    out.insert(out.end(), message.pseudonym.begin(), message.pseudonym.end());
    out.insert(out.end(), message.assembly_id.begin(), message.assembly_id.end());
    put_be64(out, message.sequence_no);
    put_be64(out, message.timestamp);
    out.insert(out.end(), message.opinion_digest.begin(), message.opinion_digest.end());
    put_be32(out, static_cast<std::uint32_t>(message.body.size()));
    out.insert(out.end(), message.body.begin(), message.body.end());
    return out;
}

ProtestMessage message_from_canonical(std::span<const std::uint8_t> data) {
    constexpr std::size_t kHeader = 32 + 16 + 8 + 8 + 32 + 4;
    if (data.size() < kHeader)
        throw Error(Errc::parse_error, "canonical message too short");
    ProtestMessage m;
    std::copy_n(data.begin(), 32, m.pseudonym.begin());
    std::copy_n(data.begin() + 32, 16, m.assembly_id.begin());
    m.sequence_no = get_be64(data, 48);
    m.timestamp = get_be64(data, 56);
    std::copy_n(data.begin() + 64, 32, m.opinion_digest.begin());
    std::uint32_t body_len = get_be32(data, 96);
    if (data.size() != kHeader + body_len)
        throw Error(Errc::parse_error, "canonical message length mismatch");
    if (body_len > kMaxBodyBytes)
        throw Error(Errc::parse_error, "message body exceeds 16 KiB");
    m.body.assign(data.begin() + kHeader, data.end());
    return m;
}

Board::Board(AssemblyId assembly_id, Digest32 expected_opinion,
             const PrimitiveProvider& provider)
    : assembly_id_(assembly_id),
      expected_opinion_(expected_opinion),
      provider_(provider) {}

const BoardEntry& Board::append(const ProtestMessage& message) {
    if (message.assembly_id != assembly_id_)
        throw Error(Errc::opinion_mismatch, "message targets another assembly");
    if (!constant_time_equal(message.opinion_digest, expected_opinion_))
        throw Error(Errc::opinion_mismatch, "message does not carry the assembly opinion");

    auto key = std::make_pair(message.pseudonym, message.sequence_no);
    if (auto it = by_key_.find(key); it != by_key_.end()) return entries_[it->second];

    BoardEntry entry;
    entry.index = entries_.size();
    entry.prev_digest = head_digest();
    entry.message = message;
    Bytes preimage(entry.prev_digest.begin(), entry.prev_digest.end());
    Bytes canonical = canonical_message_bytes(message);
    preimage.insert(preimage.end(), canonical.begin(), canonical.end());
    entry.entry_digest = provider_.digest(preimage);

    by_key_.emplace(key, entries_.size());
    entries_.push_back(std::move(entry));
    return entries_.back();
}

bool Board::contains(const Digest32& pseudonym, std::uint64_t sequence_no) const {
    return by_key_.contains(std::make_pair(pseudonym, sequence_no));
}

Digest32 Board::head_digest() const {
    return entries_.empty() ? Digest32{} : entries_.back().entry_digest;
}

bool verify_chain(const std::vector<BoardEntry>& entries,
                  const PrimitiveProvider& provider) {
    Digest32 prev{};
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const BoardEntry& entry = entries[i];
        if (entry.index != i) return false;
        if (entry.prev_digest != prev) return false;
        Bytes preimage(entry.prev_digest.begin(), entry.prev_digest.end());
        Bytes canonical;
        try {
            canonical = canonical_message_bytes(entry.message);
        } catch (const Error&) {
            return false;
        }
        preimage.insert(preimage.end(), canonical.begin(), canonical.end());
        if (provider.digest(preimage) != entry.entry_digest) return false;
        prev = entry.entry_digest;
    }
    return true;
}

Ratio visibility_fraction(const std::vector<ProtestMessage>& delivered,
                          const Board& board) {
    if (delivered.empty()) return Ratio(1);
    std::int64_t mirrored = 0;
    for (const ProtestMessage& m : delivered)
        if (board.contains(m.pseudonym, m.sequence_no)) ++mirrored;
    return Ratio(mirrored, static_cast<std::int64_t>(delivered.size()));
}

std::string export_board(const std::vector<BoardEntry>& entries) {
    std::string out;
    for (const BoardEntry& entry : entries) {
        out += std::to_string(entry.index);
        out += ',';
        out += to_hex(entry.prev_digest);
        out += ',';
        out += to_hex(entry.entry_digest);
        out += ',';
        out += base64_encode(canonical_message_bytes(entry.message));
        out += '\n';
    }
    return out;
}

namespace {

std::uint64_t parse_canonical_index(std::string_view field, std::size_t line_no) {
    if (field.empty())
        throw ParseError("empty index field", line_no, 1);
    if (field.size() > 1 && field.front() == '0')
        throw ParseError("index has a leading zero", line_no, 1);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("index is not a decimal integer", line_no, 1);
    return value;
}

}  // namespace

std::vector<BoardEntry> import_board(std::string_view text) {
    std::vector<BoardEntry> entries;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            throw ParseError("missing trailing newline", line_no + 1, 1);
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        std::size_t c1 = line.find(',');
        std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        std::size_t c3 = c2 == std::string_view::npos ? c2 : line.find(',', c2 + 1);
        if (c3 == std::string_view::npos)
            throw ParseError("expected 4 comma-separated fields", line_no, 1);

        BoardEntry entry;
        entry.index = parse_canonical_index(line.substr(0, c1), line_no);
        try {
            entry.prev_digest = digest_from_hex(line.substr(c1 + 1, c2 - c1 - 1));
            entry.entry_digest = digest_from_hex(line.substr(c2 + 1, c3 - c2 - 1));
            Bytes canonical = base64_decode(line.substr(c3 + 1));
            entry.message = message_from_canonical(canonical);
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no, 1);
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

bool verify_board_export(std::string_view text, const PrimitiveProvider& provider) {
    try {
        return verify_chain(import_board(text), provider);
    } catch (const Error&) {
        return false;
    }
}

}  // namespace assemblynet
