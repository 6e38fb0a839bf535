#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "assemblynet/bytes.hpp"
#include "assemblynet/primitives.hpp"
#include "assemblynet/rational.hpp"

namespace assemblynet {

constexpr std::size_t kMaxBodyBytes = 16 * 1024;

struct ProtestMessage {
    Digest32 pseudonym{};
    AssemblyId assembly_id{};
    std::uint64_t sequence_no = 0;
    Digest32 opinion_digest{};
    std::string body;  // UTF-8, <= 16 KiB
    Tick timestamp = 0;

    bool operator==(const ProtestMessage&) const = default;
};

/// Fixed-width fields then a length-prefixed body; two distinct messages
/// never share canonical bytes.
Bytes canonical_message_bytes(const ProtestMessage& message);
ProtestMessage message_from_canonical(std::span<const std::uint8_t> data);

struct BoardEntry {
    std::uint64_t index = 0;
    Digest32 prev_digest{};   // 32 zero bytes at index 0
    Digest32 entry_digest{};  // digest(prev_digest || canonical message)
    ProtestMessage message;
};

/// Append-only hash chain with a single sequencer. Re-appending a
/// (pseudonym, sequence_no) already present returns the existing entry.
class Board {
public:
    Board(AssemblyId assembly_id, Digest32 expected_opinion,
          const PrimitiveProvider& provider);

    /// Throws Errc::opinion_mismatch when the message does not carry the
    /// assembly's opinion digest or targets another assembly.
    const BoardEntry& append(const ProtestMessage& message);

    bool contains(const Digest32& pseudonym, std::uint64_t sequence_no) const;
    std::size_t size() const { return entries_.size(); }
    const BoardEntry& entry(std::size_t index) const { return entries_.at(index); }
    const std::vector<BoardEntry>& entries() const { return entries_; }
    Digest32 head_digest() const;

private:
    AssemblyId assembly_id_;
    Digest32 expected_opinion_;
    const PrimitiveProvider& provider_;
    std::vector<BoardEntry> entries_;
    std::map<std::pair<Digest32, std::uint64_t>, std::size_t> by_key_;
};

/// True iff indices are dense from 0, every prev links to the previous
/// entry (zeros at genesis), and every entry digest recomputes.
bool verify_chain(const std::vector<BoardEntry>& entries,
                  const PrimitiveProvider& provider);

/// Mirrored share of delivered messages; 1 when nothing was delivered.
Ratio visibility_fraction(const std::vector<ProtestMessage>& delivered,
                          const Board& board);

/// One record per line: `index,hex(prev),hex(entry),base64(canonical)`.
std::string export_board(const std::vector<BoardEntry>& entries);

/// Strict inverse of export_board; throws ParseError on any deviation,
/// including non-canonical integers, hex case, or base64 padding.
std::vector<BoardEntry> import_board(std::string_view text);

/// Full check of an exported board: parse then verify the chain. Any
/// parse failure counts as corruption.
bool verify_board_export(std::string_view text, const PrimitiveProvider& provider);

}  // namespace assemblynet
