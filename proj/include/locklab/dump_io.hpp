#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "locklab/mifare.hpp"

namespace locklab::dumpio {

// Proxmark-style block table: "[=] 0 | 3D 06 ... 16 |".
struct BlockTableRow {
    int index;
    mifare::Block data;
    bool operator==(const BlockTableRow&) const = default;
};

struct BlockTableDump {
    std::vector<BlockTableRow> rows;  // indices strictly increasing
    bool operator==(const BlockTableDump&) const = default;
};

// JSON-style dump: "blocks" map of decimal block index -> 32 uppercase hex.
// May be truncated to a partial block range.
struct JsonBlockDump {
    std::map<int, mifare::Block> blocks;
    bool operator==(const JsonBlockDump&) const = default;
};

// Proxmark-style key table: "[+] 000 | 003 | 681E9E9B3FE9 | N | ... | D".
struct KeyTableRow {
    int sector;
    int trailer_block;  // always 4*sector+3
    mifare::SectorKey key_a;
    bool key_a_default;
    mifare::SectorKey key_b;
    bool key_b_default;
    bool operator==(const KeyTableRow&) const = default;
};

struct KeyTableDump {
    std::vector<KeyTableRow> rows;
    bool operator==(const KeyTableDump&) const = default;
};

enum class Direction { Command, Notification };

// One sniff-log line: "2022.11.15 17:59:32.844 | < C | 7200 | 7201 | <hex> <ascii>".
// The ascii column is a rendering artifact: emitters regenerate it, parsers
// ignore it.
struct GattLogLine {
    int64_t t_ms = 0;  // epoch milliseconds
    Direction dir = Direction::Command;
    uint16_t handle_1 = 0x7200;
    uint16_t handle_2 = 0x7201;
    mifare::Block payload{};

    bool operator==(const GattLogLine&) const = default;
};

BlockTableDump parse_block_table(std::string_view text);  // throws MalformedRow
std::string emit_block_table(const BlockTableDump& dump);

JsonBlockDump parse_json_blocks(std::string_view text);  // throws MalformedHex
std::string emit_json_blocks(const JsonBlockDump& dump);
// Snapshot of a tag over an explicit block range [first, last].
JsonBlockDump dump_range(const std::array<mifare::Block, mifare::kBlockCount>& blocks,
                         int first, int last);

KeyTableDump parse_key_table(std::string_view text);  // throws MalformedRow
std::string emit_key_table(const KeyTableDump& dump);

std::vector<GattLogLine> parse_gatt_log(std::string_view text);  // throws MalformedLine
std::string emit_gatt_log(std::span<const GattLogLine> lines);

// Bytes 0x21..0x7E render as themselves, everything else as a space.
std::string render_ascii(const mifare::Block& payload);

// "YYYY.MM.DD HH:MM:SS.mmm" <-> epoch milliseconds.
int64_t parse_timestamp(std::string_view text);  // throws MalformedLine
std::string format_timestamp(int64_t epoch_ms);

KeyTableDump to_key_table_dump(const mifare::KeyTable& table);
mifare::KeyTable from_key_table_dump(const KeyTableDump& dump);

}  // namespace locklab::dumpio
