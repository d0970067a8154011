#include "locklab/dump_io.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "locklab/errors.hpp"
#include "locklab/hex.hpp"

namespace locklab::dumpio {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

// Strips a leading "[=]" / "[+]" style prefix and surrounding whitespace.
std::string_view strip_prefix(std::string_view line) {
    line = trim(line);
    if (line.size() >= 3 && line[0] == '[' && line[2] == ']')
        line = trim(line.substr(3));
    return line;
}

bool is_separator_or_header(std::string_view body) {
    if (body.empty()) return true;
    if (body.find("-----") != std::string_view::npos) return true;
    if (body.starts_with("blk")) return true;
    if (body.starts_with("Sec")) return true;
    return false;
}

std::vector<std::string_view> split_fields(std::string_view body) {
    std::vector<std::string_view> fields;
    size_t pos = 0;
    while (true) {
        size_t bar = body.find('|', pos);
        if (bar == std::string_view::npos) {
            auto f = trim(body.substr(pos));
            if (!f.empty()) fields.push_back(f);
            break;
        }
        fields.push_back(trim(body.substr(pos, bar - pos)));
        pos = bar + 1;
    }
    // A trailing "|" leaves an empty last field; drop it.
    while (!fields.empty() && fields.back().empty()) fields.pop_back();
    return fields;
}

std::optional<int> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

BlockTableDump parse_block_table(std::string_view text) {
    BlockTableDump dump;
    int last_index = -1;
    for (auto raw : split_lines(text)) {
        auto body = strip_prefix(raw);
        if (is_separator_or_header(body)) continue;
        auto fields = split_fields(body);
        if (fields.size() != 2) throw MalformedRow(std::string(raw));
        auto index = parse_int(fields[0]);
        if (!index) throw MalformedRow(std::string(raw));

        // Data field: 16 space-separated hex byte pairs.
        std::vector<uint8_t> bytes;
        std::istringstream iss{std::string(fields[1])};
        std::string tok;
        while (iss >> tok) {
            auto b = from_hex(tok);
            if (!b || b->size() != 1) throw MalformedRow(std::string(raw));
            bytes.push_back((*b)[0]);
        }
        if (bytes.size() != 16) throw MalformedRow(std::string(raw));
        if (*index <= last_index) throw MalformedRow("block indices not increasing");
        last_index = *index;

        BlockTableRow row{*index, {}};
        std::copy(bytes.begin(), bytes.end(), row.data.begin());
        dump.rows.push_back(row);
    }
    return dump;
}

std::string emit_block_table(const BlockTableDump& dump) {
    static const char* kSep = "[=] -----+-----+-----+-----+-----+-----+-----+-----+-----+-----+\n";
    std::string out;
    out += kSep;
    out += "[=] blk | data\n";
    out += kSep;
    for (const auto& row : dump.rows) {
        out += "[=] " + std::to_string(row.index) + " |";
        for (uint8_t b : row.data)
            out += " " + to_hex(std::span(&b, 1));
        out += " |\n";
    }
    return out;
}

JsonBlockDump parse_json_blocks(std::string_view text) {
    if (text.find("\"blocks\"") == std::string_view::npos)
        throw MalformedHex("no \"blocks\" map found");
    JsonBlockDump dump;
    // Tolerant scan: the logs this format comes from are often truncated
    // mid-object, so a strict JSON parser rejects them. Pick up every
    // "digits": "value" pair instead.
    size_t pos = 0;
    while (true) {
        size_t q1 = text.find('"', pos);
        if (q1 == std::string_view::npos) break;
        size_t q2 = text.find('"', q1 + 1);
        if (q2 == std::string_view::npos) break;
        std::string_view key = text.substr(q1 + 1, q2 - q1 - 1);
        pos = q2 + 1;
        auto index = parse_int(key);
        if (!index) continue;  // non-numeric keys ("blocks" itself) are structure
        size_t colon = text.find_first_not_of(" \t", q2 + 1);
        if (colon == std::string_view::npos) break;
        if (text[colon] != ':') continue;
        size_t vq = text.find_first_not_of(" \t", colon + 1);
        if (vq == std::string_view::npos) break;
        if (text[vq] != '"') continue;
        size_t vend = text.find('"', vq + 1);
        if (vend == std::string_view::npos) break;
        std::string_view val = text.substr(vq + 1, vend - vq - 1);
        pos = vend + 1;

        auto bytes = from_hex(val);
        if (!bytes || bytes->size() != 16)
            throw MalformedHex(std::string(val));
        mifare::Block block{};
        std::copy(bytes->begin(), bytes->end(), block.begin());
        dump.blocks[*index] = block;
    }
    return dump;
}

std::string emit_json_blocks(const JsonBlockDump& dump) {
    std::string out = "{\n  \"blocks\": {\n";
    size_t i = 0;
    for (const auto& [index, block] : dump.blocks) {
        out += "    \"" + std::to_string(index) + "\": \"" + to_hex(block) + "\"";
        if (++i != dump.blocks.size()) out += ",";
        out += "\n";
    }
    out += "  }\n}\n";
    return out;
}

JsonBlockDump dump_range(const std::array<mifare::Block, mifare::kBlockCount>& blocks,
                         int first, int last) {
    JsonBlockDump dump;
    for (int i = first; i <= last; ++i)
        dump.blocks[i] = blocks[static_cast<size_t>(i)];
    return dump;
}

KeyTableDump parse_key_table(std::string_view text) {
    KeyTableDump dump;
    int last_sector = -1;
    for (auto raw : split_lines(text)) {
        auto body = strip_prefix(raw);
        if (is_separator_or_header(body)) continue;
        auto fields = split_fields(body);
        if (fields.size() != 6) throw MalformedRow(std::string(raw));
        auto sector = parse_int(fields[0]);
        auto blk = parse_int(fields[1]);
        if (!sector || !blk || *sector > 15) throw MalformedRow(std::string(raw));
        if (*blk != 4 * *sector + 3) throw MalformedRow("Blk != 4*Sec+3");
        if (*sector <= last_sector) throw MalformedRow("sectors not increasing");
        last_sector = *sector;

        auto parse_res = [&](std::string_view f) {
            if (f == "N") return false;
            if (f == "D") return true;
            throw MalformedRow("res flag must be N or D");
        };
        auto parse_key = [&](std::string_view f) {
            auto bytes = from_hex(f);
            if (!bytes || bytes->size() != 6) throw MalformedRow(std::string(f));
            mifare::SectorKey k;
            std::copy(bytes->begin(), bytes->end(), k.value.begin());
            return k;
        };
        dump.rows.push_back(KeyTableRow{*sector, *blk, parse_key(fields[2]),
                                        parse_res(fields[3]), parse_key(fields[4]),
                                        parse_res(fields[5])});
    }
    return dump;
}

std::string emit_key_table(const KeyTableDump& dump) {
    static const char* kSep = "[+] -----+-----+-----+-----+-----+-----+-----+-----+-----+-----+\n";
    auto pad3 = [](int v) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "%03d", v);
        return std::string(buf);
    };
    std::string out;
    out += kSep;
    out += "[+] Sec | Blk | key A | res | key B | res\n";
    out += kSep;
    for (const auto& row : dump.rows) {
        out += "[+] " + pad3(row.sector) + " | " + pad3(row.trailer_block) + " | " +
               row.key_a.hex() + " | " + (row.key_a_default ? "D" : "N") + " | " +
               row.key_b.hex() + " | " + (row.key_b_default ? "D" : "N") + "\n";
    }
    out += kSep;
    return out;
}

std::vector<GattLogLine> parse_gatt_log(std::string_view text) {
    std::vector<GattLogLine> lines;
    for (auto raw : split_lines(text)) {
        auto line = trim(raw);
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() < 5) throw MalformedLine(std::string(raw));

        GattLogLine ev;
        ev.t_ms = parse_timestamp(fields[0]);

        std::string dir;
        for (char c : fields[1])
            if (!std::isspace(static_cast<unsigned char>(c))) dir.push_back(c);
        if (dir == "<C") ev.dir = Direction::Command;
        else if (dir == ">N") ev.dir = Direction::Notification;
        else throw MalformedLine(std::string(raw));

        auto parse_handle = [&](std::string_view f) -> uint16_t {
            auto bytes = from_hex(f);
            if (!bytes || bytes->size() != 2) throw MalformedLine(std::string(f));
            return static_cast<uint16_t>(((*bytes)[0] << 8) | (*bytes)[1]);
        };
        ev.handle_1 = parse_handle(fields[2]);
        ev.handle_2 = parse_handle(fields[3]);

        // Payload field starts with 32 hex chars; the ascii rendering after
        // them is ignored.
        std::string_view pf = fields[4];
        if (pf.size() < 32) throw MalformedLine(std::string(raw));
        auto bytes = from_hex(pf.substr(0, 32));
        if (!bytes) throw MalformedLine(std::string(raw));
        std::copy(bytes->begin(), bytes->end(), ev.payload.begin());
        lines.push_back(ev);
    }
    return lines;
}

std::string render_ascii(const mifare::Block& payload) {
    std::string out;
    for (uint8_t b : payload)
        out.push_back(b >= 0x21 && b <= 0x7E ? static_cast<char>(b) : ' ');
    return out;
}

std::string emit_gatt_log(std::span<const GattLogLine> lines) {
    std::string out;
    for (const auto& ev : lines) {
        char handle[16];
        std::snprintf(handle, sizeof handle, "%04x | %04x", ev.handle_1, ev.handle_2);
        std::string ascii = render_ascii(ev.payload);
        while (!ascii.empty() && ascii.back() == ' ') ascii.pop_back();
        out += format_timestamp(ev.t_ms) + " | " +
               (ev.dir == Direction::Command ? "< C" : "> N") + " | " + handle + " | " +
               to_hex(ev.payload, /*upper=*/false);
        if (!ascii.empty()) out += " " + ascii;
        out += "\n";
    }
    return out;
}

int64_t parse_timestamp(std::string_view text) {
    int y, mo, d, h, mi, s, ms;
    std::string str(trim(text));
    if (std::sscanf(str.c_str(), "%4d.%2d.%2d %2d:%2d:%2d.%3d", &y, &mo, &d, &h, &mi, &s, &ms) != 7)
        throw MalformedLine("bad timestamp: " + str);
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw MalformedLine("bad date: " + str);
    sys_days days{ymd};
    int64_t epoch_ms = static_cast<int64_t>(days.time_since_epoch().count()) * 86'400'000;
    return epoch_ms + h * 3'600'000LL + mi * 60'000LL + s * 1'000LL + ms;
}

std::string format_timestamp(int64_t epoch_ms) {
    using namespace std::chrono;
    int64_t days_count = epoch_ms / 86'400'000;
    int64_t rem = epoch_ms % 86'400'000;
    if (rem < 0) {
        rem += 86'400'000;
        days_count -= 1;
    }
    year_month_day ymd{sys_days{days{days_count}}};
    int h = static_cast<int>(rem / 3'600'000);
    int mi = static_cast<int>(rem / 60'000 % 60);
    int s = static_cast<int>(rem / 1'000 % 60);
    int ms = static_cast<int>(rem % 1'000);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d.%02u.%02u %02d:%02d:%02d.%03d",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()), h, mi, s, ms);
    return buf;
}

KeyTableDump to_key_table_dump(const mifare::KeyTable& table) {
    KeyTableDump dump;
    for (int s = 0; s < mifare::kSectorCount; ++s) {
        const auto& e = table.sectors[s];
        dump.rows.push_back(KeyTableRow{s, 4 * s + 3, e.key_a, e.key_a_default,
                                        e.key_b, e.key_b_default});
    }
    return dump;
}

mifare::KeyTable from_key_table_dump(const KeyTableDump& dump) {
    mifare::KeyTable table;
    for (const auto& row : dump.rows) {
        auto& e = table.sectors[static_cast<size_t>(row.sector)];
        e.key_a = row.key_a;
        e.key_a_default = row.key_a_default;
        e.key_b = row.key_b;
        e.key_b_default = row.key_b_default;
    }
    return table;
}

}  // namespace locklab::dumpio
