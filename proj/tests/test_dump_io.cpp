#include <doctest.h>

#include "locklab/dump_io.hpp"
#include "locklab/errors.hpp"
#include "locklab/hex.hpp"
#include "locklab/rng.hpp"

#include "corpus.hpp"

using namespace locklab;
using namespace locklab::dumpio;

namespace {

mifare::Block block_from_hex(std::string_view hex32) {
    auto bytes = from_hex(hex32);
    REQUIRE(bytes);
    REQUIRE(bytes->size() == 16);
    mifare::Block b{};
    std::copy(bytes->begin(), bytes->end(), b.begin());
    return b;
}

}  // namespace

TEST_CASE("block table: golden capture parses byte-exact and re-emits identically") {
    std::string text = read_corpus("ia210_tag.dump");
    auto dump = parse_block_table(text);
    REQUIRE(dump.rows.size() == 4);
    CHECK(dump.rows[0].index == 0);
    CHECK(dump.rows[0].data == block_from_hex("3D06CD45B3880400C842002000000016"));
    CHECK(dump.rows[3].data == block_from_hex("FFFFFFFFFFFFFF078069FFFFFFFFFFFF"));
    CHECK(emit_block_table(dump) == text);
}

TEST_CASE("block table: headers only, bad rows") {
    CHECK(parse_block_table("[=] -----+-----+\n[=] blk | data\n").rows.empty());
    CHECK(parse_block_table("").rows.empty());
    CHECK_THROWS_AS(parse_block_table("[=] 0 | 00 11 22 |"), MalformedRow);  // 3 bytes
    CHECK_THROWS_AS(
        parse_block_table("[=] 0 | 00 00 00 00 00 00 00 00 00 00 00 00 00 00 00 |"),
        MalformedRow);  // 15 bytes
    CHECK_THROWS_AS(
        parse_block_table("[=] 0 | ZZ 00 00 00 00 00 00 00 00 00 00 00 00 00 00 00 |"),
        MalformedRow);
    CHECK_THROWS_AS(parse_block_table("[=] 5 | 00 00 00 00 00 00 00 00 00 00 00 00 00 00 00 00 |\n"
                                      "[=] 2 | 00 00 00 00 00 00 00 00 00 00 00 00 00 00 00 00 |\n"),
                    MalformedRow);  // indices must increase
}

TEST_CASE("json blocks: both counter listings parse despite truncation") {
    auto before = parse_json_blocks(read_corpus("conexis_counter_before.json"));
    auto after = parse_json_blocks(read_corpus("conexis_counter_after.json"));
    REQUIRE(before.blocks.size() == 3);
    CHECK(before.blocks.at(0) == block_from_hex("95E43AA5EE08040002E9981FA7F5D11D"));
    CHECK(before.blocks.at(2) == block_from_hex("08080700000000000000000000000000"));
    CHECK(after.blocks.at(2) == block_from_hex("09090700000000000000000000000000"));
    CHECK(before.blocks.at(1) == after.blocks.at(1));
}

TEST_CASE("json blocks: malformed values") {
    CHECK_THROWS_AS(parse_json_blocks("\"blocks\": {\n\"0\": \"95E43AA5EE08040002E9981FA7F5D11\"\n"),
                    MalformedHex);  // 31 hex chars
    CHECK_THROWS_AS(parse_json_blocks("\"blocks\": {\n\"0\": \"XYZ\"\n"), MalformedHex);
    CHECK_THROWS_AS(parse_json_blocks("no map here"), MalformedHex);
}

TEST_CASE("key table: golden listing parses and re-emits identically") {
    std::string text = read_corpus("keyless_keytable.txt");
    auto dump = parse_key_table(text);
    REQUIRE(dump.rows.size() == 16);
    for (const auto& row : dump.rows) {
        CHECK(row.trailer_block == 4 * row.sector + 3);
        CHECK(row.key_a_default == (row.sector > 6));
        CHECK(row.key_b_default);
        CHECK(row.key_b == mifare::SectorKey::default_key());
    }
    CHECK(dump.rows[0].key_a == mifare::SectorKey::from_hex("681E9E9B3FE9"));
    CHECK(dump.rows[6].key_a == mifare::SectorKey::from_hex("5F5E9D3BD48B"));
    CHECK(emit_key_table(dump) == text);
}

TEST_CASE("key table: bad rows") {
    CHECK_THROWS_AS(parse_key_table("[+] 000 | 004 | 681E9E9B3FE9 | N | FFFFFFFFFFFF | D"),
                    MalformedRow);  // Blk != 4*Sec+3
    CHECK_THROWS_AS(parse_key_table("[+] 000 | 003 | 681E9E9B3FE9 | X | FFFFFFFFFFFF | D"),
                    MalformedRow);
    CHECK_THROWS_AS(parse_key_table("[+] 000 | 003 | 681E9E9B | N | FFFFFFFFFFFF | D"),
                    MalformedRow);
    CHECK(parse_key_table("").rows.empty());
}

TEST_CASE("gatt log: 16-line session trace") {
    auto lines = parse_gatt_log(read_corpus("ul3_replay_session.gatt"));
    REQUIRE(lines.size() == 16);
    int commands = 0;
    mifare::Block payload{};
    for (const auto& ev : lines) {
        CHECK(ev.handle_1 == 0x7200);
        CHECK(ev.handle_2 == 0x7201);
        if (ev.dir == Direction::Command) {
            if (commands == 0) payload = ev.payload;
            CHECK(ev.payload == payload);
            ++commands;
        }
    }
    CHECK(commands == 4);
    CHECK(payload == block_from_hex("08c71149fb1a7105298eaf175bf5166b"));
    CHECK(format_timestamp(lines[0].t_ms) == "2022.11.15 17:59:32.844");
}

TEST_CASE("gatt log: 2-line held-session trace spans 12m18s") {
    auto lines = parse_gatt_log(read_corpus("ul3_session_hold.gatt"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].dir == Direction::Command);
    CHECK(lines[1].dir == Direction::Command);
    CHECK(lines[1].t_ms - lines[0].t_ms == 737'999);  // 15:04:47.385 -> 15:17:05.384
    CHECK(lines[0].payload == lines[1].payload);
}

TEST_CASE("gatt log: malformed lines") {
    CHECK_THROWS_AS(parse_gatt_log("2022.11.15 17:59:32.844 | < C | 7200 | 7201 |"),
                    MalformedLine);  // missing payload
    CHECK_THROWS_AS(parse_gatt_log("2022.11.15 17:59:32.844 | < C | 7200 | 7201 | 08c7"),
                    MalformedLine);  // short payload
    CHECK_THROWS_AS(parse_gatt_log("2022.11.15 17:59:32.844 | ? | 7200 | 7201 | "
                                   "08c71149fb1a7105298eaf175bf5166b"),
                    MalformedLine);
    CHECK_THROWS_AS(parse_gatt_log("not a timestamp | < C | 7200 | 7201 | "
                                   "08c71149fb1a7105298eaf175bf5166b"),
                    MalformedLine);
}

TEST_CASE("ascii rendering rule") {
    mifare::Block b{};
    b[0] = 'A';
    b[1] = 0x20;  // space is below 0x21
    b[2] = 0x7E;
    b[3] = 0x7F;
    std::string ascii = render_ascii(b);
    CHECK(ascii.size() == 16);
    CHECK(ascii.substr(0, 4) == "A ~ ");
}

TEST_CASE("timestamps round-trip") {
    for (const char* ts : {"2022.11.15 17:59:32.844", "2022.11.19 15:17:05.384",
                           "2000.01.01 00:00:00.000", "2023.12.31 23:59:59.999"}) {
        CHECK(format_timestamp(parse_timestamp(ts)) == ts);
    }
    CHECK_THROWS_AS(parse_timestamp("2022.13.40 99:99:99.999"), MalformedLine);
}

TEST_CASE("property: parse after emit is identity for every format") {
    Rng rng(2024);
    for (int round = 0; round < 40; ++round) {
        BlockTableDump bt;
        int index = 0;
        for (int i = 0, n = static_cast<int>(rng.uniform(10)); i < n; ++i) {
            index += 1 + static_cast<int>(rng.uniform(5));
            bt.rows.push_back(BlockTableRow{index, rng.block16()});
        }
        CHECK(parse_block_table(emit_block_table(bt)) == bt);

        JsonBlockDump jd;
        for (int i = 0, n = static_cast<int>(rng.uniform(10)); i < n; ++i)
            jd.blocks[static_cast<int>(rng.uniform(64))] = rng.block16();
        CHECK(parse_json_blocks(emit_json_blocks(jd)) == jd);

        KeyTableDump kt;
        for (int s = 0; s < 16; ++s) {
            KeyTableRow row{s, 4 * s + 3, {}, false, {}, false};
            rng.fill(row.key_a.value);
            rng.fill(row.key_b.value);
            row.key_a_default = rng.uniform(2) == 0;
            row.key_b_default = rng.uniform(2) == 0;
            kt.rows.push_back(row);
        }
        CHECK(parse_key_table(emit_key_table(kt)) == kt);

        std::vector<GattLogLine> log;
        int64_t t = parse_timestamp("2022.11.15 17:59:32.844");
        for (int i = 0, n = static_cast<int>(rng.uniform(8)); i < n; ++i) {
            t += static_cast<int64_t>(rng.uniform(100'000));
            log.push_back(GattLogLine{t, rng.uniform(2) ? Direction::Command : Direction::Notification,
                                      0x7200, 0x7201, rng.block16()});
        }
        auto reparsed = parse_gatt_log(emit_gatt_log(log));
        CHECK(reparsed == log);
    }
}

TEST_CASE("parsers reject arbitrary garbage with structured errors only") {
    Rng rng(5);
    for (int round = 0; round < 200; ++round) {
        std::string junk;
        for (int i = 0, n = static_cast<int>(rng.uniform(120)); i < n; ++i)
            junk.push_back(static_cast<char>(rng.uniform(96) + 32));
        for (int fmt = 0; fmt < 4; ++fmt) {
            try {
                switch (fmt) {
                    case 0: parse_block_table(junk); break;
                    case 1: parse_json_blocks(junk); break;
                    case 2: parse_key_table(junk); break;
                    case 3: parse_gatt_log(junk); break;
                }
            } catch (const Error&) {
                // structured parse error: acceptable
            }
        }
    }
    CHECK(true);
}
