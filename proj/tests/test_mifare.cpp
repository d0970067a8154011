#include <doctest.h>

#include "locklab/errors.hpp"
#include "locklab/hex.hpp"
#include "locklab/keyless.hpp"
#include "locklab/mifare.hpp"

using namespace locklab;
using namespace locklab::mifare;

namespace {

Block block_from_hex(std::string_view hex32) {
    auto bytes = from_hex(hex32);
    REQUIRE(bytes);
    REQUIRE(bytes->size() == 16);
    Block b{};
    std::copy(bytes->begin(), bytes->end(), b.begin());
    return b;
}

MifareTag fresh_tag(uint64_t seed = 1) {
    Rng rng(seed);
    return MifareTag::factory(rng);
}

}  // namespace

TEST_CASE("factory tag starts in transport configuration") {
    MifareTag tag = fresh_tag();
    CHECK(tag.raw_block(3) == block_from_hex("FFFFFFFFFFFFFF078069FFFFFFFFFFFF"));
    CHECK(tag.raw_block(1) == Block{});
    CHECK(tag.raw_block(63) == block_from_hex("FFFFFFFFFFFFFF078069FFFFFFFFFFFF"));
    CHECK_FALSE(tag.magic());
}

TEST_CASE("factory UIDs differ across seeds and carry a valid check byte") {
    MifareTag a = fresh_tag(1);
    MifareTag b = fresh_tag(2);
    CHECK(a.raw_block(0) != b.raw_block(0));
    for (const MifareTag* t : {&a, &b}) {
        const Block& b0 = t->raw_block(0);
        CHECK(b0[4] == (b0[0] ^ b0[1] ^ b0[2] ^ b0[3]));
    }
}

TEST_CASE("factory is deterministic per seed") {
    CHECK(fresh_tag(42).snapshot() == fresh_tag(42).snapshot());
}

TEST_CASE("authenticate checks the stored trailer key per slot") {
    MifareTag tag = fresh_tag();
    CHECK(tag.authenticate(0, SectorKey::default_key(), KeySlot::A));
    CHECK(tag.authenticate(0, SectorKey::default_key(), KeySlot::B));

    tag.provision_keys(keyless::fixture_key_table());
    CHECK(tag.authenticate(0, SectorKey::from_hex("681E9E9B3FE9"), KeySlot::A));
    CHECK_FALSE(tag.authenticate(0, SectorKey::default_key(), KeySlot::A));
    CHECK(tag.authenticate(0, SectorKey::default_key(), KeySlot::B));

    // success iff the key equals the stored key, over a small key set
    const SectorKey keys[] = {SectorKey::default_key(),
                              SectorKey::from_hex("ADAE73113441"),
                              SectorKey::from_hex("000000000000")};
    for (int s = 0; s < kSectorCount; ++s) {
        for (auto slot : {KeySlot::A, KeySlot::B}) {
            for (const auto& k : keys) {
                bool expect = k == tag.trailer_key(s, slot);
                CHECK(tag.authenticate(s, k, slot).has_value() == expect);
            }
        }
    }
}

TEST_CASE("read_block enforces the sector scope of the handle") {
    MifareTag tag = fresh_tag();
    auto h0 = *tag.authenticate(0, SectorKey::default_key(), KeySlot::A);
    CHECK(tag.read_block(h0, 1) == Block{});
    CHECK_THROWS_AS(tag.read_block(h0, 7), OutOfSector);
}

TEST_CASE("trailer reads render key A as zeros and key B verbatim") {
    MifareTag tag = fresh_tag();
    tag.provision_keys(keyless::fixture_key_table());
    auto h0 = *tag.authenticate(0, SectorKey::from_hex("681E9E9B3FE9"), KeySlot::A);
    Block trailer = tag.read_block(h0, 3);
    CHECK(trailer == block_from_hex("000000000000FF078069FFFFFFFFFFFF"));
}

TEST_CASE("block 0 is writable iff the tag is magic") {
    MifareTag tag = fresh_tag();
    auto h0 = *tag.authenticate(0, SectorKey::default_key(), KeySlot::A);
    Block data = block_from_hex("3D06CD45B3880400C842002000000016");
    CHECK_THROWS_AS(tag.write_block(h0, 0, data), ManufacturerBlockLocked);

    tag.set_magic(true);
    tag.write_block(h0, 0, data);
    CHECK(tag.raw_block(0) == data);
}

TEST_CASE("write then read round-trips data blocks") {
    MifareTag tag = fresh_tag();
    auto h1 = *tag.authenticate(1, SectorKey::default_key(), KeySlot::A);
    Block data = block_from_hex("F55129991B0000000000000000000000");
    tag.write_block(h1, 4, data);
    CHECK(tag.read_block(h1, 4) == data);
    CHECK_THROWS_AS(tag.write_block(h1, 8, data), OutOfSector);
}

TEST_CASE("writing a trailer replaces keys and access bytes") {
    MifareTag tag = fresh_tag();
    auto h1 = *tag.authenticate(1, SectorKey::default_key(), KeySlot::A);
    tag.write_block(h1, 7, block_from_hex("A0A1A2A3A4A5FF078069B0B1B2B3B4B5"));
    CHECK(tag.trailer_key(1, KeySlot::A) == SectorKey::from_hex("A0A1A2A3A4A5"));
    CHECK(tag.trailer_key(1, KeySlot::B) == SectorKey::from_hex("B0B1B2B3B4B5"));
}

TEST_CASE("provision_keys rewrites trailers, keeps access bytes, and is idempotent") {
    MifareTag tag = fresh_tag();
    auto table = keyless::fixture_key_table();
    tag.provision_keys(table);
    CHECK(tag.authenticate(6, SectorKey::from_hex("5F5E9D3BD48B"), KeySlot::A));
    CHECK(tag.authenticate(7, SectorKey::default_key(), KeySlot::A));
    for (int s = 0; s < kSectorCount; ++s) {
        const Block& trailer = tag.raw_block(trailer_of(s));
        CHECK(std::equal(kTransportAccessBytes.begin(), kTransportAccessBytes.end(),
                         trailer.begin() + 6));
    }

    auto once = tag.snapshot();
    tag.provision_keys(table);
    CHECK(tag.snapshot() == once);
}

TEST_CASE("provision_keys with all-default table leaves a fresh tag unchanged") {
    MifareTag tag = fresh_tag();
    auto before = tag.snapshot();
    tag.provision_keys(KeyTable::all_default());
    CHECK(tag.snapshot() == before);
}

TEST_CASE("property: no operation sequence changes block 0 of a non-magic tag") {
    Rng rng(99);
    for (int round = 0; round < 50; ++round) {
        MifareTag tag = fresh_tag(round + 1);
        Block original_b0 = tag.raw_block(0);
        for (int step = 0; step < 40; ++step) {
            int sector = static_cast<int>(rng.uniform(kSectorCount));
            auto handle = tag.authenticate(sector, tag.trailer_key(sector, KeySlot::A), KeySlot::A);
            REQUIRE(handle);
            int block = sector * 4 + static_cast<int>(rng.uniform(4));
            switch (rng.uniform(3)) {
                case 0:
                    tag.read_block(*handle, block);
                    break;
                case 1:
                    try {
                        tag.write_block(*handle, block, rng.block16());
                    } catch (const ManufacturerBlockLocked&) {
                    }
                    break;
                case 2: {
                    KeyTable table;
                    for (auto& e : table.sectors) rng.fill(e.key_a.value);
                    tag.provision_keys(table);
                    break;
                }
            }
        }
        CHECK(tag.raw_block(0) == original_b0);
    }
}

TEST_CASE("property: write/read round-trip on every non-trailer, non-manufacturer block") {
    Rng rng(7);
    MifareTag tag = fresh_tag();
    for (int block = 1; block < kBlockCount; ++block) {
        if (is_trailer(block)) continue;
        int sector = sector_of(block);
        auto handle = *tag.authenticate(sector, tag.trailer_key(sector, KeySlot::A), KeySlot::A);
        Block data = rng.block16();
        tag.write_block(handle, block, data);
        CHECK(tag.read_block(handle, block) == data);
    }
}
