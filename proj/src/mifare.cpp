#include "locklab/mifare.hpp"

#include <atomic>
#include <stdexcept>

#include "locklab/errors.hpp"
#include "locklab/hex.hpp"

namespace locklab::mifare {

namespace {

std::atomic<int> g_next_tag_id{1};

void check_sector(int sector) {
    if (sector < 0 || sector >= kSectorCount)
        throw std::out_of_range("sector out of range");
}

void check_block(int block_index) {
    if (block_index < 0 || block_index >= kBlockCount)
        throw std::out_of_range("block index out of range");
}

}  // namespace

SectorKey SectorKey::from_hex(std::string_view hex12) {
    auto bytes = locklab::from_hex(hex12);
    if (!bytes || bytes->size() != 6)
        throw std::invalid_argument("sector key must be 12 hex characters");
    SectorKey k;
    std::copy(bytes->begin(), bytes->end(), k.value.begin());
    return k;
}

std::string SectorKey::hex() const {
    return to_hex(value);
}

bool KeyTable::operator==(const KeyTable& o) const {
    for (int s = 0; s < kSectorCount; ++s) {
        if (sectors[s].key_a != o.sectors[s].key_a) return false;
        if (sectors[s].key_b != o.sectors[s].key_b) return false;
    }
    return true;
}

MifareTag::MifareTag() : id_(g_next_tag_id.fetch_add(1)) {}

MifareTag MifareTag::factory(Rng& rng) {
    MifareTag tag;
    // Manufacturer block: 4-byte UID, BCC, SAK/ATQA-style bytes, then
    // manufacturer data.
    Block b0{};
    rng.fill(std::span(b0.data(), 4));
    b0[4] = static_cast<uint8_t>(b0[0] ^ b0[1] ^ b0[2] ^ b0[3]);
    b0[5] = 0x08;
    b0[6] = 0x04;
    b0[7] = 0x00;
    rng.fill(std::span(b0.data() + 8, 8));
    tag.blocks_[0] = b0;

    for (int s = 0; s < kSectorCount; ++s) {
        Block& trailer = tag.blocks_[trailer_of(s)];
        auto def = SectorKey::default_key();
        std::copy(def.value.begin(), def.value.end(), trailer.begin());
        std::copy(kTransportAccessBytes.begin(), kTransportAccessBytes.end(), trailer.begin() + 6);
        std::copy(def.value.begin(), def.value.end(), trailer.begin() + 10);
    }
    return tag;
}

std::optional<AuthHandle> MifareTag::authenticate(int sector, const SectorKey& key, KeySlot slot) const {
    check_sector(sector);
    if (trailer_key(sector, slot) != key) return std::nullopt;
    return AuthHandle{id_, sector};
}

Block MifareTag::read_block(const AuthHandle& handle, int block_index) const {
    check_block(block_index);
    if (handle.tag_id != id_ || handle.sector != sector_of(block_index))
        throw OutOfSector{};
    Block b = blocks_[block_index];
    if (is_trailer(block_index))
        std::fill(b.begin(), b.begin() + 6, 0);  // key A never reads back
    return b;
}

void MifareTag::write_block(const AuthHandle& handle, int block_index, const Block& data) {
    check_block(block_index);
    if (handle.tag_id != id_ || handle.sector != sector_of(block_index))
        throw OutOfSector{};
    if (block_index == 0 && !magic_)
        throw ManufacturerBlockLocked{};
    blocks_[block_index] = data;
}

void MifareTag::provision_keys(const KeyTable& table) {
    for (int s = 0; s < kSectorCount; ++s) {
        Block& trailer = blocks_[trailer_of(s)];
        const KeyEntry& e = table.sectors[s];
        std::copy(e.key_a.value.begin(), e.key_a.value.end(), trailer.begin());
        std::copy(e.key_b.value.begin(), e.key_b.value.end(), trailer.begin() + 10);
    }
}

SectorKey MifareTag::trailer_key(int sector, KeySlot slot) const {
    check_sector(sector);
    const Block& trailer = blocks_[trailer_of(sector)];
    SectorKey k;
    int off = slot == KeySlot::A ? 0 : 10;
    std::copy(trailer.begin() + off, trailer.begin() + off + 6, k.value.begin());
    return k;
}

const Block& MifareTag::raw_block(int block_index) const {
    check_block(block_index);
    return blocks_[block_index];
}

void MifareTag::set_raw_block(int block_index, const Block& data) {
    check_block(block_index);
    blocks_[block_index] = data;
}

}  // namespace locklab::mifare
