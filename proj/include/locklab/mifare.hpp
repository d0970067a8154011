#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "locklab/rng.hpp"

namespace locklab::mifare {

using Block = std::array<uint8_t, 16>;

constexpr int kBlockCount = 64;
constexpr int kSectorCount = 16;
constexpr int kBlocksPerSector = 4;

constexpr int sector_of(int block_index) { return block_index / kBlocksPerSector; }
constexpr int trailer_of(int sector) { return sector * kBlocksPerSector + 3; }
constexpr bool is_trailer(int block_index) { return block_index % kBlocksPerSector == 3; }

// 6-byte sector key, rendered as 12 uppercase hex characters.
struct SectorKey {
    std::array<uint8_t, 6> value{};

    static SectorKey default_key() {
        return SectorKey{{0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF}};
    }
    // Expects exactly 12 hex chars; throws std::invalid_argument otherwise.
    static SectorKey from_hex(std::string_view hex12);

    std::string hex() const;
    bool is_default() const { return *this == default_key(); }
    bool operator==(const SectorKey&) const = default;
};

enum class KeySlot { A, B };

struct KeyEntry {
    SectorKey key_a = SectorKey::default_key();
    SectorKey key_b = SectorKey::default_key();
    bool key_a_default = true;
    bool key_b_default = true;
};

// One entry per sector 0..15.
struct KeyTable {
    std::array<KeyEntry, kSectorCount> sectors{};

    static KeyTable all_default() { return KeyTable{}; }
    bool operator==(const KeyTable& o) const;
};

// Sector-scoped access grant produced by a successful authentication.
struct AuthHandle {
    int tag_id = -1;
    int sector = -1;
};

// In-memory Mifare Classic 1K: 16 sectors x 4 blocks x 16 bytes.
// Block 0 holds the UID and is writable only when magic is set.
class MifareTag {
public:
    // Factory tag: random UID in block 0, zeroed data blocks, transport
    // configuration trailers (default keys, access bytes FF 07 80 69).
    static MifareTag factory(Rng& rng);

    // Succeeds iff key matches the trailer key in the named slot.
    std::optional<AuthHandle> authenticate(int sector, const SectorKey& key, KeySlot slot) const;

    // Transport render rule for trailers: key A reads as zeros, access bytes
    // and key B verbatim. Throws OutOfSector if the handle covers another sector.
    Block read_block(const AuthHandle& handle, int block_index) const;

    // Throws OutOfSector, or ManufacturerBlockLocked for block 0 on a
    // non-magic tag. Writing a trailer replaces keys and access bytes.
    void write_block(const AuthHandle& handle, int block_index, const Block& data);

    // Replaces every trailer's keys from the table; access bytes unchanged.
    // Caller is expected to hold authentication to the sectors it rewrites.
    void provision_keys(const KeyTable& table);

    SectorKey trailer_key(int sector, KeySlot slot) const;

    // Raw access bypasses the trailer render rule. This is the simulation's
    // observability surface (dump-with-true-keys, snapshot diffing) and the
    // manufacturing path; device models go through authenticate/read/write.
    const Block& raw_block(int block_index) const;
    void set_raw_block(int block_index, const Block& data);
    const std::array<Block, kBlockCount>& snapshot() const { return blocks_; }

    bool magic() const { return magic_; }
    void set_magic(bool m) { magic_ = m; }
    int id() const { return id_; }

private:
    MifareTag();

    std::array<Block, kBlockCount> blocks_{};
    bool magic_ = false;
    int id_ = 0;
};

// Transport-configuration access bytes FF 07 80 69.
constexpr std::array<uint8_t, 4> kTransportAccessBytes{0xFF, 0x07, 0x80, 0x69};

}  // namespace locklab::mifare
