#include "locklab/conexis.hpp"

#include <algorithm>

#include "locklab/errors.hpp"

namespace locklab::conexis {

namespace {

using mifare::KeySlot;

// Adjacent non-trailer block pairs within sectors 1-6. Blocks 1 and 2 have
// fixed roles (pairing record, counter), so sector 0 is excluded.
constexpr std::pair<int, int> kPairCandidates[] = {
    {4, 5},   {5, 6},   {8, 9},   {9, 10},  {12, 13}, {13, 14},
    {16, 17}, {17, 18}, {20, 21}, {21, 22}, {24, 25}, {25, 26},
};

constexpr int kProvisionedSectors = 7;  // sectors 0-6 carry non-default keys

bool counter_block_valid(const Block& b) {
    if (b[0] != b[1] || b[2] != 0x07) return false;
    return std::all_of(b.begin() + 3, b.end(), [](uint8_t v) { return v == 0; });
}

}  // namespace

ConexisLock::ConexisLock(uint64_t seed, uint8_t initial_counter)
    : rng_(seed), initial_counter_(initial_counter), current_keys_(generate_key_table()) {}

KeyTable ConexisLock::generate_key_table() {
    KeyTable table;
    for (int s = 0; s < kProvisionedSectors; ++s) {
        auto& e = table.sectors[static_cast<size_t>(s)];
        do {
            rng_.fill(e.key_a.value);
        } while (e.key_a.is_default());
        e.key_a_default = false;
    }
    return table;
}

Block ConexisLock::fresh_rolling_value() {
    Block b{};
    rng_.fill(std::span(b.data(), 5));
    return b;
}

const KeyTable* ConexisLock::authenticate_card(const MifareTag& tag) const {
    static const KeyTable defaults = KeyTable::all_default();
    std::vector<const KeyTable*> candidates{&defaults, &current_keys_};
    for (auto it = past_keys_.rbegin(); it != past_keys_.rend(); ++it)
        candidates.push_back(&*it);
    for (const KeyTable* table : candidates) {
        bool ok = true;
        for (int s = 0; s < kProvisionedSectors && ok; ++s)
            ok = tag.authenticate(s, table->sectors[static_cast<size_t>(s)].key_a, KeySlot::A).has_value();
        if (ok) return table;
    }
    return nullptr;
}

void ConexisLock::pair_card(MifareTag& tag, const sim::SimClock& clock) {
    const KeyTable* open_with = authenticate_card(tag);
    if (!open_with) throw AuthFailure{};

    auto h0 = *tag.authenticate(0, open_with->sectors[0].key_a, KeySlot::A);
    Block counter_block = tag.read_block(h0, 2);
    uint8_t counter = counter_block_valid(counter_block)
                          ? static_cast<uint8_t>(counter_block[0] + 1)
                          : initial_counter_;

    tag.provision_keys(current_keys_);

    RegistryEntry entry;
    entry.keys = current_keys_;
    entry.counter = counter;

    h0 = *tag.authenticate(0, current_keys_.sectors[0].key_a, KeySlot::A);
    entry.uid_block = tag.read_block(h0, 0);

    entry.pairing_record = rng_.block16();
    tag.write_block(h0, 1, entry.pairing_record);

    Block cb{};
    cb[0] = cb[1] = counter;
    cb[2] = 0x07;
    tag.write_block(h0, 2, cb);

    entry.tick_tock = kPairCandidates[rng_.uniform(std::size(kPairCandidates))];
    entry.expected.first = fresh_rolling_value();
    entry.expected.second = fresh_rolling_value();
    int sector = mifare::sector_of(entry.tick_tock.first);
    auto hp = *tag.authenticate(sector, current_keys_.sectors[static_cast<size_t>(sector)].key_a, KeySlot::A);
    tag.write_block(hp, entry.tick_tock.first, entry.expected.first);
    tag.write_block(hp, entry.tick_tock.second, entry.expected.second);
    entry.last_written = entry.tick_tock.second;

    std::erase_if(registry_, [&](const RegistryEntry& e) { return e.uid_block == entry.uid_block; });
    registry_.push_back(entry);
    audit_.push_back(AuditEvent{clock.now_ms(), AuditEvent::Kind::Pair, std::nullopt});
}

void ConexisLock::factory_reset() {
    past_keys_.push_back(current_keys_);
    current_keys_ = generate_key_table();
    registry_.clear();
    door_unlocked_ = false;
}

UnlockResult ConexisLock::present_card(MifareTag& tag, const sim::SimClock& clock) {
    auto reject = [&](RejectReason reason) {
        audit_.push_back(AuditEvent{clock.now_ms(), AuditEvent::Kind::Reject, reason});
        return UnlockResult{false, reason};
    };

    for (int s = 0; s < kProvisionedSectors; ++s)
        if (!tag.authenticate(s, current_keys_.sectors[static_cast<size_t>(s)].key_a, KeySlot::A))
            return reject(RejectReason::keys);

    auto h0 = *tag.authenticate(0, current_keys_.sectors[0].key_a, KeySlot::A);
    Block uid = tag.read_block(h0, 0);
    auto it = std::find_if(registry_.begin(), registry_.end(),
                           [&](const RegistryEntry& e) { return e.uid_block == uid; });
    if (it == registry_.end()) return reject(RejectReason::uid);
    RegistryEntry& entry = *it;

    int sector = mifare::sector_of(entry.tick_tock.first);
    auto hp = *tag.authenticate(sector, current_keys_.sectors[static_cast<size_t>(sector)].key_a, KeySlot::A);
    if (tag.read_block(hp, entry.tick_tock.first) != entry.expected.first ||
        tag.read_block(hp, entry.tick_tock.second) != entry.expected.second)
        return reject(RejectReason::ticktock);

    // Tick-tock: overwrite whichever member of the pair is staler.
    int target = entry.last_written == entry.tick_tock.first ? entry.tick_tock.second
                                                             : entry.tick_tock.first;
    Block fresh = fresh_rolling_value();
    tag.write_block(hp, target, fresh);
    (target == entry.tick_tock.first ? entry.expected.first : entry.expected.second) = fresh;
    entry.last_written = target;

    door_unlocked_ = true;
    audit_.push_back(AuditEvent{clock.now_ms(), AuditEvent::Kind::Unlock, std::nullopt});
    return UnlockResult{true, std::nullopt};
}

const RegistryEntry* ConexisLock::entry_for(const Block& uid_block) const {
    auto it = std::find_if(registry_.begin(), registry_.end(),
                           [&](const RegistryEntry& e) { return e.uid_block == uid_block; });
    return it == registry_.end() ? nullptr : &*it;
}

}  // namespace locklab::conexis
