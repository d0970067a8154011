#include "locklab/keyless.hpp"

#include <algorithm>

#include "locklab/errors.hpp"

namespace locklab::keyless {

using mifare::KeySlot;
using mifare::SectorKey;

namespace {

constexpr int kProvisionedSectors = 7;

KeyTable generate_table(uint64_t seed) {
    Rng rng(seed);
    KeyTable table;
    for (int s = 0; s < kProvisionedSectors; ++s) {
        auto& e = table.sectors[static_cast<size_t>(s)];
        do {
            rng.fill(e.key_a.value);
        } while (e.key_a.is_default());
        e.key_a_default = false;
    }
    return table;
}

}  // namespace

KeylessLock::KeylessLock(uint64_t seed) : keys_(generate_table(seed)) {}

KeylessLock::KeylessLock(KeyTable table) : keys_(std::move(table)) {}

bool KeylessLock::authenticates(const MifareTag& tag, const KeyTable& table) const {
    for (int s = 0; s < kProvisionedSectors; ++s)
        if (!tag.authenticate(s, table.sectors[static_cast<size_t>(s)].key_a, KeySlot::A))
            return false;
    return true;
}

void KeylessLock::pair_tag(MifareTag& tag) {
    const KeyTable* open_with = nullptr;
    static const KeyTable defaults = KeyTable::all_default();
    if (authenticates(tag, defaults)) open_with = &defaults;
    else if (authenticates(tag, keys_)) open_with = &keys_;
    if (!open_with) throw AuthFailure{};

    auto h0 = *tag.authenticate(0, open_with->sectors[0].key_a, KeySlot::A);
    Block uid = tag.read_block(h0, 0);

    // Only the trailers change; no data is written to the tag.
    tag.provision_keys(keys_);
    if (std::find(enrolled_.begin(), enrolled_.end(), uid) == enrolled_.end())
        enrolled_.push_back(uid);
}

UnlockOutcome KeylessLock::present_tag(const MifareTag& tag) {
    if (!authenticates(tag, keys_)) return UnlockOutcome::Rejected;
    auto h0 = *tag.authenticate(0, keys_.sectors[0].key_a, KeySlot::A);
    Block uid = tag.read_block(h0, 0);
    if (std::find(enrolled_.begin(), enrolled_.end(), uid) == enrolled_.end())
        return UnlockOutcome::Rejected;
    door_unlocked_ = true;
    return UnlockOutcome::Unlocked;
}

KeyTable fixture_key_table() {
    static const char* kKeyA[kProvisionedSectors] = {
        "681E9E9B3FE9", "ADAE73113441", "6C6FAAC8E598", "BFBCF91B36CB",
        "58599AF4D3A4", "828340E60956", "5F5E9D3BD48B",
    };
    KeyTable table;
    for (int s = 0; s < kProvisionedSectors; ++s) {
        auto& e = table.sectors[static_cast<size_t>(s)];
        e.key_a = SectorKey::from_hex(kKeyA[s]);
        e.key_a_default = false;
    }
    return table;
}

}  // namespace locklab::keyless
