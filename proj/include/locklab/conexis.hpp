#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "locklab/clock.hpp"
#include "locklab/mifare.hpp"
#include "locklab/rng.hpp"

namespace locklab::conexis {

using mifare::Block;
using mifare::KeyTable;
using mifare::MifareTag;

enum class RejectReason { keys, uid, ticktock };

struct UnlockResult {
    bool unlocked = false;
    std::optional<RejectReason> reason;  // internal diagnostics; the lock surface only shows failure
};

struct RegistryEntry {
    Block uid_block{};
    KeyTable keys;
    uint8_t counter = 0;
    std::pair<int, int> tick_tock{0, 0};  // adjacent data blocks, sectors 1..6
    std::pair<Block, Block> expected{};
    int last_written = 0;  // block index within the pair
    Block pairing_record{};  // block 1 contents; stored but not validated
};

struct AuditEvent {
    enum class Kind { Pair, Unlock, Reject };
    int64_t t_ms;
    Kind kind;
    std::optional<RejectReason> reason;
};

// Conexis L1: cards carry non-default keys on sectors 0-6, a pairing counter
// in block 2, and two adjacent blocks of rolling values that alternate on
// each unlock. A stale card (original after its clone was used, or vice
// versa) fails the rolling-value check.
class ConexisLock {
public:
    explicit ConexisLock(uint64_t seed, uint8_t initial_counter = 8);

    // Throws AuthFailure unless the card opens with default keys (factory)
    // or keys this lock has provisioned before (re-pair).
    void pair_card(MifareTag& tag, const sim::SimClock& clock);

    // Clears the registry and regenerates the lock's key material. Card-side
    // counters persist and increment at the next pairing.
    void factory_reset();

    UnlockResult present_card(MifareTag& tag, const sim::SimClock& clock);

    const std::vector<AuditEvent>& audit_trail() const { return audit_; }
    bool door_unlocked() const { return door_unlocked_; }
    const KeyTable& current_keys() const { return current_keys_; }
    const RegistryEntry* entry_for(const Block& uid_block) const;

private:
    KeyTable generate_key_table();
    Block fresh_rolling_value();
    const KeyTable* authenticate_card(const MifareTag& tag) const;

    Rng rng_;
    uint8_t initial_counter_;
    KeyTable current_keys_;
    std::vector<KeyTable> past_keys_;  // tables from before factory resets; master-card re-pair path
    std::vector<RegistryEntry> registry_;
    std::vector<AuditEvent> audit_;
    bool door_unlocked_ = false;
};

}  // namespace locklab::conexis
