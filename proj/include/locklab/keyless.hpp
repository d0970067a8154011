#pragma once

#include <vector>

#include "locklab/mifare.hpp"
#include "locklab/rng.hpp"

namespace locklab::keyless {

using mifare::Block;
using mifare::KeyTable;
using mifare::MifareTag;

enum class UnlockOutcome { Unlocked, Rejected };

// Yale Keyless Smart Lock. Non-default key A on sectors 0-6, block-0 match,
// no writes at unlock, no rolling values, and no audit log at all.
class KeylessLock {
public:
    explicit KeylessLock(uint64_t seed);
    explicit KeylessLock(KeyTable table);

    // Throws AuthFailure unless the tag opens with default keys (factory) or
    // the lock's own table (re-pair).
    void pair_tag(MifareTag& tag);

    UnlockOutcome present_tag(const MifareTag& tag);

    // The device keeps no log; this always returns empty. Scenario-level
    // observations come from the caller's own instrumentation.
    std::vector<int> audit_trail() const { return {}; }

    bool door_unlocked() const { return door_unlocked_; }
    const KeyTable& key_table() const { return keys_; }
    const std::vector<Block>& enrolled_tags() const { return enrolled_; }

private:
    bool authenticates(const MifareTag& tag, const KeyTable& table) const;

    KeyTable keys_;
    std::vector<Block> enrolled_;
    bool door_unlocked_ = false;
};

// The recovered key A values for sectors 0-6 observed on a production tag;
// used as a golden fixture.
KeyTable fixture_key_table();

}  // namespace locklab::keyless
