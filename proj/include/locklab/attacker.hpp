#pragma once

#include <limits>
#include <vector>

#include "locklab/dump_io.hpp"
#include "locklab/mifare.hpp"
#include "locklab/rng.hpp"
#include "locklab/ul3.hpp"

namespace locklab::attacker {

using mifare::Block;
using mifare::KeyTable;
using mifare::MifareTag;

struct AttackBudget {
    double tag_access_time_s = std::numeric_limits<double>::infinity();
    double per_sector_recovery_cost_s = 2.8;
    bool radio_range = true;
};

struct KeyRecovery {
    KeyTable keys;
    double elapsed_s = 0.0;
};

struct DumpDiffRow {
    int block;
    Block before;
    Block after;
    bool operator==(const DumpDiffRow&) const = default;
};

// Everything the lock has put on the air so far. Throws OutOfRange.
std::vector<dumpio::GattLogLine> sniff(const ul3::Ul3Lock& lock, const AttackBudget& budget);

// Replays a captured unlock payload against the lock.
ul3::UnlockOutcome replay(ul3::Ul3Lock& lock, const Block& sniffed_payload,
                          const sim::SimClock& clock);

// Timed stand-in for Proxmark-style key cracking: returns the tag's true key
// table; each sector with any non-default key costs per_sector_recovery_cost_s,
// default-key sectors are free. Throws BudgetExceeded.
KeyRecovery recover_keys(const MifareTag& tag, const AttackBudget& budget);

// Full 64-block dump with true trailer keys. Throws WrongKey unless the
// table's key A authenticates every sector.
dumpio::JsonBlockDump dump_tag(const MifareTag& tag, const KeyTable& keys);

// magic=true: byte-perfect clone including block 0. magic=false: data blocks
// and trailers copied onto a blank tag, which keeps its own fresh UID.
// Throws IncompleteDump unless all 64 blocks are present.
MifareTag clone_tag(const dumpio::JsonBlockDump& dump, bool magic, Rng& rng);

// Changed blocks only, ascending. Throws BlockSetMismatch.
std::vector<DumpDiffRow> diff_dumps(const dumpio::JsonBlockDump& before,
                                    const dumpio::JsonBlockDump& after);

}  // namespace locklab::attacker
