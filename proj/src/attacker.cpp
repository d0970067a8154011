#include "locklab/attacker.hpp"

#include "locklab/errors.hpp"

namespace locklab::attacker {

using mifare::KeySlot;
using mifare::SectorKey;

std::vector<dumpio::GattLogLine> sniff(const ul3::Ul3Lock& lock, const AttackBudget& budget) {
    if (!budget.radio_range) throw OutOfRange{};
    return lock.channel();
}

ul3::UnlockOutcome replay(ul3::Ul3Lock& lock, const Block& sniffed_payload,
                          const sim::SimClock& clock) {
    return lock.write_command(sniffed_payload, clock);
}

KeyRecovery recover_keys(const MifareTag& tag, const AttackBudget& budget) {
    KeyRecovery result;
    int costly_sectors = 0;
    for (int s = 0; s < mifare::kSectorCount; ++s) {
        auto& e = result.keys.sectors[static_cast<size_t>(s)];
        e.key_a = tag.trailer_key(s, KeySlot::A);
        e.key_b = tag.trailer_key(s, KeySlot::B);
        e.key_a_default = e.key_a.is_default();
        e.key_b_default = e.key_b.is_default();
        if (!e.key_a_default || !e.key_b_default) ++costly_sectors;
    }
    result.elapsed_s = costly_sectors * budget.per_sector_recovery_cost_s;
    if (result.elapsed_s > budget.tag_access_time_s) throw BudgetExceeded{};
    return result;
}

dumpio::JsonBlockDump dump_tag(const MifareTag& tag, const KeyTable& keys) {
    for (int s = 0; s < mifare::kSectorCount; ++s)
        if (!tag.authenticate(s, keys.sectors[static_cast<size_t>(s)].key_a, KeySlot::A))
            throw WrongKey{};
    // Raw blocks: a dump made by the key holder shows the true trailer keys,
    // not the transport read rendering.
    return dumpio::dump_range(tag.snapshot(), 0, mifare::kBlockCount - 1);
}

MifareTag clone_tag(const dumpio::JsonBlockDump& dump, bool magic, Rng& rng) {
    for (int i = 0; i < mifare::kBlockCount; ++i)
        if (!dump.blocks.contains(i)) throw IncompleteDump{};
    MifareTag tag = MifareTag::factory(rng);
    tag.set_magic(magic);
    int first = magic ? 0 : 1;  // a plain blank keeps its own manufacturer block
    for (int i = first; i < mifare::kBlockCount; ++i)
        tag.set_raw_block(i, dump.blocks.at(i));
    return tag;
}

std::vector<DumpDiffRow> diff_dumps(const dumpio::JsonBlockDump& before,
                                    const dumpio::JsonBlockDump& after) {
    if (before.blocks.size() != after.blocks.size()) throw BlockSetMismatch{};
    for (const auto& [index, _] : before.blocks)
        if (!after.blocks.contains(index)) throw BlockSetMismatch{};
    std::vector<DumpDiffRow> rows;
    for (const auto& [index, b] : before.blocks) {
        const Block& a = after.blocks.at(index);
        if (b != a) rows.push_back(DumpDiffRow{index, b, a});
    }
    return rows;
}

}  // namespace locklab::attacker
