#include "locklab/scenario.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "locklab/attacker.hpp"
#include "locklab/conexis.hpp"
#include "locklab/dump_io.hpp"
#include "locklab/errors.hpp"
#include "locklab/hex.hpp"
#include "locklab/ia210.hpp"
#include "locklab/keyless.hpp"
#include "locklab/ul3.hpp"

namespace locklab::sim {

namespace {

using attacker::AttackBudget;
using mifare::Block;
using mifare::MifareTag;

constexpr uint64_t kTagSeedSalt = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kCloneSeedSalt = 0xC2B2AE3D27D4EB4FULL;

struct Ctx {
    Verdict verdict;
    std::filesystem::path dir;

    void check(const std::string& name, bool ok, std::string detail = "") {
        verdict.assertions.push_back(AssertionResult{name, ok, std::move(detail)});
    }

    void artifact(const std::string& filename, const std::string& content) {
        std::filesystem::create_directories(dir);
        auto path = dir / filename;
        std::ofstream out(path, std::ios::binary);
        out << content;
        verdict.artifacts.push_back(path);
    }
};

using ScenarioFn = std::function<void(uint64_t, Ctx&)>;

std::vector<dumpio::GattLogLine> commands_only(const std::vector<dumpio::GattLogLine>& events) {
    std::vector<dumpio::GattLogLine> out;
    for (const auto& e : events)
        if (e.dir == dumpio::Direction::Command) out.push_back(e);
    return out;
}

// --- UL3 ---------------------------------------------------------------

void ul3_replay_in_session(uint64_t seed, Ctx& ctx) {
    SimClock clock(ul3_replay_origin_ms());
    ul3::Ul3Lock lock(ul3::Config{}, seed);
    lock.connect(clock);

    // One legitimate unlock, then three replays of the sniffed command.
    auto first = lock.write_command(lock.client_unlock_command(), clock);
    ctx.check("legit unlock accepted", first == ul3::UnlockOutcome::Unlocked);
    auto sniffed = attacker::sniff(lock, AttackBudget{});
    Block captured = sniffed.front().payload;

    int replay_ok = 0;
    for (int i = 0; i < 3; ++i) {
        clock.advance(8'400);
        if (attacker::replay(lock, captured, clock) == ul3::UnlockOutcome::Unlocked) ++replay_ok;
    }
    ctx.check("3 replays accepted", replay_ok == 3);

    auto events = lock.channel();
    auto cmds = commands_only(events);
    ctx.check("4 identical command payloads", cmds.size() == 4 &&
              std::all_of(cmds.begin(), cmds.end(),
                          [&](const auto& c) { return c.payload == cmds.front().payload; }));

    std::vector<std::array<Block, 3>> triplets;
    std::array<Block, 3> current{};
    int n = 0;
    for (const auto& e : events) {
        if (e.dir != dumpio::Direction::Notification) continue;
        current[static_cast<size_t>(n++)] = e.payload;
        if (n == 3) {
            triplets.push_back(current);
            n = 0;
        }
    }
    ctx.check("4 identical notification triplets", triplets.size() == 4 &&
              std::all_of(triplets.begin(), triplets.end(),
                          [&](const auto& t) { return t == triplets.front(); }));

    ctx.artifact("session_trace.gatt", dumpio::emit_gatt_log(events));
}

void ul3_replay_cross_session(uint64_t seed, Ctx& ctx) {
    SimClock clock(ul3_replay_origin_ms());
    ul3::Ul3Lock lock(ul3::Config{}, seed);
    lock.connect(clock);
    Block captured = lock.client_unlock_command();
    ctx.check("unlock in session 1",
              lock.write_command(captured, clock) == ul3::UnlockOutcome::Unlocked);
    lock.disconnect();

    clock.advance(5'000);
    lock.connect(clock);
    ctx.check("stale token rejected in session 2",
              attacker::replay(lock, captured, clock) == ul3::UnlockOutcome::InvalidToken);
    ctx.check("session 2 token still works",
              lock.write_command(lock.client_unlock_command(), clock) == ul3::UnlockOutcome::Unlocked);
    ctx.artifact("cross_session_trace.gatt", dumpio::emit_gatt_log(lock.channel()));
}

void ul3_session_hold_12min(uint64_t seed, Ctx& ctx) {
    SimClock clock(ul3_hold_origin_ms());
    ul3::Ul3Lock lock(ul3::Config{}, seed);
    lock.connect(clock);
    Block captured = lock.client_unlock_command();
    ctx.check("unlock at session open",
              lock.write_command(captured, clock) == ul3::UnlockOutcome::Unlocked);

    // Keepalives every 10s defeat the 30s idle timeout; the replay lands at
    // exactly 12m18s.
    while (clock.elapsed_ms() + 10'000 < 738'000) {
        clock.advance(10'000);
        lock.keepalive(clock);
    }
    clock.advance(738'000 - clock.elapsed_ms());
    ctx.check("session open past 12m18s", lock.session_open() &&
              clock.elapsed_ms() >= 738'000);
    ctx.check("replay accepted after 738s",
              attacker::replay(lock, captured, clock) == ul3::UnlockOutcome::Unlocked);

    ctx.artifact("held_session_commands.gatt",
                 dumpio::emit_gatt_log(commands_only(lock.channel())));
}

void ul3_hardened_rotation(uint64_t seed, Ctx& ctx) {
    SimClock clock(ul3_replay_origin_ms());
    ul3::Config config;
    config.rotate_per_unlock = true;
    ul3::Ul3Lock lock(config, seed);
    lock.connect(clock);

    Block first = lock.client_unlock_command();
    ctx.check("first unlock accepted",
              lock.write_command(first, clock) == ul3::UnlockOutcome::Unlocked);
    ctx.check("replay of used token rejected",
              attacker::replay(lock, first, clock) == ul3::UnlockOutcome::InvalidToken);

    Block second = lock.client_unlock_command();
    ctx.check("token rotated after unlock", second != first);
    ctx.check("rotated token accepted once",
              lock.write_command(second, clock) == ul3::UnlockOutcome::Unlocked);
    ctx.check("rotated token rejected on replay",
              attacker::replay(lock, second, clock) == ul3::UnlockOutcome::InvalidToken);
    ctx.artifact("hardened_trace.gatt", dumpio::emit_gatt_log(lock.channel()));
}

// --- Conexis L1 --------------------------------------------------------

struct ConexisSetup {
    SimClock clock{ul3_replay_origin_ms()};
    conexis::ConexisLock lock;
    MifareTag original;
    mifare::KeyTable keys;

    explicit ConexisSetup(uint64_t seed)
        : lock(seed), original([&] {
              Rng tag_rng(seed ^ kTagSeedSalt);
              return MifareTag::factory(tag_rng);
          }()) {
        lock.pair_card(original, clock);
        keys = attacker::recover_keys(original, AttackBudget{}).keys;
    }

    MifareTag magic_clone(uint64_t seed) {
        Rng clone_rng(seed ^ kCloneSeedSalt);
        return attacker::clone_tag(attacker::dump_tag(original, keys), /*magic=*/true, clone_rng);
    }
};

void conexis_clone_lockout(uint64_t seed, Ctx& ctx) {
    ConexisSetup s(seed);
    auto dump_before = attacker::dump_tag(s.original, s.keys);
    MifareTag clone = s.magic_clone(seed);

    ctx.check("clone unlocks", s.lock.present_card(clone, s.clock).unlocked);
    auto original_result = s.lock.present_card(s.original, s.clock);
    ctx.check("original locked out afterwards", !original_result.unlocked);
    ctx.check("lockout cause is stale rolling values",
              original_result.reason == conexis::RejectReason::ticktock);
    ctx.check("audit records the reject", !s.lock.audit_trail().empty() &&
              s.lock.audit_trail().back().kind == conexis::AuditEvent::Kind::Reject);

    ctx.artifact("card_before_clone_use.json", dumpio::emit_json_blocks(dump_before));
    ctx.artifact("clone_after_use.json",
                 dumpio::emit_json_blocks(attacker::dump_tag(clone, s.keys)));
}

void conexis_reverse_lockout(uint64_t seed, Ctx& ctx) {
    ConexisSetup s(seed);
    MifareTag clone = s.magic_clone(seed);

    ctx.check("original unlocks", s.lock.present_card(s.original, s.clock).unlocked);
    auto clone_result = s.lock.present_card(clone, s.clock);
    ctx.check("clone locked out afterwards", !clone_result.unlocked);
    ctx.check("lockout cause is stale rolling values",
              clone_result.reason == conexis::RejectReason::ticktock);
    ctx.check("original keeps working", s.lock.present_card(s.original, s.clock).unlocked);
}

void conexis_tamper_reject(uint64_t seed, Ctx& ctx) {
    ConexisSetup s(seed);
    auto h0 = *s.original.authenticate(0, s.keys.sectors[0].key_a, mifare::KeySlot::A);
    const conexis::RegistryEntry* entry = s.lock.entry_for(s.original.read_block(h0, 0));
    ctx.check("card registered", entry != nullptr);
    if (!entry) return;

    int block = entry->tick_tock.first;
    Block tampered = s.original.raw_block(block);
    tampered[2] ^= 0x01;
    s.original.set_raw_block(block, tampered);

    auto result = s.lock.present_card(s.original, s.clock);
    ctx.check("tampered card rejected", !result.unlocked &&
              result.reason == conexis::RejectReason::ticktock);
}

void conexis_counter_reset(uint64_t seed, Ctx& ctx) {
    ConexisSetup s(seed);
    auto dump1 = attacker::dump_tag(s.original, s.keys);
    Block expected_before{};
    expected_before[0] = expected_before[1] = 0x08;
    expected_before[2] = 0x07;
    ctx.check("counter block after first pairing is 08080700...",
              dump1.blocks.at(2) == expected_before,
              to_hex(dump1.blocks.at(2)));

    s.lock.factory_reset();
    s.lock.pair_card(s.original, s.clock);
    auto keys2 = attacker::recover_keys(s.original, AttackBudget{}).keys;
    auto dump2 = attacker::dump_tag(s.original, keys2);
    Block expected_after = expected_before;
    expected_after[0] = expected_after[1] = 0x09;
    ctx.check("counter block after reset re-pair is 09090700...",
              dump2.blocks.at(2) == expected_after,
              to_hex(dump2.blocks.at(2)));

    auto diff = attacker::diff_dumps(dump1, dump2);
    bool block2_changed = std::any_of(diff.begin(), diff.end(),
                                      [](const auto& row) { return row.block == 2; });
    ctx.check("dump diff includes block 2", block2_changed);

    // Truncated to the first three blocks, the shape the counter evidence
    // is usually captured in.
    ctx.artifact("counter_before.json",
                 dumpio::emit_json_blocks(dumpio::JsonBlockDump{
                     {{0, dump1.blocks.at(0)}, {1, dump1.blocks.at(1)}, {2, dump1.blocks.at(2)}}}));
    ctx.artifact("counter_after.json",
                 dumpio::emit_json_blocks(dumpio::JsonBlockDump{
                     {{0, dump2.blocks.at(0)}, {1, dump2.blocks.at(1)}, {2, dump2.blocks.at(2)}}}));
}

// --- IA-210 ------------------------------------------------------------

struct Ia210Setup {
    ia210::Ia210Alarm alarm{"1234"};
    MifareTag original;

    explicit Ia210Setup(uint64_t seed)
        : original([&] {
              Rng tag_rng(seed ^ kTagSeedSalt);
              return MifareTag::factory(tag_rng);
          }()) {
        alarm.enroll_tag(original);
        alarm.arm();
    }
};

void ia210_magic_clone(uint64_t seed, Ctx& ctx) {
    Ia210Setup s(seed);
    auto recovery = attacker::recover_keys(s.original, AttackBudget{});
    ctx.check("all-default tag costs nothing to crack", recovery.elapsed_s == 0.0);

    auto dump = attacker::dump_tag(s.original, recovery.keys);
    Rng clone_rng(seed ^ kCloneSeedSalt);
    MifareTag clone = attacker::clone_tag(dump, /*magic=*/true, clone_rng);

    ctx.check("magic clone disarms",
              s.alarm.present_tag(clone) == ia210::DisarmOutcome::Disarmed);
    ctx.check("alarm disarmed", !s.alarm.armed());

    dumpio::BlockTableDump table;
    for (int i = 0; i < 4; ++i)
        table.rows.push_back(dumpio::BlockTableRow{i, s.original.raw_block(i)});
    ctx.artifact("tag_sector0.dump", dumpio::emit_block_table(table));
}

void ia210_plain_clone_fails(uint64_t seed, Ctx& ctx) {
    Ia210Setup s(seed);
    auto dump = attacker::dump_tag(s.original, mifare::KeyTable::all_default());
    Rng clone_rng(seed ^ kCloneSeedSalt);
    MifareTag clone = attacker::clone_tag(dump, /*magic=*/false, clone_rng);

    ctx.check("plain clone carries a different UID",
              clone.raw_block(0) != s.original.raw_block(0));
    auto before = clone.snapshot();
    ctx.check("plain clone rejected",
              s.alarm.present_tag(clone) == ia210::DisarmOutcome::Rejected);
    ctx.check("alarm still armed", s.alarm.armed());
    ctx.check("presentation never writes the tag", clone.snapshot() == before);
}

// --- Yale Keyless ------------------------------------------------------

void keyless_clone_no_tripwire(uint64_t seed, Ctx& ctx) {
    keyless::KeylessLock lock(seed);
    Rng tag_rng(seed ^ kTagSeedSalt);
    MifareTag original = MifareTag::factory(tag_rng);
    lock.pair_tag(original);

    auto recovery = attacker::recover_keys(original, AttackBudget{});
    Rng clone_rng(seed ^ kCloneSeedSalt);
    MifareTag clone =
        attacker::clone_tag(attacker::dump_tag(original, recovery.keys), /*magic=*/true, clone_rng);

    int accepted = 0;
    for (int i = 0; i < 100; ++i) {
        const MifareTag& tag = i % 2 == 0 ? original : clone;
        if (lock.present_tag(tag) == keyless::UnlockOutcome::Unlocked) ++accepted;
    }
    ctx.check("original and clone both unlock, 100/100 alternating presentations",
              accepted == 100);
    ctx.check("no audit log exists", lock.audit_trail().empty());
    ctx.artifact("recovered_keys.keytable",
                 dumpio::emit_key_table(dumpio::to_key_table_dump(recovery.keys)));
}

void keyless_key_recovery_20s(uint64_t seed, Ctx& ctx) {
    keyless::KeylessLock lock(keyless::fixture_key_table());
    Rng tag_rng(seed ^ kTagSeedSalt);
    MifareTag original = MifareTag::factory(tag_rng);
    lock.pair_tag(original);

    AttackBudget budget;
    budget.tag_access_time_s = 20.0;
    auto recovery = attacker::recover_keys(original, budget);
    ctx.check("recovery fits the 20s access window", recovery.elapsed_s <= 20.0,
              std::to_string(recovery.elapsed_s) + "s");
    ctx.check("7 non-default sectors at 2.8s each", recovery.elapsed_s == 7 * 2.8);
    ctx.check("recovered table matches the lock's", recovery.keys == lock.key_table());
    ctx.artifact("recovered_keys.keytable",
                 dumpio::emit_key_table(dumpio::to_key_table_dump(recovery.keys)));
}

const std::vector<std::pair<std::string, ScenarioFn>>& registry() {
    static const std::vector<std::pair<std::string, ScenarioFn>> scenarios = {
        {"ul3-replay-in-session", ul3_replay_in_session},
        {"ul3-replay-cross-session", ul3_replay_cross_session},
        {"ul3-session-hold-12min", ul3_session_hold_12min},
        {"ul3-hardened-rotation", ul3_hardened_rotation},
        {"conexis-clone-lockout", conexis_clone_lockout},
        {"conexis-reverse-lockout", conexis_reverse_lockout},
        {"conexis-tamper-reject", conexis_tamper_reject},
        {"conexis-counter-reset", conexis_counter_reset},
        {"ia210-magic-clone", ia210_magic_clone},
        {"ia210-plain-clone-fails", ia210_plain_clone_fails},
        {"keyless-clone-no-tripwire", keyless_clone_no_tripwire},
        {"keyless-key-recovery-20s", keyless_key_recovery_20s},
    };
    return scenarios;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : registry()) out.push_back(name);
        return out;
    }();
    return names;
}

Verdict run_scenario(const std::string& name, uint64_t seed,
                     const std::filesystem::path& out_dir) {
    for (const auto& [n, fn] : registry()) {
        if (n != name) continue;
        Ctx ctx;
        ctx.verdict.scenario = name;
        ctx.verdict.seed = seed;
        ctx.dir = out_dir / name;
        fn(seed, ctx);
        ctx.verdict.passed = std::all_of(ctx.verdict.assertions.begin(),
                                         ctx.verdict.assertions.end(),
                                         [](const auto& a) { return a.passed; });
        return std::move(ctx.verdict);
    }
    throw UnknownScenario(name);
}

std::vector<Verdict> run_all(uint64_t seed, const std::filesystem::path& out_dir) {
    std::vector<Verdict> verdicts;
    for (const auto& name : scenario_names())
        verdicts.push_back(run_scenario(name, seed, out_dir));
    return verdicts;
}

int64_t ul3_replay_origin_ms() {
    return dumpio::parse_timestamp("2022.11.15 17:59:32.844");
}

int64_t ul3_hold_origin_ms() {
    return dumpio::parse_timestamp("2022.11.19 15:04:47.385");
}

}  // namespace locklab::sim
