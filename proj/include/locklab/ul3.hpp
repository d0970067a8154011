#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "locklab/clock.hpp"
#include "locklab/dump_io.hpp"
#include "locklab/mifare.hpp"
#include "locklab/rng.hpp"

namespace locklab::ul3 {

using Block = mifare::Block;

constexpr uint16_t kWriteHandle = 0x7200;
constexpr uint16_t kNotifyHandle = 0x7201;

struct Config {
    int64_t idle_timeout_ms = 30'000;
    bool rotate_per_unlock = false;  // hardened: fresh token after every unlock
    std::optional<int64_t> absolute_session_cap_ms;  // hardened: hard session lifetime
};

struct Session {
    uint64_t session_id = 0;
    Block token{};
    std::array<Block, 3> notifications{};
    int64_t opened_at = 0;
    int64_t last_activity = 0;
    int unlock_count = 0;
};

enum class UnlockOutcome { Unlocked, InvalidToken, SessionClosed };

// Single-session BLE lock. Unlock is a 16-byte write to handle 7200; the
// lock answers with three notifications on 7201. With default config the
// token is fixed for the whole session and keepalives extend it forever.
class Ul3Lock {
public:
    Ul3Lock(Config config, uint64_t seed);

    // Throws SessionAlreadyOpen.
    const Session& connect(const sim::SimClock& clock);

    // What the legitimate client would send right now. Throws SessionClosedError.
    Block client_unlock_command() const;

    UnlockOutcome write_command(const Block& payload, const sim::SimClock& clock);

    // Throws SessionClosedError if the session already expired.
    void keepalive(const sim::SimClock& clock);

    // Closes the session if idle timeout or absolute cap is exceeded.
    void tick(const sim::SimClock& clock);

    void disconnect();

    bool session_open() const { return session_.has_value(); }
    const std::optional<Session>& session() const { return session_; }
    bool door_unlocked() const { return door_unlocked_; }
    int total_unlocks() const { return total_unlocks_; }

    // Everything sent over the air, in order; what a sniffer sees.
    const std::vector<dumpio::GattLogLine>& channel() const { return channel_; }

private:
    bool expired(const sim::SimClock& clock) const;
    void rotate_session_material();
    void emit(dumpio::Direction dir, const Block& payload, int64_t t_ms);

    Config config_;
    Rng rng_;
    std::optional<Session> session_;
    std::optional<Block> previous_token_;
    uint64_t next_session_id_ = 1;
    bool door_unlocked_ = false;
    int total_unlocks_ = 0;
    std::vector<dumpio::GattLogLine> channel_;
};

}  // namespace locklab::ul3
