#include "locklab/ul3.hpp"

#include "locklab/errors.hpp"

namespace locklab::ul3 {

Ul3Lock::Ul3Lock(Config config, uint64_t seed) : config_(config), rng_(seed) {}

const Session& Ul3Lock::connect(const sim::SimClock& clock) {
    tick(clock);
    if (session_) throw SessionAlreadyOpen{};
    Session s;
    s.session_id = next_session_id_++;
    s.opened_at = clock.now_ms();
    s.last_activity = clock.now_ms();
    s.token = rng_.block16();
    // Tokens are 16 random bytes; collision with the previous session is
    // effectively impossible but the per-session contract is strict.
    while (previous_token_ && s.token == *previous_token_) s.token = rng_.block16();
    for (auto& n : s.notifications) n = rng_.block16();
    session_ = s;
    return *session_;
}

Block Ul3Lock::client_unlock_command() const {
    if (!session_) throw SessionClosedError{};
    return session_->token;
}

bool Ul3Lock::expired(const sim::SimClock& clock) const {
    if (!session_) return true;
    if (clock.now_ms() - session_->last_activity > config_.idle_timeout_ms) return true;
    if (config_.absolute_session_cap_ms &&
        clock.now_ms() - session_->opened_at > *config_.absolute_session_cap_ms)
        return true;
    return false;
}

void Ul3Lock::rotate_session_material() {
    previous_token_ = session_->token;
    Block t = rng_.block16();
    while (t == *previous_token_) t = rng_.block16();
    session_->token = t;
    for (auto& n : session_->notifications) n = rng_.block16();
}

void Ul3Lock::emit(dumpio::Direction dir, const Block& payload, int64_t t_ms) {
    channel_.push_back(dumpio::GattLogLine{t_ms, dir, kWriteHandle, kNotifyHandle, payload});
}

UnlockOutcome Ul3Lock::write_command(const Block& payload, const sim::SimClock& clock) {
    tick(clock);
    if (!session_) return UnlockOutcome::SessionClosed;
    emit(dumpio::Direction::Command, payload, clock.now_ms());
    if (payload != session_->token) {
        // No failure traces exist for the real device; the error notification
        // payload here is synthetic.
        emit(dumpio::Direction::Notification, rng_.block16(), clock.now_ms());
        return UnlockOutcome::InvalidToken;
    }
    door_unlocked_ = true;
    session_->unlock_count += 1;
    total_unlocks_ += 1;
    session_->last_activity = clock.now_ms();
    for (const auto& n : session_->notifications)
        emit(dumpio::Direction::Notification, n, clock.now_ms());
    if (config_.rotate_per_unlock) rotate_session_material();
    return UnlockOutcome::Unlocked;
}

void Ul3Lock::keepalive(const sim::SimClock& clock) {
    tick(clock);
    if (!session_) throw SessionClosedError{};
    session_->last_activity = clock.now_ms();
}

void Ul3Lock::tick(const sim::SimClock& clock) {
    if (session_ && expired(clock)) disconnect();
}

void Ul3Lock::disconnect() {
    if (session_) previous_token_ = session_->token;
    session_.reset();
}

}  // namespace locklab::ul3
