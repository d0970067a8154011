#pragma once

#include <cassert>
#include <cstdint>

namespace locklab::sim {

// Simulated wall clock in epoch milliseconds. The origin is a real datetime
// so emitted traces render as plausible capture timestamps.
class SimClock {
public:
    explicit SimClock(int64_t origin_epoch_ms) : origin_(origin_epoch_ms), now_(origin_epoch_ms) {}

    int64_t now_ms() const { return now_; }
    int64_t elapsed_ms() const { return now_ - origin_; }

    void advance(int64_t ms) {
        assert(ms >= 0);
        now_ += ms;
    }

private:
    int64_t origin_;
    int64_t now_;
};

}  // namespace locklab::sim
