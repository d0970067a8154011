#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>

namespace locklab {

// Deterministic byte/int stream. mt19937_64 output is specified by the
// standard, so the same seed yields the same stream on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    uint8_t byte() { return static_cast<uint8_t>(next() & 0xFF); }

    void fill(std::span<uint8_t> out) {
        for (auto& b : out) b = byte();
    }

    std::array<uint8_t, 16> block16() {
        std::array<uint8_t, 16> b{};
        fill(b);
        return b;
    }

    // Uniform-ish draw in [0, n). Modulo bias is irrelevant for the small n
    // used here and keeps the stream portable (uniform_int_distribution is
    // implementation-defined).
    uint64_t uniform(uint64_t n) { return next() % n; }

private:
    std::mt19937_64 eng_;
};

}  // namespace locklab
