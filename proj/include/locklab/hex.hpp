#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace locklab {

inline std::string to_hex(std::span<const uint8_t> bytes, bool upper = true) {
    static const char* lo = "0123456789abcdef";
    static const char* up = "0123456789ABCDEF";
    const char* digits = upper ? up : lo;
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

inline std::optional<int> hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return std::nullopt;
}

// Even-length hex string -> bytes; nullopt on bad length or non-hex char.
inline std::optional<std::vector<uint8_t>> from_hex(std::string_view s) {
    if (s.size() % 2 != 0) return std::nullopt;
    std::vector<uint8_t> out;
    out.reserve(s.size() / 2);
    for (size_t i = 0; i < s.size(); i += 2) {
        auto hi = hex_nibble(s[i]);
        auto lo = hex_nibble(s[i + 1]);
        if (!hi || !lo) return std::nullopt;
        out.push_back(static_cast<uint8_t>((*hi << 4) | *lo));
    }
    return out;
}

}  // namespace locklab
