#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqm2m {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;
using Uuid = std::array<uint8_t, 16>;

inline Bytes to_bytes(ByteView v) { return Bytes(v.begin(), v.end()); }

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline bool bytes_equal(ByteView a, ByteView b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size()) == 0);
}

/// Concatenates any number of byte views into one buffer.
template <typename... Views>
Bytes concat(const Views&... views) {
    Bytes out;
    out.reserve((ByteView(views).size() + ...));
    (out.insert(out.end(), ByteView(views).begin(), ByteView(views).end()), ...);
    return out;
}

inline void put_u32_be(uint8_t* p, uint32_t v) {
    p[0] = static_cast<uint8_t>(v >> 24);
    p[1] = static_cast<uint8_t>(v >> 16);
    p[2] = static_cast<uint8_t>(v >> 8);
    p[3] = static_cast<uint8_t>(v);
}

inline uint32_t get_u32_be(const uint8_t* p) {
    return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) |
           (uint32_t{p[2]} << 8) | uint32_t{p[3]};
}

inline void put_u64_be(uint8_t* p, uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        p[i] = static_cast<uint8_t>(v >> (8 * (7 - i)));
    }
}

inline uint64_t get_u64_be(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v = (v << 8) | p[i];
    }
    return v;
}

std::string to_hex(ByteView data);
std::optional<Bytes> from_hex(std::string_view hex);

/// Overwrites key material before the buffer is released.
void secure_wipe(std::span<uint8_t> data);

/// True if `needle` occurs as a contiguous substring of `haystack`.
bool contains_subsequence(ByteView haystack, ByteView needle);

}  // namespace pqm2m
