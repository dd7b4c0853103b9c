#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "pqm2m/bytes.hpp"

namespace pqm2m::wire {

// Length-prefixed framing: u32 big-endian body length, then the body.
// Oversized lengths are rejected from the header alone, before any body
// bytes are buffered.

inline constexpr uint32_t kDefaultMaxFrameBytes = 64 * 1024;

Bytes frame(ByteView body);

class FrameReader {
public:
    explicit FrameReader(uint32_t max_body_bytes = kDefaultMaxFrameBytes)
        : max_body_(max_body_bytes) {}

    /// Feeds raw stream bytes; partial frames are reassembled internally.
    /// Returns false once an oversized frame header is seen, after which the
    /// reader is poisoned and the connection should be closed.
    bool feed(ByteView data);

    std::optional<Bytes> next();

    bool oversized() const { return oversized_; }

private:
    uint32_t max_body_;
    bool oversized_ = false;
    Bytes buffer_;
    std::deque<Bytes> ready_;
};

}  // namespace pqm2m::wire
