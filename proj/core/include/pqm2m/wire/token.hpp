#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "pqm2m/bytes.hpp"
#include "pqm2m/result.hpp"

namespace pqm2m::wire {

/// The 74-byte transparent token. Field order and widths are fixed; all
/// multi-byte integers are big-endian.
///
///   offset  0  protocol   1 byte   (suite wire byte)
///   offset  1  device     1 byte
///   offset  2  uuid      16 bytes
///   offset 18  perms     16 bytes  (first byte is the mode discriminator)
///   offset 34  time       8 bytes  (big-endian u64 protocol time)
///   offset 42  payload   32 bytes  (random in a preview, shared secret in a
///                                   finalized token)
struct Token {
    uint8_t protocol = 0;
    uint8_t device = 0;
    Uuid uuid{};
    std::array<uint8_t, 16> perms{};
    uint64_t time = 0;
    std::array<uint8_t, 32> payload{};

    bool operator==(const Token&) const = default;
};

inline constexpr std::size_t kTokenBytes = 74;
using TokenBytes = std::array<uint8_t, kTokenBytes>;

/// Permission modes 0 and 1 are specified; 2-8 are reserved and rejected;
/// 9 and above are open extension space.
inline constexpr bool perms_mode_valid(uint8_t mode) { return mode <= 1 || mode >= 9; }

struct CodecError {
    enum class Kind {
        truncated,
        trailing_bytes,
        unknown_discriminator,
        bad_length,
        reserved_perms_mode,
    };
    Kind kind;
    std::string detail;
};

TokenBytes encode_token(const Token& token);

/// Requires exactly 74 bytes; rejects reserved permission modes.
Result<Token, CodecError> decode_token(ByteView bytes);

}  // namespace pqm2m::wire
