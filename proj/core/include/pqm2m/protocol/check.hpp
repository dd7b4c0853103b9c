#pragma once

#include <optional>

#include "pqm2m/crypto/provider.hpp"
#include "pqm2m/store/store.hpp"

namespace pqm2m::protocol {

enum class CheckStatus : uint8_t {
    valid = 0,
    unknown = 1,
    expired = 2,
    malformed = 3,
};

struct CheckResult {
    CheckStatus status = CheckStatus::malformed;
    std::array<uint8_t, 16> perms{};
};

const char* check_status_name(CheckStatus status);

/// Validates a presented token: exactly 74 bytes, its hash present in the
/// store, not expired, and the owning client still registered. Returns a
/// structured reason instead of failing; checking is a read-only operation.
CheckResult server_check_token(ByteView token_bytes, crypto::CryptoProvider& provider,
                               const store::ServerStore& store, store::Timestamp now);

// Wire form of the check response (transport plumbing, not part of the
// costed protocol): status byte, then the 16 permission bytes when valid.
Bytes encode_check_reply(const CheckResult& result);
std::optional<CheckResult> decode_check_reply(ByteView body);

}  // namespace pqm2m::protocol
