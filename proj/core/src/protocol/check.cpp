#include "pqm2m/protocol/check.hpp"

#include <cstring>

#include "pqm2m/wire/token.hpp"

namespace pqm2m::protocol {

const char* check_status_name(CheckStatus status) {
    switch (status) {
        case CheckStatus::valid: return "valid";
        case CheckStatus::unknown: return "unknown";
        case CheckStatus::expired: return "expired";
        case CheckStatus::malformed: return "malformed";
    }
    return "?";
}

CheckResult server_check_token(ByteView token_bytes, crypto::CryptoProvider& provider,
                               const store::ServerStore& store, store::Timestamp now) {
    auto token = wire::decode_token(token_bytes);
    if (!token.ok()) return {CheckStatus::malformed, {}};

    auto lookup = store.lookup_token(provider.hash(token_bytes), now);
    switch (lookup.state) {
        case store::TokenState::absent: return {CheckStatus::unknown, {}};
        case store::TokenState::expired: return {CheckStatus::expired, {}};
        case store::TokenState::live: break;
    }
    // A token verifies against a client; it is valid only while that client
    // remains registered.
    if (!store.get_client(lookup.uuid)) return {CheckStatus::unknown, {}};
    return {CheckStatus::valid, lookup.perms};
}

Bytes encode_check_reply(const CheckResult& result) {
    Bytes out;
    out.push_back(static_cast<uint8_t>(result.status));
    if (result.status == CheckStatus::valid) {
        out.insert(out.end(), result.perms.begin(), result.perms.end());
    }
    return out;
}

std::optional<CheckResult> decode_check_reply(ByteView body) {
    if (body.empty() || body[0] > 3) return std::nullopt;
    CheckResult result;
    result.status = static_cast<CheckStatus>(body[0]);
    if (result.status == CheckStatus::valid) {
        if (body.size() != 17) return std::nullopt;
        std::memcpy(result.perms.data(), body.data() + 1, 16);
    } else if (body.size() != 1) {
        return std::nullopt;
    }
    return result;
}

}  // namespace pqm2m::protocol
