#include "pqm2m/wire/token.hpp"

#include <cstring>

namespace pqm2m::wire {

TokenBytes encode_token(const Token& token) {
    TokenBytes out{};
    out[0] = token.protocol;
    out[1] = token.device;
    std::memcpy(out.data() + 2, token.uuid.data(), 16);
    std::memcpy(out.data() + 18, token.perms.data(), 16);
    put_u64_be(out.data() + 34, token.time);
    std::memcpy(out.data() + 42, token.payload.data(), 32);
    return out;
}

Result<Token, CodecError> decode_token(ByteView bytes) {
    if (bytes.size() != kTokenBytes) {
        return CodecError{CodecError::Kind::bad_length, "token must be exactly 74 bytes"};
    }
    Token t;
    t.protocol = bytes[0];
    t.device = bytes[1];
    std::memcpy(t.uuid.data(), bytes.data() + 2, 16);
    std::memcpy(t.perms.data(), bytes.data() + 18, 16);
    t.time = get_u64_be(bytes.data() + 34);
    std::memcpy(t.payload.data(), bytes.data() + 42, 32);
    if (!perms_mode_valid(t.perms[0])) {
        return CodecError{CodecError::Kind::reserved_perms_mode,
                          "permission modes 2-8 are reserved"};
    }
    return t;
}

}  // namespace pqm2m::wire
