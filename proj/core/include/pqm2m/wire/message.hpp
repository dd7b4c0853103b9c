#pragma once

#include <cstdint>
#include <variant>

#include "pqm2m/bytes.hpp"
#include "pqm2m/crypto/suite.hpp"
#include "pqm2m/result.hpp"
#include "pqm2m/wire/token.hpp"

namespace pqm2m::wire {

// Body layout of every discriminated message: discriminator byte, fixed
// fields in tuple order, then signatures last with the inner signature before
// the outer. Every variable-length field has exactly the length dictated by
// the active suite. Token checks are NOT discriminated: a check request is
// the bare 74-byte token, distinguished from these messages by frame length.
enum class MsgType : uint8_t {
    register_client = 0x01,
    reg_success = 0x02,
    cycle = 0x03,
    cycle_ok = 0x04,
    stamp = 0x05,
    stamped = 0x06,
    error = 0x7F,
};

enum class ErrorCode : uint8_t {
    bad_time = 1,
    key_expired = 2,
    duplicate_id = 3,
    duplicate_key = 4,
    bad_signature = 5,
    unknown_client = 6,
    duplicate_token = 7,
};

const char* error_code_name(ErrorCode code);

/// M1: admin proposes a new client. Inner signature by the client key over
/// the unsigned body, outer by the admin key over the inner signature bytes.
struct RegisterMsg {
    Uuid uuid{};
    Bytes client_public_key;
    Uuid admin_uuid{};
    Bytes sig_client;
    Bytes sig_admin;
    bool operator==(const RegisterMsg&) const = default;
};

/// M2: server approval carrying h(uuid).
struct RegSuccessMsg {
    Bytes id_hash;
    Bytes sig_server;
    bool operator==(const RegSuccessMsg&) const = default;
};

/// M3: key rotation. Inner signature by the new key, outer by the old key.
struct CycleMsg {
    Uuid uuid{};
    Bytes new_public_key;
    Bytes sig_new;
    Bytes sig_old;
    bool operator==(const CycleMsg&) const = default;
};

/// M4: server approval carrying h(uuid || new_public_key).
struct CycleOkMsg {
    Bytes verification_hash;
    Bytes sig_server;
    bool operator==(const CycleOkMsg&) const = default;
};

/// M5: preview token plus ephemeral KEM encapsulation key.
struct StampMsg {
    Token preview;
    Bytes encaps_key;
    Bytes sig_client;
    bool operator==(const StampMsg&) const = default;
};

/// M6: approval hash h(final || preview) plus KEM ciphertext.
struct StampedMsg {
    Bytes approval_hash;
    Bytes ciphertext;
    Bytes sig_server;
    bool operator==(const StampedMsg&) const = default;
};

/// Server error / resync report. The request hash binds the report to the
/// offending request so an old resync cannot be replayed against a new one.
/// correct_time is meaningful only for bad_time and zero otherwise.
struct ErrorMsg {
    ErrorCode code{};
    Bytes request_hash;
    uint64_t correct_time = 0;
    Bytes sig_server;
    bool operator==(const ErrorMsg&) const = default;
};

using WireMessage = std::variant<RegisterMsg, RegSuccessMsg, CycleMsg, CycleOkMsg, StampMsg,
                                 StampedMsg, ErrorMsg>;

MsgType message_type(const WireMessage& msg);

/// Serializes a message. All variable fields must already be sized per
/// `params`; violations throw std::invalid_argument.
Bytes encode_message(const WireMessage& msg, const crypto::SuiteParams& params);

/// Strict decode: exact field lengths, no trailing bytes, known
/// discriminator. Never crashes on arbitrary input.
Result<WireMessage, CodecError> decode_message(ByteView bytes, const crypto::SuiteParams& params);

/// Canonical bytes covered by a message's inner signature: the encoded
/// unsigned body (discriminator plus fields, no signatures). Outer signatures
/// cover exactly the inner signature bytes and need no helper.
Bytes signing_bytes(const WireMessage& msg);

}  // namespace pqm2m::wire
