#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "pqm2m/bytes.hpp"
#include "pqm2m/crypto/provider.hpp"
#include "pqm2m/wire/message.hpp"
#include "pqm2m/wire/token.hpp"

namespace pqm2m::protocol {

/// Per-client monotonic counter that replaces wall-clock timestamps. Strictly
/// monotonic within a key epoch, reset to zero by a completed cycle. Once the
/// counter reaches `max`, stamping is refused until a cycle resets it.
struct ProtocolTime {
    uint64_t counter = 0;
    uint64_t max = std::numeric_limits<uint64_t>::max();

    bool at_max() const { return counter >= max; }
};

struct ClientIdentity {
    Uuid uuid{};
    crypto::SigningKeyPair keypair;
    Bytes server_public_key;
    ProtocolTime time;
    crypto::SecurityLevel suite = crypto::SecurityLevel::L1;
};

struct AdminIdentity {
    Uuid admin_uuid{};
    crypto::SigningKeyPair keypair;
    Bytes server_public_key;
    crypto::SecurityLevel suite = crypto::SecurityLevel::L1;
};

struct ServerIdentity {
    crypto::SigningKeyPair keypair;
    crypto::SecurityLevel suite = crypto::SecurityLevel::L1;
};

/// A successfully established token. The token's payload is the KEM shared
/// secret; preview bytes are kept as verification material for the approval
/// hash h(final || preview).
struct FinalToken {
    wire::Token token;
    crypto::Digest approval_hash;
    wire::TokenBytes preview_bytes{};

    wire::TokenBytes bytes() const { return wire::encode_token(token); }
};

enum class FailureKind : uint8_t {
    bad_signature,    // a peer signature failed verification
    hash_mismatch,    // id / verification / approval hash check failed
    bad_message,      // undecodable or out-of-sequence input
    invalid_perms,    // reserved permission mode requested
    server_error,     // authenticated server Error reply (code in server_code)
    cycle_required,   // counter at max, or server reported KEY_EXPIRED
    time_resync,      // server reported BAD_TIME; counter adopted correct_time
    rejected,         // server side: request rejected, Error reply queued
    crypto_failure,   // provider failure outside the protocol's control
    store_failure,    // unexpected store reply
    transport,        // connection error injected by the driver
};

struct Failure {
    FailureKind kind;
    std::string detail;
    wire::ErrorCode server_code{};  // valid for server_error / rejected
    uint64_t correct_time = 0;      // valid for time_resync

    bool operator==(const Failure& o) const { return kind == o.kind; }
};

const char* failure_kind_name(FailureKind kind);

}  // namespace pqm2m::protocol
