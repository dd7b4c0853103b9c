#pragma once

#include "pqm2m/protocol/machine.hpp"

namespace pqm2m::protocol {

/// Per-request server policy snapshot, captured from config and clock when
/// the connection driver instantiates a machine.
struct ServerPolicy {
    store::Timestamp now = 0;
    store::Timestamp key_lifetime = 90LL * 24 * 3600;  // cycle forced after this
    store::Timestamp token_ttl = 3600;                 // stamped tokens live this long
    uint64_t time_max = std::numeric_limits<uint64_t>::max();
};

struct RegisterServerOutcome {
    Uuid client_uuid{};
};

struct CycleServerOutcome {
    Uuid client_uuid{};
};

struct StampServerOutcome {
    Uuid client_uuid{};
    Bytes token_hash;
    uint64_t next_time = 0;
};

// Server machines consume exactly one request frame, interleave store
// commands, and terminate after queueing exactly one reply: the success
// message or a signed Error bound to h(request). A protocol rejection
// terminates the machine with FailureKind::rejected carrying the error code.

class RegisterServerMachine final : public Machine<RegisterServerOutcome> {
public:
    RegisterServerMachine(const ServerIdentity& server, crypto::CryptoProvider& provider,
                          ServerPolicy policy);

private:
    void on_input(Input&& input) override;
    void reject(wire::ErrorCode code);

    enum class State { await_request, await_admin, await_insert };
    State state_ = State::await_request;
    ServerIdentity server_;
    crypto::CryptoProvider& provider_;
    ServerPolicy policy_;
    crypto::Digest request_hash_;
    wire::RegisterMsg request_;
};

class CycleServerMachine final : public Machine<CycleServerOutcome> {
public:
    CycleServerMachine(const ServerIdentity& server, crypto::CryptoProvider& provider,
                       ServerPolicy policy);

private:
    void on_input(Input&& input) override;
    void reject(wire::ErrorCode code);

    enum class State { await_request, await_client, await_rotate };
    State state_ = State::await_request;
    ServerIdentity server_;
    crypto::CryptoProvider& provider_;
    ServerPolicy policy_;
    crypto::Digest request_hash_;
    wire::CycleMsg request_;
};

class StampServerMachine final : public Machine<StampServerOutcome> {
public:
    StampServerMachine(const ServerIdentity& server, crypto::CryptoProvider& provider,
                       ServerPolicy policy);

private:
    void on_input(Input&& input) override;
    void reject(wire::ErrorCode code, uint64_t correct_time = 0);
    void finish_stamp();

    enum class State { await_request, await_client, await_cas, await_token_insert };
    State state_ = State::await_request;
    ServerIdentity server_;
    crypto::CryptoProvider& provider_;
    ServerPolicy policy_;
    crypto::Digest request_hash_;
    wire::StampMsg request_;
    wire::TokenBytes preview_bytes_{};
    crypto::Encapsulation encapsulation_;
    wire::TokenBytes final_bytes_{};
    Bytes token_hash_;
    uint64_t next_time_ = 0;
};

/// Builds the signed error/resync reply for a request frame.
Bytes make_error_reply(wire::ErrorCode code, const crypto::Digest& request_hash,
                       uint64_t correct_time, const ServerIdentity& server,
                       crypto::CryptoProvider& provider);

}  // namespace pqm2m::protocol
