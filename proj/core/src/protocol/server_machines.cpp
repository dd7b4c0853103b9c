#include "pqm2m/protocol/server_machines.hpp"

namespace pqm2m::protocol {

namespace {

using wire::ErrorCode;
using wire::WireMessage;

Failure rejected_failure(ErrorCode code) {
    Failure f{FailureKind::rejected, wire::error_code_name(code)};
    f.server_code = code;
    return f;
}

Failure unexpected_input() { return {FailureKind::store_failure, "unexpected input"}; }

}  // namespace

Bytes make_error_reply(ErrorCode code, const crypto::Digest& request_hash, uint64_t correct_time,
                       const ServerIdentity& server, crypto::CryptoProvider& provider) {
    wire::ErrorMsg err;
    err.code = code;
    err.request_hash = request_hash;
    err.correct_time = correct_time;
    err.sig_server = provider.sign(wire::signing_bytes(WireMessage{err}),
                                   server.keypair.private_key);
    return wire::encode_message(WireMessage{err}, provider.params());
}

// --------------------------------------------------------------------------
// Registration (server side)
// --------------------------------------------------------------------------

RegisterServerMachine::RegisterServerMachine(const ServerIdentity& server,
                                             crypto::CryptoProvider& provider,
                                             ServerPolicy policy)
    : server_(server), provider_(provider), policy_(policy) {}

void RegisterServerMachine::reject(ErrorCode code) {
    push_send(make_error_reply(code, request_hash_, 0, server_, provider_));
    fail(rejected_failure(code));
}

void RegisterServerMachine::on_input(Input&& input) {
    switch (state_) {
        case State::await_request: {
            auto* frame = std::get_if<FrameIn>(&input);
            if (!frame) {
                fail(unexpected_input());
                return;
            }
            request_hash_ = provider_.hash(frame->body);
            auto decoded = wire::decode_message(frame->body, provider_.params());
            if (!decoded.ok() || !std::holds_alternative<wire::RegisterMsg>(decoded.value())) {
                fail({FailureKind::bad_message, "expected REGISTER"});
                return;
            }
            request_ = std::get<wire::RegisterMsg>(std::move(decoded.value()));
            // Inner signature: the proposed key signs its own registration,
            // proving the key pair exists and is held.
            if (!provider_.verify(request_.sig_client, wire::signing_bytes(WireMessage{request_}),
                                  request_.client_public_key)) {
                reject(ErrorCode::bad_signature);
                return;
            }
            state_ = State::await_admin;
            push_store(cmd::GetAdmin{request_.admin_uuid});
            return;
        }
        case State::await_admin: {
            auto* reply = std::get_if<StoreReply>(&input);
            auto* admin = reply ? std::get_if<reply::Admin>(reply) : nullptr;
            if (!admin) {
                fail(unexpected_input());
                return;
            }
            if (!admin->record) {
                reject(ErrorCode::unknown_client);
                return;
            }
            // Outer signature: the admin authorizes by signing the inner
            // signature bytes.
            if (!provider_.verify(request_.sig_admin, request_.sig_client,
                                  admin->record->public_key)) {
                reject(ErrorCode::bad_signature);
                return;
            }
            store::ClientRecord record;
            record.uuid = request_.uuid;
            record.public_key = request_.client_public_key;
            record.key_installed_at = policy_.now;
            record.expected_time = 0;
            record.key_epoch = 0;
            state_ = State::await_insert;
            push_store(cmd::InsertClient{std::move(record)});
            return;
        }
        case State::await_insert: {
            auto* reply = std::get_if<StoreReply>(&input);
            auto* inserted = reply ? std::get_if<reply::ClientInserted>(reply) : nullptr;
            if (!inserted) {
                fail(unexpected_input());
                return;
            }
            switch (inserted->result) {
                case store::InsertClientResult::duplicate_id:
                    reject(ErrorCode::duplicate_id);
                    return;
                case store::InsertClientResult::duplicate_key:
                    reject(ErrorCode::duplicate_key);
                    return;
                case store::InsertClientResult::ok: break;
            }
            wire::RegSuccessMsg ok;
            ok.id_hash = provider_.hash(request_.uuid);
            ok.sig_server = provider_.sign(wire::signing_bytes(WireMessage{ok}),
                                           server_.keypair.private_key);
            push_send(wire::encode_message(WireMessage{ok}, provider_.params()));
            succeed(RegisterServerOutcome{request_.uuid});
            return;
        }
    }
}

// --------------------------------------------------------------------------
// Key cycling (server side)
// --------------------------------------------------------------------------

CycleServerMachine::CycleServerMachine(const ServerIdentity& server,
                                       crypto::CryptoProvider& provider, ServerPolicy policy)
    : server_(server), provider_(provider), policy_(policy) {}

void CycleServerMachine::reject(ErrorCode code) {
    push_send(make_error_reply(code, request_hash_, 0, server_, provider_));
    fail(rejected_failure(code));
}

void CycleServerMachine::on_input(Input&& input) {
    switch (state_) {
        case State::await_request: {
            auto* frame = std::get_if<FrameIn>(&input);
            if (!frame) {
                fail(unexpected_input());
                return;
            }
            request_hash_ = provider_.hash(frame->body);
            auto decoded = wire::decode_message(frame->body, provider_.params());
            if (!decoded.ok() || !std::holds_alternative<wire::CycleMsg>(decoded.value())) {
                fail({FailureKind::bad_message, "expected CYCLE"});
                return;
            }
            request_ = std::get<wire::CycleMsg>(std::move(decoded.value()));
            state_ = State::await_client;
            push_store(cmd::GetClient{request_.uuid});
            return;
        }
        case State::await_client: {
            auto* reply = std::get_if<StoreReply>(&input);
            auto* client = reply ? std::get_if<reply::Client>(reply) : nullptr;
            if (!client) {
                fail(unexpected_input());
                return;
            }
            if (!client->record) {
                reject(ErrorCode::unknown_client);
                return;
            }
            // Outer signature authorizes under the currently installed key;
            // checked first so a replayed pre-rotation CYCLE deterministically
            // fails here after the key changed.
            if (!provider_.verify(request_.sig_old, request_.sig_new,
                                  client->record->public_key)) {
                reject(ErrorCode::bad_signature);
                return;
            }
            // Inner signature proves the proposed key is owned and exists.
            if (!provider_.verify(request_.sig_new, wire::signing_bytes(WireMessage{request_}),
                                  request_.new_public_key)) {
                reject(ErrorCode::bad_signature);
                return;
            }
            state_ = State::await_rotate;
            push_store(cmd::RotateKey{request_.uuid, request_.new_public_key, policy_.now});
            return;
        }
        case State::await_rotate: {
            auto* reply = std::get_if<StoreReply>(&input);
            auto* rotated = reply ? std::get_if<reply::KeyRotated>(reply) : nullptr;
            if (!rotated) {
                fail(unexpected_input());
                return;
            }
            switch (rotated->result) {
                case store::RotateKeyResult::duplicate_key:
                    reject(ErrorCode::duplicate_key);
                    return;
                case store::RotateKeyResult::unknown_client:
                    fail({FailureKind::store_failure, "client vanished during rotate"});
                    return;
                case store::RotateKeyResult::ok: break;
            }
            wire::CycleOkMsg ok;
            ok.verification_hash =
                provider_.hash(concat(request_.uuid, request_.new_public_key));
            ok.sig_server = provider_.sign(wire::signing_bytes(WireMessage{ok}),
                                           server_.keypair.private_key);
            push_send(wire::encode_message(WireMessage{ok}, provider_.params()));
            succeed(CycleServerOutcome{request_.uuid});
            return;
        }
    }
}

// --------------------------------------------------------------------------
// Token stamping (server side)
// --------------------------------------------------------------------------

StampServerMachine::StampServerMachine(const ServerIdentity& server,
                                       crypto::CryptoProvider& provider, ServerPolicy policy)
    : server_(server), provider_(provider), policy_(policy) {}

void StampServerMachine::reject(ErrorCode code, uint64_t correct_time) {
    push_send(make_error_reply(code, request_hash_, correct_time, server_, provider_));
    fail(rejected_failure(code));
}

void StampServerMachine::on_input(Input&& input) {
    switch (state_) {
        case State::await_request: {
            auto* frame = std::get_if<FrameIn>(&input);
            if (!frame) {
                fail(unexpected_input());
                return;
            }
            request_hash_ = provider_.hash(frame->body);
            auto decoded = wire::decode_message(frame->body, provider_.params());
            if (!decoded.ok() || !std::holds_alternative<wire::StampMsg>(decoded.value())) {
                fail({FailureKind::bad_message, "expected STAMP"});
                return;
            }
            request_ = std::get<wire::StampMsg>(std::move(decoded.value()));
            // The deployment runs one fixed suite; a token claiming another
            // suite cannot have been signed under a key this server accepted.
            if (request_.preview.protocol != crypto::wire_byte(server_.suite)) {
                reject(ErrorCode::bad_signature);
                return;
            }
            state_ = State::await_client;
            push_store(cmd::GetClient{request_.preview.uuid});
            return;
        }
        case State::await_client: {
            auto* reply = std::get_if<StoreReply>(&input);
            auto* client = reply ? std::get_if<reply::Client>(reply) : nullptr;
            if (!client) {
                fail(unexpected_input());
                return;
            }
            if (!client->record) {
                reject(ErrorCode::unknown_client);
                return;
            }
            if (!provider_.verify(request_.sig_client, wire::signing_bytes(WireMessage{request_}),
                                  client->record->public_key)) {
                // Unsigned garbage must not be able to desynchronize the
                // counters: no protocol-time effect on this path.
                reject(ErrorCode::bad_signature);
                return;
            }
            if (policy_.now >= client->record->key_installed_at + policy_.key_lifetime) {
                reject(ErrorCode::key_expired);
                return;
            }
            if (client->record->expected_time >= policy_.time_max) {
                // Counter ceiling reached: direct the client to cycle, which
                // resets protocol time to zero.
                reject(ErrorCode::key_expired);
                return;
            }
            state_ = State::await_cas;
            push_store(cmd::AdvanceTimeCas{request_.preview.uuid, request_.preview.time});
            return;
        }
        case State::await_cas: {
            auto* reply = std::get_if<StoreReply>(&input);
            auto* cas = reply ? std::get_if<reply::TimeCas>(reply) : nullptr;
            if (!cas) {
                fail(unexpected_input());
                return;
            }
            switch (cas->result.status) {
                case store::CasTimeResult::Status::mismatch:
                    reject(ErrorCode::bad_time, cas->result.value);
                    return;
                case store::CasTimeResult::Status::unknown_client:
                    fail({FailureKind::store_failure, "client vanished during time check"});
                    return;
                case store::CasTimeResult::Status::ok: break;
            }
            next_time_ = cas->result.value;
            finish_stamp();
            return;
        }
        case State::await_token_insert: {
            auto* reply = std::get_if<StoreReply>(&input);
            auto* inserted = reply ? std::get_if<reply::TokenInserted>(reply) : nullptr;
            if (!inserted) {
                fail(unexpected_input());
                return;
            }
            if (inserted->result == store::InsertTokenResult::duplicate) {
                // The time increment above is already consumed; a token
                // request counts regardless of error or success.
                reject(ErrorCode::duplicate_token);
                return;
            }
            wire::StampedMsg ok;
            ok.approval_hash = provider_.hash(concat(final_bytes_, preview_bytes_));
            ok.ciphertext = encapsulation_.ciphertext;
            ok.sig_server = provider_.sign(wire::signing_bytes(WireMessage{ok}),
                                           server_.keypair.private_key);
            push_send(wire::encode_message(WireMessage{ok}, provider_.params()));
            succeed(StampServerOutcome{request_.preview.uuid, token_hash_, next_time_});
            return;
        }
    }
}

void StampServerMachine::finish_stamp() {
    preview_bytes_ = wire::encode_token(request_.preview);
    auto encapsulated = provider_.kem_encapsulate(request_.encaps_key);
    if (!encapsulated.ok()) {
        reject(ErrorCode::bad_signature);
        return;
    }
    encapsulation_ = std::move(encapsulated.value());

    wire::Token final_token = request_.preview;
    final_token.payload = encapsulation_.secret.bytes;
    final_bytes_ = wire::encode_token(final_token);
    token_hash_ = provider_.hash(final_bytes_);

    store::TokenRecord record;
    record.token_hash = token_hash_;
    record.uuid = request_.preview.uuid;
    record.perms = request_.preview.perms;
    record.issued_at = policy_.now;
    record.expires_at = policy_.now + policy_.token_ttl;
    state_ = State::await_token_insert;
    push_store(cmd::InsertToken{std::move(record)});
}

}  // namespace pqm2m::protocol
