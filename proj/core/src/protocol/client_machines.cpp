#include "pqm2m/protocol/client_machines.hpp"

namespace pqm2m::protocol {

namespace {

using wire::ErrorCode;
using wire::ErrorMsg;
using wire::WireMessage;

/// Validates an authenticated error reply and maps it to a failure. The
/// request-hash binding stops an old resync report from being replayed
/// against a different request.
Failure failure_from_error_reply(const ErrorMsg& err, crypto::CryptoProvider& provider,
                                 ByteView server_public_key, const crypto::Digest& request_hash) {
    if (!provider.verify(err.sig_server, wire::signing_bytes(WireMessage{err}),
                         server_public_key)) {
        return {FailureKind::bad_signature, "error reply signature invalid"};
    }
    if (!bytes_equal(err.request_hash, request_hash)) {
        return {FailureKind::bad_message, "error reply does not bind to this request"};
    }
    switch (err.code) {
        case ErrorCode::bad_time: {
            Failure f{FailureKind::time_resync, "server reported protocol time mismatch"};
            f.correct_time = err.correct_time;
            return f;
        }
        case ErrorCode::key_expired:
            return {FailureKind::cycle_required, "server requires a key cycle"};
        default: {
            Failure f{FailureKind::server_error, wire::error_code_name(err.code)};
            f.server_code = err.code;
            return f;
        }
    }
}

}  // namespace

// --------------------------------------------------------------------------
// Registration (admin side)
// --------------------------------------------------------------------------

RegisterAdminMachine::RegisterAdminMachine(const AdminIdentity& admin,
                                           crypto::CryptoProvider& provider, const Uuid& new_uuid,
                                           crypto::SigningKeyPair new_keypair, uint64_t time_max)
    : admin_(admin),
      provider_(provider),
      new_uuid_(new_uuid),
      new_keypair_(std::move(new_keypair)),
      time_max_(time_max) {
    wire::RegisterMsg msg;
    msg.uuid = new_uuid_;
    msg.client_public_key = new_keypair_.public_key;
    msg.admin_uuid = admin_.admin_uuid;
    Bytes body = wire::signing_bytes(WireMessage{msg});
    msg.sig_client = provider_.sign(body, new_keypair_.private_key);
    msg.sig_admin = provider_.sign(msg.sig_client, admin_.keypair.private_key);
    Bytes frame = wire::encode_message(WireMessage{msg}, provider_.params());
    sent_request_hash_ = provider_.hash(frame);
    push_send(std::move(frame));
}

void RegisterAdminMachine::on_input(Input&& input) {
    auto* frame = std::get_if<FrameIn>(&input);
    if (!frame) {
        fail({FailureKind::store_failure, "unexpected store reply"});
        return;
    }
    auto decoded = wire::decode_message(frame->body, provider_.params());
    if (!decoded.ok()) {
        fail({FailureKind::bad_message, decoded.error().detail});
        return;
    }
    if (auto* err = std::get_if<ErrorMsg>(&decoded.value())) {
        fail(failure_from_error_reply(*err, provider_, admin_.server_public_key,
                                      sent_request_hash_));
        return;
    }
    auto* ok = std::get_if<wire::RegSuccessMsg>(&decoded.value());
    if (!ok) {
        fail({FailureKind::bad_message, "expected REGSUCCESS"});
        return;
    }
    if (!provider_.verify(ok->sig_server, wire::signing_bytes(decoded.value()),
                          admin_.server_public_key)) {
        fail({FailureKind::bad_signature, "REGSUCCESS signature invalid"});
        return;
    }
    if (!bytes_equal(ok->id_hash, provider_.hash(new_uuid_))) {
        fail({FailureKind::hash_mismatch, "REGSUCCESS id hash does not match proposed uuid"});
        return;
    }
    ClientIdentity installed;
    installed.uuid = new_uuid_;
    installed.keypair = std::move(new_keypair_);
    installed.server_public_key = admin_.server_public_key;
    installed.time = ProtocolTime{0, time_max_};
    installed.suite = admin_.suite;
    succeed(std::move(installed));
}

// --------------------------------------------------------------------------
// Key cycling (client side)
// --------------------------------------------------------------------------

CycleClientMachine::CycleClientMachine(ClientIdentity& identity,
                                       crypto::CryptoProvider& provider)
    : identity_(identity), provider_(provider), new_keypair_(provider.dsa_generate()) {
    wire::CycleMsg msg;
    msg.uuid = identity_.uuid;
    msg.new_public_key = new_keypair_.public_key;
    Bytes body = wire::signing_bytes(WireMessage{msg});
    msg.sig_new = provider_.sign(body, new_keypair_.private_key);
    msg.sig_old = provider_.sign(msg.sig_new, identity_.keypair.private_key);
    Bytes frame = wire::encode_message(WireMessage{msg}, provider_.params());
    sent_request_hash_ = provider_.hash(frame);
    push_send(std::move(frame));
}

void CycleClientMachine::on_input(Input&& input) {
    auto* frame = std::get_if<FrameIn>(&input);
    if (!frame) {
        fail({FailureKind::store_failure, "unexpected store reply"});
        return;
    }
    auto decoded = wire::decode_message(frame->body, provider_.params());
    if (!decoded.ok()) {
        fail({FailureKind::bad_message, decoded.error().detail});
        return;
    }
    if (auto* err = std::get_if<ErrorMsg>(&decoded.value())) {
        fail(failure_from_error_reply(*err, provider_, identity_.server_public_key,
                                      sent_request_hash_));
        return;
    }
    auto* ok = std::get_if<wire::CycleOkMsg>(&decoded.value());
    if (!ok) {
        fail({FailureKind::bad_message, "expected CYCLEOK"});
        return;
    }
    if (!provider_.verify(ok->sig_server, wire::signing_bytes(decoded.value()),
                          identity_.server_public_key)) {
        fail({FailureKind::bad_signature, "CYCLEOK signature invalid"});
        return;
    }
    crypto::Digest expected =
        provider_.hash(concat(identity_.uuid, new_keypair_.public_key));
    if (!bytes_equal(ok->verification_hash, expected)) {
        fail({FailureKind::hash_mismatch, "CYCLEOK verification hash mismatch"});
        return;
    }
    identity_.keypair = std::move(new_keypair_);
    identity_.time.counter = 0;
    succeed(CycleDone{});
}

// --------------------------------------------------------------------------
// Token stamping (client side)
// --------------------------------------------------------------------------

StampClientMachine::StampClientMachine(ClientIdentity& identity,
                                       crypto::CryptoProvider& provider, uint8_t device,
                                       const std::array<uint8_t, 16>& perms)
    : identity_(identity), provider_(provider) {
    if (!wire::perms_mode_valid(perms[0])) {
        fail({FailureKind::invalid_perms, "permission modes 2-8 are reserved"});
        return;
    }
    if (identity_.time.at_max()) {
        fail({FailureKind::cycle_required, "protocol time ceiling reached"});
        return;
    }
    preview_.protocol = crypto::wire_byte(identity_.suite);
    preview_.device = device;
    preview_.uuid = identity_.uuid;
    preview_.perms = perms;
    preview_.time = identity_.time.counter;
    provider_.random_bytes(preview_.payload);

    kem_ = provider_.kem_generate();

    wire::StampMsg msg;
    msg.preview = preview_;
    msg.encaps_key = kem_.encapsulation_key;
    Bytes body = wire::signing_bytes(WireMessage{msg});
    msg.sig_client = provider_.sign(body, identity_.keypair.private_key);
    Bytes frame = wire::encode_message(WireMessage{msg}, provider_.params());
    sent_request_hash_ = provider_.hash(frame);
    push_send(std::move(frame));
    // Every emitted token request consumes one protocol-time increment; a
    // lost reply is reconciled through the server's BAD_TIME resync report.
    identity_.time.counter += 1;
}

void StampClientMachine::on_input(Input&& input) {
    auto* frame = std::get_if<FrameIn>(&input);
    if (!frame) {
        fail({FailureKind::store_failure, "unexpected store reply"});
        return;
    }
    auto decoded = wire::decode_message(frame->body, provider_.params());
    if (!decoded.ok()) {
        fail({FailureKind::bad_message, decoded.error().detail});
        return;
    }
    if (auto* err = std::get_if<ErrorMsg>(&decoded.value())) {
        Failure failure = failure_from_error_reply(*err, provider_, identity_.server_public_key,
                                                   sent_request_hash_);
        if (failure.kind == FailureKind::time_resync) {
            identity_.time.counter = failure.correct_time;
        }
        fail(std::move(failure));
        return;
    }
    auto* stamped = std::get_if<wire::StampedMsg>(&decoded.value());
    if (!stamped) {
        fail({FailureKind::bad_message, "expected STAMPED"});
        return;
    }
    if (!provider_.verify(stamped->sig_server, wire::signing_bytes(decoded.value()),
                          identity_.server_public_key)) {
        fail({FailureKind::bad_signature, "STAMPED signature invalid"});
        return;
    }

    wire::TokenBytes preview_bytes = wire::encode_token(preview_);
    auto secret = provider_.kem_decapsulate(stamped->ciphertext, kem_.decapsulation_key);
    if (!secret.ok()) {
        // Any decapsulation mismatch surfaces as an approval verification
        // failure; there is no final token to agree on.
        fail({FailureKind::hash_mismatch,
              "ciphertext rejected by decapsulation: " + secret.error().detail});
        return;
    }

    wire::Token final_token = preview_;
    final_token.payload = secret.value().bytes;
    wire::TokenBytes final_bytes = wire::encode_token(final_token);
    crypto::Digest approval = provider_.hash(concat(final_bytes, preview_bytes));
    if (!bytes_equal(approval, stamped->approval_hash)) {
        fail({FailureKind::hash_mismatch, "approval hash mismatch"});
        return;
    }
    succeed(FinalToken{final_token, std::move(approval), preview_bytes});
}

}  // namespace pqm2m::protocol
