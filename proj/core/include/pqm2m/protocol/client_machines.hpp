#pragma once

#include "pqm2m/protocol/machine.hpp"

namespace pqm2m::protocol {

/// Admin-side registration: emits M1, consumes M2, and on success yields the
/// installable credentials for the new client. The caller generates the new
/// uuid and key pair so it controls where key material comes from.
class RegisterAdminMachine final : public Machine<ClientIdentity> {
public:
    RegisterAdminMachine(const AdminIdentity& admin, crypto::CryptoProvider& provider,
                         const Uuid& new_uuid, crypto::SigningKeyPair new_keypair,
                         uint64_t time_max = std::numeric_limits<uint64_t>::max());

private:
    void on_input(Input&& input) override;

    AdminIdentity admin_;
    crypto::CryptoProvider& provider_;
    Uuid new_uuid_;
    crypto::SigningKeyPair new_keypair_;
    uint64_t time_max_;
    crypto::Digest sent_request_hash_;
};

struct CycleDone {};

/// Client-initiated key rotation. Mutates `identity` in place: on success the
/// new key pair is installed and the protocol time resets to zero. The
/// identity must outlive the machine.
class CycleClientMachine final : public Machine<CycleDone> {
public:
    CycleClientMachine(ClientIdentity& identity, crypto::CryptoProvider& provider);

private:
    void on_input(Input&& input) override;

    ClientIdentity& identity_;
    crypto::CryptoProvider& provider_;
    crypto::SigningKeyPair new_keypair_;
    crypto::Digest sent_request_hash_;
};

/// Token stamping, client side. Emits M5 and increments the identity's
/// counter when the request is emitted; a BAD_TIME error reply resynchronizes
/// the counter to the server's value and surfaces as a retryable
/// time_resync failure. The identity must outlive the machine.
class StampClientMachine final : public Machine<FinalToken> {
public:
    StampClientMachine(ClientIdentity& identity, crypto::CryptoProvider& provider, uint8_t device,
                       const std::array<uint8_t, 16>& perms);

private:
    void on_input(Input&& input) override;

    ClientIdentity& identity_;
    crypto::CryptoProvider& provider_;
    wire::Token preview_{};
    crypto::KemKeyPair kem_;
    crypto::Digest sent_request_hash_;
};

}  // namespace pqm2m::protocol
