#pragma once

#include "pqm2m/net/channel.hpp"
#include "pqm2m/protocol/check.hpp"
#include "pqm2m/protocol/client_machines.hpp"

namespace pqm2m::net {

// One-shot client actions over TCP: connect, run one machine, close.

Result<protocol::ClientIdentity, protocol::Failure> remote_register(
    const protocol::AdminIdentity& admin, crypto::CryptoProvider& provider,
    const std::string& host, uint16_t port, const Uuid& new_uuid,
    crypto::SigningKeyPair new_keypair,
    uint64_t time_max = std::numeric_limits<uint64_t>::max());

Result<protocol::CycleDone, protocol::Failure> remote_cycle(protocol::ClientIdentity& identity,
                                                            crypto::CryptoProvider& provider,
                                                            const std::string& host,
                                                            uint16_t port);

Result<protocol::FinalToken, protocol::Failure> remote_stamp(
    protocol::ClientIdentity& identity, crypto::CryptoProvider& provider, const std::string& host,
    uint16_t port, uint8_t device, const std::array<uint8_t, 16>& perms);

Result<protocol::CheckResult, protocol::Failure> remote_check(ByteView token_bytes,
                                                              const std::string& host,
                                                              uint16_t port);

}  // namespace pqm2m::net
