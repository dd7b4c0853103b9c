#include "pqm2m/net/client.hpp"

#include "pqm2m/net/driver.hpp"

namespace pqm2m::net {

namespace {

using protocol::Failure;
using protocol::FailureKind;

template <typename MachineT>
auto run_over_tcp(MachineT& machine, const std::string& host, uint16_t port)
    -> std::optional<Failure> {
    auto channel = tcp_connect(host, port);
    if (!channel.ok()) {
        return Failure{FailureKind::transport, channel.error().detail};
    }
    drive(machine, *channel.value(), nullptr);
    return std::nullopt;
}

template <typename T, typename MachineT>
Result<T, Failure> finish(MachineT& machine, std::optional<Failure> transport_failure) {
    if (transport_failure) return *transport_failure;
    const auto& result = machine.poll_result();
    if (!result) return Failure{FailureKind::transport, "machine did not terminate"};
    if (!result->ok()) return result->error();
    return result->value();
}

}  // namespace

Result<protocol::ClientIdentity, Failure> remote_register(const protocol::AdminIdentity& admin,
                                                          crypto::CryptoProvider& provider,
                                                          const std::string& host, uint16_t port,
                                                          const Uuid& new_uuid,
                                                          crypto::SigningKeyPair new_keypair,
                                                          uint64_t time_max) {
    protocol::RegisterAdminMachine machine(admin, provider, new_uuid, std::move(new_keypair),
                                           time_max);
    auto failure = run_over_tcp(machine, host, port);
    return finish<protocol::ClientIdentity>(machine, failure);
}

Result<protocol::CycleDone, Failure> remote_cycle(protocol::ClientIdentity& identity,
                                                  crypto::CryptoProvider& provider,
                                                  const std::string& host, uint16_t port) {
    protocol::CycleClientMachine machine(identity, provider);
    auto failure = run_over_tcp(machine, host, port);
    return finish<protocol::CycleDone>(machine, failure);
}

Result<protocol::FinalToken, Failure> remote_stamp(protocol::ClientIdentity& identity,
                                                   crypto::CryptoProvider& provider,
                                                   const std::string& host, uint16_t port,
                                                   uint8_t device,
                                                   const std::array<uint8_t, 16>& perms) {
    protocol::StampClientMachine machine(identity, provider, device, perms);
    auto failure = run_over_tcp(machine, host, port);
    return finish<protocol::FinalToken>(machine, failure);
}

Result<protocol::CheckResult, Failure> remote_check(ByteView token_bytes,
                                                    const std::string& host, uint16_t port) {
    auto channel = tcp_connect(host, port);
    if (!channel.ok()) return Failure{FailureKind::transport, channel.error().detail};
    if (!channel.value()->send_frame(token_bytes)) {
        return Failure{FailureKind::transport, "send failed"};
    }
    auto reply = channel.value()->recv_frame();
    if (!reply) return Failure{FailureKind::transport, "no check reply"};
    auto decoded = protocol::decode_check_reply(*reply);
    if (!decoded) return Failure{FailureKind::bad_message, "malformed check reply"};
    return *decoded;
}

}  // namespace pqm2m::net
