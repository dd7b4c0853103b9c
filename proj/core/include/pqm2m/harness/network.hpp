#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "pqm2m/crypto/provider.hpp"
#include "pqm2m/protocol/server_machines.hpp"
#include "pqm2m/store/clock.hpp"

namespace pqm2m::harness {

enum class Direction : uint8_t { to_server, to_client };

struct TranscriptEntry {
    Direction direction;
    Bytes body;
    size_t action_index;
};

// The attacker sees every frame before delivery and rules on it. Respond
// swallows the frame and answers the client directly (impersonation with
// revealed keys); honest parties only ever see what the attacker lets
// through.
struct Deliver {
    Bytes body;
};
struct Drop {};
struct Respond {
    Bytes to_client_body;
};
using AttackerVerdict = std::variant<Deliver, Drop, Respond>;

using AttackerHook =
    std::function<AttackerVerdict(Direction direction, const Bytes& body, size_t message_index)>;

struct ServerReport {
    bool saw_request = false;
    std::optional<protocol::Failure> failure;
};

/// Deterministic in-process wire between one client-side machine and the
/// server role, with the attacker hook interposed on every message in both
/// directions. Delivery is in-order per direction; the server services one
/// request frame per machine, exactly like the TCP front end.
class VirtualNetwork {
public:
    VirtualNetwork(protocol::ServerIdentity server_identity, crypto::CryptoProvider& provider,
                   store::ServerStore& store, const store::Clock& clock,
                   protocol::ServerPolicy policy, AttackerHook hook);

    /// Drives a client machine to completion across the wire. Messages the
    /// attacker drops leave the client aborted with a transport failure, the
    /// in-order analog of a connection timeout.
    ServerReport run_client_action(protocol::StateMachine& machine, size_t action_index);

    /// Hands a raw frame to the server on a fresh connection (inject /
    /// replay). Replies are observed by the attacker but go nowhere.
    ServerReport deliver_to_server(const Bytes& body, size_t action_index);

    const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
    void set_hook(AttackerHook hook) { hook_ = std::move(hook); }

    protocol::ServerPolicy current_policy() const;

private:
    std::vector<Bytes> server_handle(const Bytes& body, ServerReport& report);

    protocol::ServerIdentity server_identity_;
    crypto::CryptoProvider& provider_;
    store::ServerStore& store_;
    const store::Clock& clock_;
    protocol::ServerPolicy policy_;
    AttackerHook hook_;
    std::vector<TranscriptEntry> transcript_;
    size_t message_counter_ = 0;
};

}  // namespace pqm2m::harness
