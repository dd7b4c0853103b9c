#pragma once

#include <deque>
#include <map>
#include <memory>
#include <string>

#include "pqm2m/harness/knowledge.hpp"
#include "pqm2m/harness/network.hpp"
#include "pqm2m/protocol/check.hpp"
#include "pqm2m/protocol/client_machines.hpp"
#include "pqm2m/store/memory_store.hpp"

namespace pqm2m::harness {

/// Deterministic attack testbed: all roles in one process on a virtual wire,
/// a scriptable attacker between them, and a knowledge set tracking exactly
/// what that attacker has observed or been handed by reveal rules. Runs on
/// the symbolic provider so transcripts are structurally inspectable.
class Harness {
public:
    struct Config {
        crypto::SecurityLevel level = crypto::SecurityLevel::L1;
        uint64_t seed = 1;
        store::Timestamp key_lifetime = 1LL << 40;
        store::Timestamp token_ttl = 3600;
        uint64_t time_max = std::numeric_limits<uint64_t>::max();
    };

    struct ActionOutcome {
        size_t action_index = 0;
        bool ok = false;
        std::optional<protocol::Failure> client_failure;
        std::optional<protocol::Failure> server_failure;
    };

    explicit Harness(Config config);

    // -- roles ---------------------------------------------------------------
    void add_admin(const std::string& name);
    bool has_client(const std::string& name) const { return clients_.count(name) > 0; }
    protocol::ClientIdentity& client(const std::string& name);

    // -- attacker directives, each consumed by the next observed message -----
    void queue_forward();
    void queue_drop();
    void queue_tamper(size_t offset, uint8_t xor_mask);
    void queue_replace(Bytes body);

    // -- protocol actions across the attacker-controlled wire ----------------
    ActionOutcome register_client(const std::string& admin_name, const std::string& client_name);
    ActionOutcome cycle(const std::string& client_name);
    ActionOutcome stamp(const std::string& client_name, uint8_t device = 0,
                        std::array<uint8_t, 16> perms = {});
    protocol::CheckResult check(ByteView token_bytes);
    protocol::CheckResult check_latest(const std::string& client_name);

    /// Re-delivers a recorded transcript frame to the server.
    ActionOutcome replay(size_t transcript_index);
    /// Delivers attacker-crafted bytes to the server.
    ActionOutcome inject(Bytes body);

    /// Attacker impersonates the server for one stamp: intercepts M5 and
    /// answers with a self-made M6. Requires the server key to have been
    /// revealed; the spoofed session's secret becomes attacker knowledge.
    ActionOutcome mitm_stamp(const std::string& client_name);

    // -- reveal rules ---------------------------------------------------------
    void reveal_client_key(const std::string& client_name);
    void reveal_server_key();
    void reveal_token(size_t session_index);

    // -- introspection --------------------------------------------------------
    const std::vector<TranscriptEntry>& transcript() const { return network_->transcript(); }
    const std::vector<SessionSecret>& sessions() const { return sessions_; }
    const std::vector<protocol::FinalToken>& tokens(const std::string& client_name) const;
    store::MemoryStore& store() { return store_; }
    AttackerKnowledge& knowledge() { return *knowledge_; }
    crypto::CryptoProvider& provider() { return *provider_; }
    SecrecyReport secrecy() const { return assert_secrecy(sessions_, *knowledge_); }
    void advance_clock(store::Timestamp seconds) { clock_.advance(seconds); }

private:
    AttackerVerdict on_message(Direction direction, const Bytes& body, size_t message_index);
    ActionOutcome finish_action(const ServerReport& report,
                                const std::optional<protocol::Failure>& client_failure,
                                bool client_ok);

    Config config_;
    std::shared_ptr<crypto::SymbolicWorld> world_;
    std::unique_ptr<crypto::CryptoProvider> provider_;
    store::ManualClock clock_{1'000'000};
    store::MemoryStore store_;
    protocol::ServerIdentity server_identity_;
    Bytes server_private_key_;  // held apart; enters knowledge only on reveal
    std::unique_ptr<AttackerKnowledge> knowledge_;
    std::unique_ptr<VirtualNetwork> network_;

    std::map<std::string, protocol::AdminIdentity> admins_;
    std::map<std::string, protocol::ClientIdentity> clients_;
    std::map<std::string, std::vector<protocol::FinalToken>> tokens_;
    std::vector<SessionSecret> sessions_;

    using Directive = std::function<AttackerVerdict(const Bytes&)>;
    std::deque<Directive> directives_;
    bool mitm_armed_ = false;
    size_t action_counter_ = 0;
};

struct TamperSweepReport {
    size_t positions = 0;
    size_t acceptances = 0;
    std::vector<std::string> accepted;  // "<message>:<offset>" for diagnosis
};

/// Exhaustive single-byte tamper sweep (XOR 0xff) over every byte of all six
/// protocol messages in a register/cycle/stamp session. Client-to-server
/// tampering must leave the store byte-identical; server-to-client tampering
/// must terminate the client with a failure. Counts any accepted tampered
/// message.
TamperSweepReport run_tamper_sweep(crypto::SecurityLevel level, uint64_t seed);

}  // namespace pqm2m::harness
