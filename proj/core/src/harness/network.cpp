#include "pqm2m/harness/network.hpp"

#include <deque>
#include <memory>

#include "pqm2m/protocol/check.hpp"

namespace pqm2m::harness {

namespace {

using protocol::Failure;
using protocol::FailureKind;

std::unique_ptr<protocol::StateMachine> dispatch(uint8_t discriminator,
                                                 const protocol::ServerIdentity& identity,
                                                 crypto::CryptoProvider& provider,
                                                 const protocol::ServerPolicy& policy) {
    using wire::MsgType;
    switch (static_cast<MsgType>(discriminator)) {
        case MsgType::register_client:
            return std::make_unique<protocol::RegisterServerMachine>(identity, provider, policy);
        case MsgType::cycle:
            return std::make_unique<protocol::CycleServerMachine>(identity, provider, policy);
        case MsgType::stamp:
            return std::make_unique<protocol::StampServerMachine>(identity, provider, policy);
        default:
            return nullptr;
    }
}

template <typename M>
std::optional<Failure> machine_failure(const M& machine) {
    const auto& result = machine.poll_result();
    if (result && !result->ok()) return result->error();
    return std::nullopt;
}

std::optional<Failure> result_failure(const protocol::StateMachine& machine) {
    if (auto* m = dynamic_cast<const protocol::RegisterServerMachine*>(&machine)) {
        return machine_failure(*m);
    }
    if (auto* m = dynamic_cast<const protocol::CycleServerMachine*>(&machine)) {
        return machine_failure(*m);
    }
    if (auto* m = dynamic_cast<const protocol::StampServerMachine*>(&machine)) {
        return machine_failure(*m);
    }
    return std::nullopt;
}

}  // namespace

VirtualNetwork::VirtualNetwork(protocol::ServerIdentity server_identity,
                               crypto::CryptoProvider& provider, store::ServerStore& store,
                               const store::Clock& clock, protocol::ServerPolicy policy,
                               AttackerHook hook)
    : server_identity_(std::move(server_identity)),
      provider_(provider),
      store_(store),
      clock_(clock),
      policy_(policy),
      hook_(std::move(hook)) {}

protocol::ServerPolicy VirtualNetwork::current_policy() const {
    protocol::ServerPolicy policy = policy_;
    policy.now = clock_.now();
    return policy;
}

std::vector<Bytes> VirtualNetwork::server_handle(const Bytes& body, ServerReport& report) {
    report.saw_request = true;
    std::vector<Bytes> replies;

    if (body.size() == wire::kTokenBytes) {
        auto result = protocol::server_check_token(body, provider_, store_, clock_.now());
        replies.push_back(protocol::encode_check_reply(result));
        return replies;
    }
    if (body.empty()) return replies;

    auto machine = dispatch(body[0], server_identity_, provider_, current_policy());
    if (!machine) return replies;  // undispatchable frame: connection dropped

    machine->recv(protocol::FrameIn{body});
    while (auto work = machine->poll_transmit()) {
        if (auto* frame = std::get_if<protocol::SendFrame>(&*work)) {
            replies.push_back(frame->body);
        } else if (!machine->finished()) {
            machine->recv(protocol::execute(store_, std::get<protocol::StoreCommand>(*work)));
        }
    }
    report.failure = result_failure(*machine);
    return replies;
}

ServerReport VirtualNetwork::run_client_action(protocol::StateMachine& machine,
                                               size_t action_index) {
    ServerReport report;
    std::deque<Bytes> client_inbox;

    for (;;) {
        if (auto work = machine.poll_transmit()) {
            auto* frame = std::get_if<protocol::SendFrame>(&*work);
            if (!frame) {
                machine.abort({FailureKind::store_failure, "client machine issued store command"});
                return report;
            }
            transcript_.push_back({Direction::to_server, frame->body, action_index});
            AttackerVerdict verdict = hook_
                                          ? hook_(Direction::to_server, frame->body,
                                                  message_counter_++)
                                          : AttackerVerdict{Deliver{frame->body}};
            if (auto* deliver = std::get_if<Deliver>(&verdict)) {
                for (Bytes& reply : server_handle(deliver->body, report)) {
                    transcript_.push_back({Direction::to_client, reply, action_index});
                    AttackerVerdict reply_verdict =
                        hook_ ? hook_(Direction::to_client, reply, message_counter_++)
                              : AttackerVerdict{Deliver{reply}};
                    if (auto* rd = std::get_if<Deliver>(&reply_verdict)) {
                        client_inbox.push_back(rd->body);
                    } else if (auto* rr = std::get_if<Respond>(&reply_verdict)) {
                        client_inbox.push_back(rr->to_client_body);
                    }
                    // Drop: the reply vanishes.
                }
            } else if (auto* respond = std::get_if<Respond>(&verdict)) {
                client_inbox.push_back(respond->to_client_body);
            }
            // Drop: the request vanishes.
            continue;
        }
        if (machine.finished()) return report;
        if (client_inbox.empty()) {
            // Nothing will ever arrive; the in-order analog of a timeout.
            machine.abort({FailureKind::transport, "message dropped by the network"});
            return report;
        }
        machine.recv(protocol::FrameIn{std::move(client_inbox.front())});
        client_inbox.pop_front();
    }
}

ServerReport VirtualNetwork::deliver_to_server(const Bytes& body, size_t action_index) {
    ServerReport report;
    for (Bytes& reply : server_handle(body, report)) {
        transcript_.push_back({Direction::to_client, reply, action_index});
        if (hook_) hook_(Direction::to_client, reply, message_counter_++);
    }
    return report;
}

}  // namespace pqm2m::harness
